"""Exception hierarchy shared across the simulator."""


class RicensimError(Exception):
    """Base class for all simulator errors."""


class ConfigError(RicensimError, ValueError):
    """A configuration value violates an invariant. Message names the key."""


class InvalidActionError(RicensimError, ValueError):
    """An action level is outside the discrete action space."""


class DomainError(RicensimError, ValueError):
    """A numeric input is outside the domain of a model function."""


class ProtocolError(RicensimError, RuntimeError):
    """The negotiation/masking protocol was violated."""


class MaskViolationError(ProtocolError):
    """An action fell below its masked floor."""

    def __init__(self, region: int, dimension: str, level: int, floor: int):
        self.region = region
        self.dimension = dimension
        self.level = level
        self.floor = floor
        super().__init__(
            f"region {region}: {dimension} level {level} violates mask floor {floor}"
        )
