"""Discrete action encoding: 5 action types, 10 levels each."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidActionError

NUM_LEVELS = 10

#: Canonical ordering of the five action dimensions, used by sweep grids,
#: CSV columns, and correlation tables.
ACTION_DIMENSIONS = ("savings", "mitigation", "export", "imports", "tariffs")


def level_to_rate(level: int) -> float:
    """Map a discrete action level in {0..9} to the rate level/10.

    Level 9 is the maximum; a rate of 1.0 is not reachable.
    """
    if not isinstance(level, (int, np.integer)) or isinstance(level, bool):
        raise InvalidActionError(f"action level must be an integer, got {level!r}")
    if not 0 <= level < NUM_LEVELS:
        raise InvalidActionError(f"action level {level} outside 0..{NUM_LEVELS - 1}")
    return level / 10.0


def levels_to_rates(levels: np.ndarray) -> np.ndarray:
    """Vectorized level -> rate conversion (no validation)."""
    return np.asarray(levels, dtype=np.float64) / 10.0


@dataclass(frozen=True)
class ActionSet:
    """One region's action for one step.

    ``import_levels`` and ``tariff_levels`` have one entry per region;
    the self entry must be zero and is ignored by the trade step.
    """

    savings_level: int
    mitigation_level: int
    max_export_level: int
    import_levels: tuple[int, ...]
    tariff_levels: tuple[int, ...]

    def validate(self, region: int, n_regions: int) -> None:
        for name, lvl in (
            ("savings", self.savings_level),
            ("mitigation", self.mitigation_level),
            ("export", self.max_export_level),
        ):
            if not 0 <= lvl < NUM_LEVELS:
                raise InvalidActionError(f"region {region}: {name} level {lvl} out of range")
        for name, vec in (("imports", self.import_levels), ("tariffs", self.tariff_levels)):
            if len(vec) != n_regions:
                raise InvalidActionError(
                    f"region {region}: {name} vector has length {len(vec)}, expected {n_regions}"
                )
            if any(not 0 <= v < NUM_LEVELS for v in vec):
                raise InvalidActionError(f"region {region}: {name} level out of range")
            if vec[region] != 0:
                raise InvalidActionError(
                    f"region {region}: self entry of {name} vector must be 0"
                )


class JointActions:
    """All regions' actions for one step, stored as integer arrays.

    ``imports[i, j]`` / ``tariffs[i, j]`` refer to region i importing from /
    tariffing region j. Diagonals are zero.
    """

    __slots__ = ("savings", "mitigation", "export", "imports", "tariffs")

    def __init__(
        self,
        savings: np.ndarray,
        mitigation: np.ndarray,
        export: np.ndarray,
        imports: np.ndarray,
        tariffs: np.ndarray,
    ):
        self.savings = np.asarray(savings, dtype=np.int64)
        self.mitigation = np.asarray(mitigation, dtype=np.int64)
        self.export = np.asarray(export, dtype=np.int64)
        self.imports = np.asarray(imports, dtype=np.int64)
        self.tariffs = np.asarray(tariffs, dtype=np.int64)

    @property
    def n_regions(self) -> int:
        return self.savings.shape[0]

    @classmethod
    def from_action_sets(cls, sets: list[ActionSet]) -> "JointActions":
        n = len(sets)
        for i, a in enumerate(sets):
            a.validate(i, n)
        return cls(
            savings=np.array([a.savings_level for a in sets]),
            mitigation=np.array([a.mitigation_level for a in sets]),
            export=np.array([a.max_export_level for a in sets]),
            imports=np.array([a.import_levels for a in sets]),
            tariffs=np.array([a.tariff_levels for a in sets]),
        )

    @classmethod
    def uniform(
        cls,
        n_regions: int,
        savings: int,
        mitigation: int,
        export: int,
        imports: int,
        tariffs: int,
    ) -> "JointActions":
        """Identical levels for every region (diagonals forced to zero)."""
        for name, lvl in (
            ("savings", savings),
            ("mitigation", mitigation),
            ("export", export),
            ("imports", imports),
            ("tariffs", tariffs),
        ):
            if not 0 <= lvl < NUM_LEVELS:
                raise InvalidActionError(f"{name} level {lvl} out of range")
        off_diag = 1 - np.eye(n_regions, dtype=np.int64)
        return cls(
            savings=np.full(n_regions, savings),
            mitigation=np.full(n_regions, mitigation),
            export=np.full(n_regions, export),
            imports=imports * off_diag,
            tariffs=tariffs * off_diag,
        )

    def region(self, i: int) -> ActionSet:
        return ActionSet(
            savings_level=int(self.savings[i]),
            mitigation_level=int(self.mitigation[i]),
            max_export_level=int(self.export[i]),
            import_levels=tuple(int(v) for v in self.imports[i]),
            tariff_levels=tuple(int(v) for v in self.tariffs[i]),
        )

    def copy(self) -> "JointActions":
        return JointActions(
            self.savings.copy(),
            self.mitigation.copy(),
            self.export.copy(),
            self.imports.copy(),
            self.tariffs.copy(),
        )

    def validate(self) -> None:
        n = self.n_regions
        for name, arr in (
            ("savings", self.savings),
            ("mitigation", self.mitigation),
            ("export", self.export),
        ):
            if arr.shape != (n,):
                raise InvalidActionError(f"{name} array has shape {arr.shape}")
            if arr.min() < 0 or arr.max() >= NUM_LEVELS:
                raise InvalidActionError(f"{name} level out of range")
        for name, mat in (("imports", self.imports), ("tariffs", self.tariffs)):
            if mat.shape != (n, n):
                raise InvalidActionError(f"{name} matrix has shape {mat.shape}")
            if mat.min() < 0 or mat.max() >= NUM_LEVELS:
                raise InvalidActionError(f"{name} level out of range")
            if np.any(np.diag(mat) != 0):
                raise InvalidActionError(f"{name} matrix has nonzero diagonal")
