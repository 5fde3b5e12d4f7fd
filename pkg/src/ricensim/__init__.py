"""Deterministic multi-region climate-economy simulator with bilateral
trade, tariffs, and a negotiation/masking protocol, plus the experiment
harness that probes their reward structure."""

from .actions import ACTION_DIMENSIONS, NUM_LEVELS, ActionSet, JointActions, level_to_rate
from .config import (
    ClimateParams,
    DisasterPenalty,
    NegotiationConfig,
    SimParams,
    VariantConfig,
)
from .engine import (
    EpisodeRecord,
    EpisodeSummary,
    Observation,
    World,
    reset,
    run_episode,
    run_episode_summary,
    run_fixed_actions_summary,
    step,
)
from .errors import (
    ConfigError,
    DomainError,
    InvalidActionError,
    MaskViolationError,
    ProtocolError,
    RicensimError,
)
from .policies import (
    IDEAL_TRADE_POLICY,
    FixedLevelsPolicy,
    PariahOverridePolicy,
    UniformRandomPolicy,
)
from .regions import RegionGrowth, RegionState, generate_regions

__version__ = "0.1.0"

__all__ = [
    "ACTION_DIMENSIONS",
    "NUM_LEVELS",
    "ActionSet",
    "ClimateParams",
    "ConfigError",
    "DisasterPenalty",
    "DomainError",
    "EpisodeRecord",
    "EpisodeSummary",
    "FixedLevelsPolicy",
    "IDEAL_TRADE_POLICY",
    "InvalidActionError",
    "JointActions",
    "MaskViolationError",
    "NegotiationConfig",
    "Observation",
    "PariahOverridePolicy",
    "ProtocolError",
    "RegionGrowth",
    "RegionState",
    "RicensimError",
    "SimParams",
    "UniformRandomPolicy",
    "VariantConfig",
    "World",
    "generate_regions",
    "level_to_rate",
    "reset",
    "run_episode",
    "run_episode_summary",
    "run_fixed_actions_summary",
    "step",
    "__version__",
]
