"""Production, damages, abatement cost, investment, and capital dynamics.

All scalar functions also accept numpy arrays; the engine uses them
vectorized across regions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SimParams, VariantConfig
from .errors import DomainError
from .regions import RegionGrowth, RegionState

# Published calibration of the steep high-temperature damage curve:
# D = 1 - 1/(1 + (T/a)^2 + (T/b)^c).
WEITZMAN_A = 20.46
WEITZMAN_B = 6.081
WEITZMAN_C = 6.754

#: Damage and abatement fractions are capped here so output never vanishes
#: entirely and downstream shares remain well defined.
FRACTION_CAP = 0.99

#: Residual weight of the level-dependent cost in the transitional
#: abatement variant; completed mitigation stays cheap but never free.
TRANSITIONAL_RESIDUAL = 0.2


@dataclass(frozen=True)
class EconomyStepOutput:
    """Per-region economic quantities for one step."""

    gross_output: float
    damage_fraction: float
    abatement_fraction: float
    net_output: float
    investment: float
    emissions: float


def gross_output(productivity, capital, labor, elasticity):
    """Cobb-Douglas production A * K^gamma * L^(1-gamma)."""
    return productivity * capital**elasticity * labor ** (1.0 - elasticity)


def damage_fraction(temperature, kind: str, pi1: float, pi2: float):
    """Fraction of gross output lost at the given temperature anomaly."""
    t = np.asarray(temperature, dtype=np.float64)
    if kind == "dice_quadratic":
        d = 1.0 - 1.0 / (1.0 + pi1 * t + pi2 * t * t)
    elif kind == "weitzman":
        d = 1.0 - 1.0 / (1.0 + (t / WEITZMAN_A) ** 2 + (t / WEITZMAN_B) ** WEITZMAN_C)
    else:
        raise DomainError(f"unknown damage kind {kind!r}")
    d = np.minimum(d, FRACTION_CAP)
    return float(d) if np.ndim(temperature) == 0 else d


def calibrate_damage_coefficient(t_ref: float, d_ref: float) -> float:
    """Quadratic coefficient pi2 (with pi1 = 0) hitting d_ref exactly at t_ref."""
    if t_ref <= 0:
        raise DomainError(f"reference temperature must be > 0, got {t_ref}")
    if not 0.0 < d_ref < 1.0:
        raise DomainError(f"reference damage must be in (0,1), got {d_ref}")
    return d_ref / ((1.0 - d_ref) * t_ref * t_ref)


def abatement_fraction(mitigation, mitigation_prev, kind: str, theta1, theta2, theta3=1.0):
    """Fraction of gross output spent on mitigation.

    'persistent' charges the current level only; 'transitional' charges a
    small residual of that plus the squared increase over the previous level.
    """
    mu = np.asarray(mitigation, dtype=np.float64)
    if kind == "persistent":
        lam = theta1 * mu**theta2
    elif kind == "transitional":
        rise = np.maximum(0.0, mu - np.asarray(mitigation_prev, dtype=np.float64))
        lam = TRANSITIONAL_RESIDUAL * theta1 * mu**theta2 + theta3 * rise * rise
    else:
        raise DomainError(f"unknown abatement kind {kind!r}")
    lam = np.clip(lam, 0.0, FRACTION_CAP)
    return float(lam) if np.ndim(mitigation) == 0 else lam


def step_economy(
    region: RegionState,
    growth: RegionGrowth,
    savings_rate: float,
    mitigation_rate: float,
    temperature: float,
    params: SimParams,
    variant: VariantConfig,
) -> tuple[EconomyStepOutput, RegionState]:
    """One region's production step plus its advanced state.

    The balance is untouched here; trade settles it afterwards.
    """
    dt = params.dt_years
    y_gross = gross_output(
        region.productivity, region.capital, region.labor, params.output_elasticity
    )
    dmg = damage_fraction(
        max(temperature, 0.0), variant.damage_kind, params.damage_pi1, params.damage_pi2
    )
    abat = abatement_fraction(
        mitigation_rate,
        region.mitigation_prev,
        variant.abatement_kind,
        growth.abatement_theta1,
        params.theta2,
        params.theta3,
    )
    y_net = (1.0 - dmg) * (1.0 - abat) * y_gross
    investment = savings_rate * y_net
    emissions = region.emission_intensity * (1.0 - mitigation_rate) * y_gross

    out = EconomyStepOutput(
        gross_output=float(y_gross),
        damage_fraction=float(dmg),
        abatement_fraction=float(abat),
        net_output=float(y_net),
        investment=float(investment),
        emissions=float(emissions),
    )
    new_state = RegionState(
        capital=float(
            region.capital * (1.0 - params.depreciation) ** dt + dt * investment
        ),
        labor=float(region.labor * (1.0 + growth.labor_growth) ** dt),
        productivity=float(region.productivity * (1.0 + growth.productivity_growth) ** dt),
        emission_intensity=float(
            region.emission_intensity * (1.0 - growth.intensity_decline) ** dt
        ),
        mitigation_prev=float(mitigation_rate),
        balance=region.balance,
    )
    return out, new_state
