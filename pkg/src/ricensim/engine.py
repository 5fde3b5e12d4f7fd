"""Episode orchestration: stepping order, rewards, variants, determinism.

A step runs through fixed phases: production and damages (at the step's
starting temperature), investment, trade matching and consumption, reward,
balance settlement, emissions into the carbon cycle, forcing and
temperature, then exogenous growth. Commitment masks for the *next* step
are drawn at the end of each step (and once at reset for the first step),
so policies always see the masks that will bind their actions.

Everything is deterministic given (params, variant, seed): negotiation
draws come from counter-based streams keyed on (seed, step), never from
shared mutable generators.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import climate as climate_mod
from . import economy as economy_mod
from . import trade as trade_mod
from .actions import JointActions, levels_to_rates
from .config import SimParams, VariantConfig
from .errors import ConfigError, MaskViolationError
from .negotiation import ActionMask, build_mask, commitments_from_arrays
from .regions import generate_regions

_NEGOTIATION_STREAM = 0x4E47
_POLICY_STREAM = 0x504C


@dataclass(frozen=True)
class Observation:
    """Minimal per-region view handed to policies."""

    region: int
    n_regions: int
    step: int
    year: float
    t_atmosphere: float
    capital: float
    labor: float
    productivity: float
    emission_intensity: float
    balance: float
    mean_other_mitigation_prev: float


@dataclass
class World:
    """Full simulation state between steps. Treated as a value: ``step``
    returns a new instance and never mutates its input."""

    params: SimParams
    variant: VariantConfig
    episode_seed: int
    t: int
    capital: np.ndarray
    labor: np.ndarray
    productivity: np.ndarray
    intensity: np.ndarray
    mitigation_prev: np.ndarray
    balance: np.ndarray
    theta1: np.ndarray
    productivity_growth: np.ndarray
    labor_growth: np.ndarray
    intensity_decline: np.ndarray
    carbon: np.ndarray
    t_atmosphere: float
    t_ocean: float
    transfer: np.ndarray
    commitments: np.ndarray | None
    initial_carbon_total: float
    cumulative_emissions: float

    @property
    def n_regions(self) -> int:
        return self.params.n_regions

    def observation(self, region: int) -> Observation:
        n = self.n_regions
        others = (self.mitigation_prev.sum() - self.mitigation_prev[region]) / (n - 1)
        return Observation(
            region=region,
            n_regions=n,
            step=self.t,
            year=self.t * self.params.dt_years,
            t_atmosphere=self.t_atmosphere,
            capital=float(self.capital[region]),
            labor=float(self.labor[region]),
            productivity=float(self.productivity[region]),
            emission_intensity=float(self.intensity[region]),
            balance=float(self.balance[region]),
            mean_other_mitigation_prev=float(others),
        )

    def masks(self) -> list[ActionMask] | None:
        """Binding masks for the upcoming step, or None when unconstrained.

        With mask enforcement switched off, commitments are still recorded
        but nothing constrains the actions, so policies see no mask.
        """
        neg = self.params.negotiation
        if not (neg.enabled and neg.enforce_masks) or self.commitments is None:
            return None
        return [build_mask(int(c), neg.dimensions) for c in self.commitments]


def _draw_commitments(params: SimParams, episode_seed: int, t: int) -> np.ndarray:
    """Uniform proposals, all-accept evaluations, maximum-accepted commitment."""
    rng = np.random.default_rng(
        np.random.SeedSequence([int(episode_seed), _NEGOTIATION_STREAM, int(t)])
    )
    proposals = rng.integers(0, 10, size=params.n_regions)
    return commitments_from_arrays(proposals, None)


def reset(params: SimParams, variant: VariantConfig, seed: int | None = None) -> World:
    """Fresh world: generated regions, initial climate, first-step masks."""
    if seed is None:
        seed = params.region_seed
    states, growths = generate_regions(params.n_regions, seed)
    cp = params.climate
    carbon = np.array(cp.initial_carbon_gtc, dtype=np.float64)
    commitments = (
        _draw_commitments(params, seed, 0) if params.negotiation.enabled else None
    )
    return World(
        params=params,
        variant=variant,
        episode_seed=int(seed),
        t=0,
        capital=np.array([s.capital for s in states]),
        labor=np.array([s.labor for s in states]),
        productivity=np.array([s.productivity for s in states]),
        intensity=np.array([s.emission_intensity for s in states]),
        mitigation_prev=np.array([s.mitigation_prev for s in states]),
        balance=np.array([s.balance for s in states]),
        theta1=np.array([g.abatement_theta1 for g in growths]),
        productivity_growth=np.array([g.productivity_growth for g in growths]),
        labor_growth=np.array([g.labor_growth for g in growths]),
        intensity_decline=np.array([g.intensity_decline for g in growths]),
        carbon=carbon,
        t_atmosphere=cp.initial_t_atmosphere,
        t_ocean=cp.initial_t_ocean,
        transfer=climate_mod.carbon_transfer_matrix(cp, params.dt_years),
        commitments=commitments,
        initial_carbon_total=float(carbon.sum()),
        cumulative_emissions=0.0,
    )


@dataclass(frozen=True)
class StepDetail:
    """Everything computed during one step, for records and diagnostics."""

    gross_output: np.ndarray
    damage_fraction: float
    abatement_fraction: np.ndarray
    net_output: np.ndarray
    investment: np.ndarray
    emissions: np.ndarray
    emissions_global: float
    flows: trade_mod.TradeFlows
    consumption: trade_mod.ConsumptionBreakdown
    rewards: np.ndarray
    balance_after: np.ndarray
    carbon_after: np.ndarray
    t_atmosphere_after: float
    t_ocean_after: float
    commitments: np.ndarray | None


@dataclass(frozen=True)
class StepResult:
    world: World
    rewards: np.ndarray
    detail: StepDetail

    def masks(self) -> list[ActionMask] | None:
        return self.world.masks()


def _enforce_masks(world: World, actions: JointActions) -> None:
    neg = world.params.negotiation
    if not (neg.enabled and neg.enforce_masks) or world.commitments is None:
        return
    dim_levels = {"mitigation": actions.mitigation, "savings": actions.savings}
    for dim in neg.dimensions:
        levels = dim_levels[dim]
        below = np.flatnonzero(levels < world.commitments)
        if below.size:
            r = int(below[0])
            raise MaskViolationError(r, dim, int(levels[r]), int(world.commitments[r]))


def step(world: World, actions: JointActions) -> StepResult:
    """Advance one step. Pure: identical inputs give identical outputs."""
    actions.validate()
    if actions.n_regions != world.n_regions:
        raise ConfigError(
            f"actions cover {actions.n_regions} regions, world has {world.n_regions}"
        )
    _enforce_masks(world, actions)

    p = world.params
    v = world.variant
    dt = p.dt_years

    # Production, damages at the step's starting temperature, abatement.
    savings_rate = levels_to_rates(actions.savings)
    mitigation_rate = levels_to_rates(actions.mitigation)
    y_gross = economy_mod.gross_output(
        world.productivity, world.capital, world.labor, p.output_elasticity
    )
    dmg = economy_mod.damage_fraction(
        max(world.t_atmosphere, 0.0), v.damage_kind, p.damage_pi1, p.damage_pi2
    )
    abat = economy_mod.abatement_fraction(
        mitigation_rate, world.mitigation_prev, v.abatement_kind, world.theta1, p.theta2, p.theta3
    )
    y_net = (1.0 - dmg) * (1.0 - abat) * y_gross
    investment = savings_rate * y_net
    emissions = world.intensity * (1.0 - mitigation_rate) * y_gross
    emissions_global = float(emissions.sum())

    # Trade matching and the consumption split.
    budget = p.import_budget * trade_mod.import_budget_multiplier(world.balance, y_gross)
    demanded = trade_mod.build_demand(actions.imports, y_gross, budget)
    capacity = levels_to_rates(actions.export) * y_gross
    scaled = trade_mod.ration_exports(demanded, capacity)
    tariffed, revenue = trade_mod.apply_tariffs(scaled, actions.tariffs)
    flows = trade_mod.TradeFlows(demanded=demanded, scaled=scaled, tariffed=tariffed, revenue=revenue)
    cons = trade_mod.consumption(y_net, investment, scaled, tariffed, p.foreign_weight, v)

    # Reward, with the optional disaster penalty at the same temperature the
    # damages saw.
    rewards = cons.aggregate.copy()
    if v.disaster is not None and world.t_atmosphere > v.disaster.threshold_degc:
        rewards -= v.disaster.penalty

    balance_after = trade_mod.step_balance(
        world.balance, flows.exports_scaled, flows.imports_scaled, revenue, v, dt
    )

    # Carbon, forcing, temperature.
    cp = p.climate
    carbon_after = climate_mod.step_carbon(
        world.carbon, emissions_global, dt, world.transfer, cp.emissions_floor
    )
    forcing = climate_mod.radiative_forcing(
        float(carbon_after[0]),
        cp.forcing_per_doubling,
        cp.reference_atmosphere_gtc,
        climate_mod.exogenous_forcing(cp, (world.t + 1) * dt),
    )
    t_at, t_lo = climate_mod.step_temperature(
        world.t_atmosphere,
        world.t_ocean,
        forcing,
        cp.heat_capacity_c1,
        cp.atm_ocean_exchange_c3,
        cp.ocean_uptake_c4,
        cp.temperature_feedback,
    )

    # Exogenous growth and capital accumulation.
    new_world = World(
        params=p,
        variant=v,
        episode_seed=world.episode_seed,
        t=world.t + 1,
        capital=world.capital * (1.0 - p.depreciation) ** dt + dt * investment,
        labor=world.labor * (1.0 + world.labor_growth) ** dt,
        productivity=world.productivity * (1.0 + world.productivity_growth) ** dt,
        intensity=world.intensity * (1.0 - world.intensity_decline) ** dt,
        mitigation_prev=mitigation_rate.copy(),
        balance=balance_after,
        theta1=world.theta1,
        productivity_growth=world.productivity_growth,
        labor_growth=world.labor_growth,
        intensity_decline=world.intensity_decline,
        carbon=carbon_after,
        t_atmosphere=t_at,
        t_ocean=t_lo,
        transfer=world.transfer,
        commitments=(
            _draw_commitments(p, world.episode_seed, world.t + 1)
            if p.negotiation.enabled
            else None
        ),
        initial_carbon_total=world.initial_carbon_total,
        cumulative_emissions=world.cumulative_emissions + dt * emissions_global,
    )
    detail = StepDetail(
        gross_output=y_gross,
        damage_fraction=float(dmg),
        abatement_fraction=abat,
        net_output=y_net,
        investment=investment,
        emissions=emissions,
        emissions_global=emissions_global,
        flows=flows,
        consumption=cons,
        rewards=rewards,
        balance_after=balance_after,
        carbon_after=carbon_after,
        t_atmosphere_after=t_at,
        t_ocean_after=t_lo,
        commitments=world.commitments,
    )
    return StepResult(world=new_world, rewards=rewards, detail=detail)


@dataclass
class EpisodeRecord:
    """Per-step, per-region history of one episode plus its summaries."""

    seed: int
    n_regions: int
    n_steps: int
    dt_years: int
    savings_levels: np.ndarray  # [t, region]
    mitigation_levels: np.ndarray
    export_levels: np.ndarray
    import_levels: np.ndarray  # [t, importer, exporter]
    tariff_levels: np.ndarray
    gross_output: np.ndarray  # [t, region]
    damage_fraction: np.ndarray  # [t]
    abatement_fraction: np.ndarray
    net_output: np.ndarray
    investment: np.ndarray
    emissions: np.ndarray
    emissions_global: np.ndarray  # [t]
    domestic: np.ndarray
    foreign: np.ndarray
    aggregate: np.ndarray
    domestic_floored: np.ndarray
    exports_scaled: np.ndarray
    imports_scaled: np.ndarray
    revenue: np.ndarray
    rewards: np.ndarray
    balance: np.ndarray  # [t, region], post-settlement
    carbon: np.ndarray  # [t, 3], post-update
    t_atmosphere: np.ndarray  # [t], post-update
    t_ocean: np.ndarray
    commitments: np.ndarray | None  # [t, region] when negotiation is on
    delta_t_end: float
    y_cum: float
    total_reward: np.ndarray  # [region]
    d_end: float
    initial_carbon_total: float
    cumulative_emissions: float
    final_carbon_total: float


@dataclass(frozen=True)
class EpisodeSummary:
    """Episode endpoints only; what parameter sweeps keep per rollout."""

    seed: int
    delta_t_end: float
    y_cum: float
    total_reward: np.ndarray
    mean_total_reward: float
    d_end: float
    initial_carbon_total: float
    cumulative_emissions: float
    final_carbon_total: float
    any_domestic_floored: bool


def _episode_actions(world: World, policy, policy_rng: np.random.Generator) -> JointActions:
    masks = world.masks()
    sets = [
        policy.act(world.observation(i), masks[i] if masks else None, policy_rng)
        for i in range(world.n_regions)
    ]
    return JointActions.from_action_sets(sets)


def run_episode(
    params: SimParams,
    variant: VariantConfig,
    policy,
    seed: int | None = None,
) -> EpisodeRecord:
    """Roll one full episode under ``policy`` and record everything."""
    world = reset(params, variant, seed)
    n, steps, dt = params.n_regions, params.n_steps, params.dt_years
    policy_rng = np.random.default_rng(
        np.random.SeedSequence([world.episode_seed, _POLICY_STREAM])
    )
    static = getattr(policy, "is_static", False) and not params.negotiation.enabled
    static_actions = _episode_actions(world, policy, policy_rng) if static else None

    rec = EpisodeRecord(
        seed=world.episode_seed,
        n_regions=n,
        n_steps=steps,
        dt_years=dt,
        savings_levels=np.zeros((steps, n), dtype=np.int64),
        mitigation_levels=np.zeros((steps, n), dtype=np.int64),
        export_levels=np.zeros((steps, n), dtype=np.int64),
        import_levels=np.zeros((steps, n, n), dtype=np.int64),
        tariff_levels=np.zeros((steps, n, n), dtype=np.int64),
        gross_output=np.zeros((steps, n)),
        damage_fraction=np.zeros(steps),
        abatement_fraction=np.zeros((steps, n)),
        net_output=np.zeros((steps, n)),
        investment=np.zeros((steps, n)),
        emissions=np.zeros((steps, n)),
        emissions_global=np.zeros(steps),
        domestic=np.zeros((steps, n)),
        foreign=np.zeros((steps, n)),
        aggregate=np.zeros((steps, n)),
        domestic_floored=np.zeros((steps, n), dtype=bool),
        exports_scaled=np.zeros((steps, n)),
        imports_scaled=np.zeros((steps, n)),
        revenue=np.zeros((steps, n)),
        rewards=np.zeros((steps, n)),
        balance=np.zeros((steps, n)),
        carbon=np.zeros((steps, 3)),
        t_atmosphere=np.zeros(steps),
        t_ocean=np.zeros(steps),
        commitments=np.zeros((steps, n), dtype=np.int64) if params.negotiation.enabled else None,
        delta_t_end=0.0,
        y_cum=0.0,
        total_reward=np.zeros(n),
        d_end=0.0,
        initial_carbon_total=world.initial_carbon_total,
        cumulative_emissions=0.0,
        final_carbon_total=0.0,
    )

    for t in range(steps):
        actions = static_actions if static else _episode_actions(world, policy, policy_rng)
        result = step(world, actions)
        d = result.detail
        rec.savings_levels[t] = actions.savings
        rec.mitigation_levels[t] = actions.mitigation
        rec.export_levels[t] = actions.export
        rec.import_levels[t] = actions.imports
        rec.tariff_levels[t] = actions.tariffs
        rec.gross_output[t] = d.gross_output
        rec.damage_fraction[t] = d.damage_fraction
        rec.abatement_fraction[t] = d.abatement_fraction
        rec.net_output[t] = d.net_output
        rec.investment[t] = d.investment
        rec.emissions[t] = d.emissions
        rec.emissions_global[t] = d.emissions_global
        rec.domestic[t] = d.consumption.domestic
        rec.foreign[t] = d.consumption.foreign
        rec.aggregate[t] = d.consumption.aggregate
        rec.domestic_floored[t] = d.consumption.domestic_floored
        rec.exports_scaled[t] = d.flows.exports_scaled
        rec.imports_scaled[t] = d.flows.imports_scaled
        rec.revenue[t] = d.flows.revenue
        rec.rewards[t] = d.rewards
        rec.balance[t] = d.balance_after
        rec.carbon[t] = d.carbon_after
        rec.t_atmosphere[t] = d.t_atmosphere_after
        rec.t_ocean[t] = d.t_ocean_after
        if rec.commitments is not None and d.commitments is not None:
            rec.commitments[t] = d.commitments
        world = result.world

    rec.delta_t_end = float(world.t_atmosphere)
    rec.y_cum = float(dt * rec.gross_output.sum())
    rec.total_reward = rec.rewards.sum(axis=0)
    rec.d_end = economy_mod.damage_fraction(
        max(rec.delta_t_end, 0.0), variant.damage_kind, params.damage_pi1, params.damage_pi2
    )
    rec.cumulative_emissions = world.cumulative_emissions
    rec.final_carbon_total = float(world.carbon.sum())
    return rec


def _summarize_rollout(
    world: World,
    params: SimParams,
    variant: VariantConfig,
    next_actions,
) -> EpisodeSummary:
    steps, dt = params.n_steps, params.dt_years
    y_cum = 0.0
    total_reward = np.zeros(params.n_regions)
    any_floored = False
    for t in range(steps):
        result = step(world, next_actions(world))
        d = result.detail
        y_cum += float(d.gross_output.sum())
        total_reward += d.rewards
        any_floored = any_floored or bool(d.consumption.domestic_floored.any())
        world = result.world

    d_end = economy_mod.damage_fraction(
        max(world.t_atmosphere, 0.0), variant.damage_kind, params.damage_pi1, params.damage_pi2
    )
    return EpisodeSummary(
        seed=world.episode_seed,
        delta_t_end=float(world.t_atmosphere),
        y_cum=float(dt * y_cum),
        total_reward=total_reward,
        mean_total_reward=float(total_reward.mean()),
        d_end=float(d_end),
        initial_carbon_total=world.initial_carbon_total,
        cumulative_emissions=world.cumulative_emissions,
        final_carbon_total=float(world.carbon.sum()),
        any_domestic_floored=any_floored,
    )


def run_episode_summary(
    params: SimParams,
    variant: VariantConfig,
    policy,
    seed: int | None = None,
) -> EpisodeSummary:
    """Roll one episode keeping only endpoints (used by large sweeps)."""
    world = reset(params, variant, seed)
    policy_rng = np.random.default_rng(
        np.random.SeedSequence([world.episode_seed, _POLICY_STREAM])
    )
    static = getattr(policy, "is_static", False) and not params.negotiation.enabled
    if static:
        static_actions = _episode_actions(world, policy, policy_rng)
        return _summarize_rollout(world, params, variant, lambda w: static_actions)
    return _summarize_rollout(
        world, params, variant, lambda w: _episode_actions(w, policy, policy_rng)
    )


def run_fixed_actions_summary(
    params: SimParams,
    variant: VariantConfig,
    actions: JointActions,
    seed: int | None = None,
) -> EpisodeSummary:
    """Roll one episode applying the same joint actions every step."""
    world = reset(params, variant, seed)
    return _summarize_rollout(world, params, variant, lambda w: actions)
