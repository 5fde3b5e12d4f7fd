"""Bilateral trade: demand, export rationing, tariffs, and consumption.

Matrix convention: entry ``[i, j]`` is the flow from exporter j to importer
i, so row sums are a region's imports and column sums its exports.

Import demand allocates each importer's budget (a fraction of its gross
output) across partners in proportion to partner gross output. The budget
bound keeps aggregate demand below world output, and the partner weighting
keeps each region's exports roughly proportional to its own output, so
bilateral flows stay balanced up to heterogeneity in trade actions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .actions import levels_to_rates
from .config import VariantConfig

#: The balance-driven multiplier on the import budget is clamped here to
#: prevent runaway feedback through the trade channel.
BUDGET_MULTIPLIER_BOUNDS = (0.5, 1.5)


@dataclass(frozen=True)
class TradeFlows:
    """Demand, rationed, and tariffed import matrices plus tariff revenue."""

    demanded: np.ndarray  # [importer, exporter]
    scaled: np.ndarray
    tariffed: np.ndarray
    revenue: np.ndarray  # per importer

    @property
    def exports_scaled(self) -> np.ndarray:
        return self.scaled.sum(axis=0)

    @property
    def imports_scaled(self) -> np.ndarray:
        return self.scaled.sum(axis=1)


@dataclass(frozen=True)
class ConsumptionBreakdown:
    """Domestic/foreign consumption split and the aggregate reward basis."""

    domestic: np.ndarray
    foreign: np.ndarray
    aggregate: np.ndarray
    domestic_floored: np.ndarray  # True where domestic consumption hit the 0 floor


def build_demand(
    import_levels: np.ndarray,
    gross_output: np.ndarray,
    budget_fraction: np.ndarray | float,
) -> np.ndarray:
    """Demand matrix from import levels, budgets, and partner sizes.

    ``demand[i, j] = rate(level[i, j]) * budget[i] * Y[i] * Y[j] / sum(Y[k], k != i)``

    With two regions the partner weight is 1 and the entry reduces to
    rate * budget * own output. Rows of a region with zero output (or zero
    partner output) are zero.
    """
    y = np.asarray(gross_output, dtype=np.float64)
    n = y.shape[0]
    rates = levels_to_rates(import_levels)
    budget = np.broadcast_to(np.asarray(budget_fraction, dtype=np.float64), (n,))
    partner_total = y.sum() - y  # sum over k != i, per importer i
    shares = np.where(
        partner_total[:, None] > 0.0, y[None, :] / np.maximum(partner_total[:, None], 1e-300), 0.0
    )
    demand = rates * (budget * y)[:, None] * shares
    demand[np.arange(n), np.arange(n)] = 0.0
    return demand


def ration_exports(demanded: np.ndarray, export_capacity: np.ndarray) -> np.ndarray:
    """Scale each exporter's column so its total never exceeds capacity.

    Rationing is proportional in a single pass; an unconstrained exporter
    ships exactly what is demanded, and 0/0 resolves to no trade.
    """
    demanded = np.asarray(demanded, dtype=np.float64)
    capacity = np.asarray(export_capacity, dtype=np.float64)
    col_totals = demanded.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(col_totals > 0.0, np.minimum(1.0, capacity / col_totals), 0.0)
    return demanded * scale[None, :]


def apply_tariffs(
    scaled: np.ndarray, tariff_levels: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Tariffed imports and per-importer tariff revenue.

    ``tariffed[i, j] = scaled[i, j] * (1 - rate(level[i, j]))``; the wedge
    accrues to the importer as revenue.
    """
    rates = levels_to_rates(tariff_levels)
    tariffed = scaled * (1.0 - rates)
    revenue = (scaled * rates).sum(axis=1)
    return tariffed, revenue


def consumption(
    net_output: np.ndarray,
    investment: np.ndarray,
    scaled: np.ndarray,
    tariffed: np.ndarray,
    foreign_weight: float,
    variant: VariantConfig,
) -> ConsumptionBreakdown:
    """Split consumption into domestic and foreign parts.

    Domestic consumption is net output less investment and scaled exports;
    foreign consumption is the region's own tariffed imports. With the
    overproduction penalty on, the exporter also loses the part of its
    shipped output that the importers tariffed away.
    """
    exports = scaled.sum(axis=0)
    domestic = net_output - investment - exports
    if variant.overproduction_penalty:
        domestic = domestic - (scaled - tariffed).sum(axis=0)
    floored = domestic < 0.0
    domestic = np.maximum(domestic, 0.0)
    foreign = tariffed.sum(axis=1)
    return ConsumptionBreakdown(
        domestic=domestic,
        foreign=foreign,
        aggregate=domestic + foreign_weight * foreign,
        domestic_floored=floored,
    )


def step_balance(
    balance: np.ndarray,
    exports_scaled: np.ndarray,
    imports_scaled: np.ndarray,
    revenue: np.ndarray,
    variant: VariantConfig,
    dt_years: float,
) -> np.ndarray:
    """Advance trade balances; tariff revenue accrues only under the variant.

    The revenue term is added separately so that, given identical flows,
    switching the variant on changes the balance by exactly dt * revenue.
    """
    out = balance + dt_years * (exports_scaled - imports_scaled)
    if variant.use_tariff_revenue:
        out = out + dt_years * revenue
    return out


def import_budget_multiplier(balance: np.ndarray, gross_output: np.ndarray) -> np.ndarray:
    """Balance feedback on the import budget, clamped to [0.5, 1.5]."""
    lo, hi = BUDGET_MULTIPLIER_BOUNDS
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = np.where(
            gross_output > 0.0, 1.0 + balance / (10.0 * np.maximum(gross_output, 1e-300)), 1.0
        )
    return np.clip(raw, lo, hi)
