"""Seasonal re-optimization versus one fixed network.

The seasonal policy re-solves the deterministic model on each season's
demand and pays phi times an establishment cost at every boundary where
the hub set changes. The fixed policy keeps the minimax-regret network.
Both totals are affine in phi, so the break-even ratio is found exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from .core import Instance, Solution
from .search import InfeasibleModelError, RegretReport, SearchConfig, solve_deterministic, solve_minimax_regret

SEASON_DAYS = 90.0
Establishment = Literal["installed", "grand_total"]


@dataclass(frozen=True)
class SeasonalPlan:
    """Per-season optima plus the horizon bookkeeping that turns them into a cost line."""

    solutions: tuple[Solution, ...]
    mean_setup: np.ndarray
    season_days: float = SEASON_DAYS

    def _sequence(self, horizon_days: float):
        """(season index, fraction of the season inside the horizon) in calendar order."""
        span = horizon_days / self.season_days
        full = math.floor(span + 1e-12)
        seq = [(q % len(self.solutions), 1.0) for q in range(full)]
        rest = span - full
        if rest > 1e-12:
            seq.append((full % len(self.solutions), rest))
        return seq

    def _setup(self, sol: Solution) -> float:
        return float(self.mean_setup[list(sol.hub_set.indices)].sum())

    def line(self, horizon_days: float, establishment: Establishment = "installed"):
        """Return (intercept, slope, events) so that cost(phi) = intercept + slope * phi."""
        if not horizon_days > 0:
            raise ValueError("horizon_days must be positive")
        seq = self._sequence(horizon_days)
        flow = sum(self.solutions[s].flow_cost * frac for s, frac in seq)
        configs = {self.solutions[s].hub_set for s, _ in seq}
        setup = sum(float(self.mean_setup[list(h.indices)].sum()) for h in configs)
        events = []
        for (a, _), (b, _) in zip(seq, seq[1:]):
            if self.solutions[a].hub_set != self.solutions[b].hub_set:
                events.append(b)
        if establishment == "installed":
            slope = sum(self._setup(self.solutions[b]) for b in events)
        elif establishment == "grand_total":
            slope = len(events) * setup
        else:
            raise ValueError(f"unknown establishment accounting {establishment!r}")
        return flow + setup, slope, len(events)


def seasonal_plan(instance: Instance, config: SearchConfig = SearchConfig(),
                  season_days: float = SEASON_DAYS) -> SeasonalPlan:
    mean_setup = instance.mean_setup()
    sols = []
    for s in range(instance.n_demand_scenarios):
        sol = solve_deterministic(instance, instance.demands[s], mean_setup, config)
        if not sol.is_optimal:
            raise InfeasibleModelError(f"season {s + 1} is infeasible")
        sols.append(sol)
    return SeasonalPlan(tuple(sols), mean_setup, season_days)


def seasonal_policy_cost(instance: Instance, horizon_days: float, phi: float, *,
                         establishment: Establishment = "installed", season_days: float = SEASON_DAYS,
                         config: SearchConfig = SearchConfig(), plan: Optional[SeasonalPlan] = None) -> float:
    if phi < 0:
        raise ValueError("phi must be nonnegative")
    plan = plan or seasonal_plan(instance, config, season_days)
    a, b, _ = plan.line(horizon_days, establishment)
    return a + b * phi


def fixed_policy_cost(instance: Instance, horizon_days: float, report: RegretReport,
                      season_days: float = SEASON_DAYS) -> float:
    """Minimax network at mean setup cost plus its expected flow over the horizon."""
    sol = report.solution
    setup = float(instance.mean_setup()[list(sol.hub_set.indices)].sum())
    return setup + sol.flow_cost * horizon_days / season_days


@dataclass
class BreakEvenReport:
    horizon_days: float
    seasonal: SeasonalPlan
    fixed: RegretReport
    phi: np.ndarray
    seasonal_total: np.ndarray
    fixed_total: np.ndarray
    intercept: float
    slope: float
    fixed_cost: float
    events: int
    phi_star: Optional[float]
    note: str
    establishment: str = "installed"

    @property
    def has_crossing(self) -> bool:
        return self.phi_star is not None


def break_even(instance: Instance, horizon_days: float, phi_grid: Sequence[float], *,
               establishment: Establishment = "installed", season_days: float = SEASON_DAYS,
               config: SearchConfig = SearchConfig(), fixed: Optional[RegretReport] = None,
               plan: Optional[SeasonalPlan] = None) -> BreakEvenReport:
    grid = np.asarray(list(phi_grid), dtype=float)
    if grid.size == 0:
        raise ValueError("phi grid is empty")
    if np.any(np.diff(grid) < 0):
        raise ValueError("phi grid must be sorted ascending")
    if np.any(grid < 0):
        raise ValueError("phi must be nonnegative")
    plan = plan or seasonal_plan(instance, config, season_days)
    fixed = fixed or solve_minimax_regret(instance, config)
    a, b, events = plan.line(horizon_days, establishment)
    f = fixed_policy_cost(instance, horizon_days, fixed, season_days)
    if b == 0:
        phi_star, note = None, "no crossing (curves parallel)"
    else:
        x = (f - a) / b
        if x >= 0:
            phi_star, note = x, f"break-even at phi = {x:.6g}"
        else:
            phi_star, note = None, f"no crossing for phi >= 0 (lines meet at phi = {x:.6g})"
    return BreakEvenReport(horizon_days, plan, fixed, grid, a + b * grid, np.full(grid.shape, f), a, b, f, events,
                           phi_star, note, establishment)
