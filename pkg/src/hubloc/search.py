"""Hub-set optimization by pruned exhaustive enumeration.

All three models share one structure: for a hub set y the cost is an
allocation LP value plus a setup term. Flow costs do not depend on the
setup scenario, so the stochastic and minimax-regret searches reuse one
cached allocation per hub set. Regret separates the same way:

    regret(y) = flow(y) + max_s' (setup_s'(y) - Z*_s')

because the flow term of every per-scenario regret is identical.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from .allocation import (AllocationResult, full_allocation_lp, solve_allocation, solve_allocation_multi,
                         uncapacitated_flow)
from .core import HubSet, Instance, Solution, expected_demand
from .costs import reduce
from .simplex import LpProblem, solve_lp

TIE_RTOL = 1e-9
REGRET_TOL = 1e-6
BATCH = 64


class SearchError(RuntimeError):
    pass


class InfeasibleModelError(SearchError):
    pass


class SearchTimeout(SearchError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    max_nodes_exhaustive: int = 20
    enable_pruning: bool = True
    time_limit: Optional[float] = None
    threads: int = 1
    backend: Optional[str] = None

    def __post_init__(self):
        if self.max_nodes_exhaustive < 1:
            raise ValueError("max_nodes_exhaustive must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class RegretReport:
    z_star: list[float]
    scenario_solutions: list[Solution]
    setup_costs: list[float]  # chosen design's setup cost under each scenario
    regrets: list[float]
    max_regret: float
    solution: Solution
    evaluated: int = 0

    @property
    def hub_set(self) -> HubSet:
        return self.solution.hub_set


def _lex_order(n: int) -> Iterator[tuple[int, ...]]:
    def rec(prefix, start):
        for k in range(start, n):
            cur = prefix + (k,)
            yield cur
            yield from rec(cur, k + 1)

    return rec((), 0)


def enumerate_hub_sets(instance: Instance, config: SearchConfig = SearchConfig(),
                       required_capacity: Optional[float] = None) -> Iterator[HubSet]:
    """Nonempty hub sets in lexicographic order of their index tuples.

    With pruning on, sets whose total capacity is below the largest
    scenario demand total (or ``required_capacity``) are skipped.
    """
    n = instance.n
    if n > config.max_nodes_exhaustive:
        raise SearchError(f"n={n} exceeds max_nodes_exhaustive={config.max_nodes_exhaustive}")
    if required_capacity is None:
        required_capacity = float(instance.demands.sum(axis=(1, 2)).max())
    cap = instance.capacities
    need = required_capacity * (1 - 1e-12)
    for idx in _lex_order(n):
        if config.enable_pruning and cap[list(idx)].sum() < need:
            continue
        yield HubSet(idx, n)


def _better(obj_a, key_a, obj_b, key_b) -> bool:
    """Strict improvement, objectives within TIE_RTOL count as ties won by the smaller key."""
    tol = TIE_RTOL * max(1.0, abs(obj_a), abs(obj_b))
    if obj_a < obj_b - tol:
        return True
    if obj_a <= obj_b + tol:
        return key_a < key_b
    return False


class FlowEvaluator:
    """Memoized allocation values for one instance and one demand model."""

    def __init__(self, instance: Instance, demand: Optional[np.ndarray] = None, backend=None):
        self.instance = instance
        self.demand = None if demand is None else np.asarray(demand, dtype=float)
        self.weights = expected_demand(instance) if demand is None else self.demand
        self.backend = backend
        self._cache: dict[tuple, AllocationResult] = {}
        self._lb: dict[tuple, float] = {}
        self._reduced: dict[tuple, object] = {}

    @property
    def required_capacity(self) -> float:
        if self.demand is None:
            return float(self.instance.demands.sum(axis=(1, 2)).max())
        return float(self.demand.sum())

    def _red(self, hubs: HubSet):
        red = self._reduced.get(hubs.indices)
        if red is None:
            red = self._reduced[hubs.indices] = reduce(self.instance, hubs)
        return red

    def lower_bound(self, hubs: HubSet) -> float:
        lb = self._lb.get(hubs.indices)
        if lb is None:
            lb = self._lb[hubs.indices] = uncapacitated_flow(self.instance, hubs, self.weights, self._red(hubs))
        return lb

    def __call__(self, hubs: HubSet) -> AllocationResult:
        res = self._cache.get(hubs.indices)
        if res is None:
            red = self._red(hubs)
            if self.demand is None:
                res = solve_allocation_multi(self.instance, hubs, reduced=red, backend=self.backend)
            else:
                res = solve_allocation(self.instance, hubs, self.demand, reduced=red, backend=self.backend)
            self._cache[hubs.indices] = res
        return res


def _minimize(candidates: Iterator[HubSet], flows: FlowEvaluator, score: Callable[[HubSet, float], float],
              config: SearchConfig):
    """Return (hubs, allocation, score) minimizing score(y, flow(y)); score must be nondecreasing in flow."""
    best = None  # (score, key, hubs, alloc)
    start = time.perf_counter()
    pool = ThreadPoolExecutor(config.threads) if config.threads > 1 else None
    evaluated = 0

    def merge(h, res):
        nonlocal best
        if not res.is_optimal:
            return
        val = score(h, res.flow_cost)
        if best is None or _better(val, h.labels, best[0], best[1]):
            best = (val, h.labels, h, res)

    try:
        batch: list[HubSet] = []

        def flush():
            nonlocal evaluated
            todo = batch
            if config.enable_pruning and best is not None:
                tol = TIE_RTOL * max(1.0, abs(best[0]))
                todo = [h for h in batch if score(h, flows.lower_bound(h)) <= best[0] + tol]
            results = list(pool.map(flows, todo)) if pool is not None else [flows(h) for h in todo]
            evaluated += len(todo)
            for h, res in zip(todo, results):
                merge(h, res)
            batch.clear()
            if config.time_limit is not None and time.perf_counter() - start > config.time_limit:
                raise SearchTimeout(f"time limit {config.time_limit}s exceeded after {evaluated} evaluations")

        for h in candidates:
            batch.append(h)
            if len(batch) >= (BATCH if pool is not None else 1):
                flush()
        if batch:
            flush()
    finally:
        if pool is not None:
            pool.shutdown()
    return best, evaluated


def _solution(best, instance, mode, setup, **kw) -> Solution:
    if best is None:
        return Solution.infeasible(mode, alpha=instance.alpha, **kw)
    val, _, hubs, res = best
    setup_cost = float(setup[list(hubs.indices)].sum())
    return Solution(hubs, res.plan, res.flow_cost, setup_cost, res.flow_cost + setup_cost, "optimal", mode,
                    alpha=instance.alpha, **kw)


def solve_deterministic(instance: Instance, demand: Optional[np.ndarray] = None, setup: Optional[np.ndarray] = None,
                        config: SearchConfig = SearchConfig()) -> Solution:
    """Single-demand model; defaults to mean demand and mean setup costs."""
    demand = expected_demand(instance) if demand is None else np.asarray(demand, dtype=float)
    setup = instance.mean_setup() if setup is None else np.asarray(setup, dtype=float)
    flows = FlowEvaluator(instance, demand, config.backend)
    cands = enumerate_hub_sets(instance, config, flows.required_capacity)
    best, _ = _minimize(cands, flows, lambda h, f: f + setup[list(h.indices)].sum(), config)
    return _solution(best, instance, "deterministic", setup)


def solve_scenario(instance: Instance, setup_scenario: int, config: SearchConfig = SearchConfig(),
                   flows: Optional[FlowEvaluator] = None) -> Solution:
    """Expected flow over all demand scenarios plus setup costs of one setup scenario."""
    if not 0 <= setup_scenario < instance.n_setup_scenarios:
        raise IndexError("setup scenario index out of range")
    setup = instance.setup_costs[setup_scenario]
    flows = flows or FlowEvaluator(instance, None, config.backend)
    cands = enumerate_hub_sets(instance, config, flows.required_capacity)
    best, _ = _minimize(cands, flows, lambda h, f: f + setup[list(h.indices)].sum(), config)
    return _solution(best, instance, "scenario", setup, setup_scenario=setup_scenario)


def _binding_scenario(instance: Instance) -> str:
    totals = instance.demands.sum(axis=(1, 2))
    s = int(np.argmax(totals))
    return (f"demand scenario {s + 1} (total {totals[s]:.6g}) cannot be carried by any hub set "
            f"that satisfies every scenario; total capacity is {instance.capacities.sum():.6g}")


def solve_minimax_regret(instance: Instance, config: SearchConfig = SearchConfig()) -> RegretReport:
    if instance.n_setup_scenarios < 1 or instance.n_demand_scenarios < 1:
        raise ValueError("need at least one setup and one demand scenario")
    flows = FlowEvaluator(instance, None, config.backend)
    scen = [solve_scenario(instance, t, config, flows) for t in range(instance.n_setup_scenarios)]
    bad = [t for t, s in enumerate(scen) if not s.is_optimal]
    if bad:
        raise InfeasibleModelError(f"setup scenario(s) {[t + 1 for t in bad]} infeasible: {_binding_scenario(instance)}")
    z_star = np.array([s.objective for s in scen])
    F = instance.setup_costs

    def regret(h, flow):
        return flow + float(np.max(F[:, list(h.indices)].sum(axis=1) - z_star))

    cands = enumerate_hub_sets(instance, config, flows.required_capacity)
    best, evaluated = _minimize(cands, flows, regret, config)
    if best is None:  # pragma: no cover - scenario solves would have failed first
        raise InfeasibleModelError(_binding_scenario(instance))
    _, _, hubs, res = best
    setups = F[:, list(hubs.indices)].sum(axis=1)
    regrets = res.flow_cost + setups - z_star
    floor = -REGRET_TOL * (1 + np.abs(z_star))
    if np.any(regrets < floor):
        raise SearchError(f"negative regret {regrets.min():.6g}: scenario optima are not optimal")
    max_regret = float(regrets.max())
    sol = Solution(hubs, res.plan, res.flow_cost, float(setups.mean()), max_regret, "optimal", "minimax",
                   alpha=instance.alpha, per_scenario_regret={t: float(r) for t, r in enumerate(regrets)},
                   max_regret=max_regret)
    return RegretReport([float(z) for z in z_star], scen, [float(s) for s in setups], [float(r) for r in regrets],
                        max_regret, sol, evaluated)


def regret_lp(instance: Instance, hub_set: HubSet, z_star, backend=None):
    """Linearized regret model with y fixed, over the full x_ijkm variables.

    min R  s.t.  R >= flow(x) + setup_s'(y) - Z*_s'  for all s', plus the
    allocation rows. R is split as R+ - R- so it stays free in sign.
    Returns the LpResult.
    """
    base, _ = full_allocation_lp(instance, hub_set)
    m, nv = base.A.shape
    F = instance.setup_costs[:, list(hub_set.indices)].sum(axis=1)
    A = np.hstack([base.A, np.zeros((m, 2))])
    rows = [np.concatenate([base.c, [-1.0, 1.0]]) for _ in range(len(z_star))]
    A = np.vstack([A, np.array(rows).reshape(-1, nv + 2)])
    b = np.concatenate([base.b, np.asarray(z_star) - F])
    c = np.zeros(nv + 2)
    c[-2:] = [1.0, -1.0]
    prob = LpProblem(c, A, b, list(base.senses) + ["<="] * len(z_star))
    return solve_lp(prob, backend=backend)
