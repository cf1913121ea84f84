"""Exact allocation subproblem for a fixed hub set.

Capacity rows only see a route through its first hub k, and the objective
is linear in x, so for every (i, j, k) all flow can sit on the cheapest
open second hub m without changing feasibility. The LP is therefore
solved over z_ijk = sum_m x_ijkm with reduced costs min_m C_ijkm, which is
exact; ``full_allocation_lp`` builds the uncompressed x_ijkm model so tests
can confirm that claim independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import AllocationPlan, HubSet, Instance, Status, expected_demand
from .costs import ReducedCost, reduce, route_cost_tensor
from .simplex import LpProblem, solve_lp

Z_DROP = 1e-12
CAPACITY_RTOL = 1e-6


@dataclass(frozen=True)
class AllocationResult:
    plan: AllocationPlan
    flow_cost: float
    loads: np.ndarray  # (S, n): first-hub load per capacity scenario
    status: Status
    iterations: int = 0
    lp_solved: bool = False

    @property
    def is_optimal(self):
        return self.status == "optimal"


def _pairs(demands: np.ndarray, weights: np.ndarray) -> np.ndarray:
    mask = (demands > 0).any(axis=0) | (weights > 0)
    return np.argwhere(mask)


def _infeasible(n_scen: int, n: int) -> AllocationResult:
    return AllocationResult(AllocationPlan.empty(), float("nan"), np.full((n_scen, n), np.nan), "infeasible")


def _solve(instance: Instance, hub_set: HubSet, weights: np.ndarray, demands: np.ndarray,
           reduced: Optional[ReducedCost] = None, backend: str | None = None) -> AllocationResult:
    n = instance.n
    S = demands.shape[0]
    if len(hub_set) == 0:
        raise ValueError("hub set is empty")
    H = np.asarray(hub_set.indices)
    h = H.size
    cap = instance.capacities[H]
    if cap.sum() < demands.sum(axis=(1, 2)).max() * (1 - 1e-12):
        return _infeasible(S, n)
    red = reduced if reduced is not None else reduce(instance, hub_set)
    pairs = _pairs(demands, weights)
    P = pairs.shape[0]
    if P == 0:
        return AllocationResult(AllocationPlan.empty(), 0.0, np.zeros((S, n)), "optimal")
    pi, pj = pairs[:, 0], pairs[:, 1]
    R = red.cost[pi, pj, :]  # (P, h)
    w = weights[pi, pj]
    dem = demands[:, pi, pj]  # (S, P)

    # cheapest-first-hub routing is optimal whenever it respects capacity
    choice = np.argmin(R, axis=1)
    Z = np.zeros((P, h))
    Z[np.arange(P), choice] = 1.0
    loads_h = dem @ Z
    lp_solved = False
    iterations = 0
    if np.any(loads_h > cap[None, :]):
        c = (w[:, None] * R).ravel()
        A_assign = np.kron(np.eye(P), np.ones(h))
        A_cap = np.vstack([np.kron(dem[s][None, :], np.eye(h)) for s in range(S)])
        prob = LpProblem(
            c,
            np.vstack([A_assign, A_cap]),
            np.concatenate([np.ones(P), np.tile(cap, S)]),
            ["="] * P + ["<="] * (S * h),
        )
        res = solve_lp(prob, backend=backend)
        iterations = res.iterations
        if res.status != "optimal":
            return _infeasible(S, n)
        Z = res.x.reshape(P, h)
        Z[Z < Z_DROP] = 0.0
        loads_h = dem @ Z
        lp_solved = True
    flow = float(np.sum(w[:, None] * R * Z))
    z = {}
    second = {}
    for p, q in zip(*np.nonzero(Z)):
        i, j, k = int(pi[p]), int(pj[p]), int(H[q])
        z[(i, j, k)] = float(Z[p, q])
        second[(i, j, k)] = int(red.second[j, q])
    loads = np.zeros((S, n))
    loads[:, H] = loads_h
    return AllocationResult(AllocationPlan(z, second), flow, loads, "optimal", iterations, lp_solved)


def solve_allocation(instance: Instance, hub_set: HubSet, demand: np.ndarray, *,
                     reduced: Optional[ReducedCost] = None, backend: str | None = None) -> AllocationResult:
    """Minimum flow cost for one demand matrix with capacities on first hubs."""
    demand = np.asarray(demand, dtype=float)
    return _solve(instance, hub_set, demand, demand[None], reduced, backend)


def solve_allocation_multi(instance: Instance, hub_set: HubSet, *,
                           reduced: Optional[ReducedCost] = None, backend: str | None = None) -> AllocationResult:
    """Minimum expected flow cost; one routing must fit every demand scenario."""
    return _solve(instance, hub_set, expected_demand(instance), instance.demands, reduced, backend)


def uncapacitated_flow(instance: Instance, hub_set: HubSet, weights: np.ndarray,
                       reduced: Optional[ReducedCost] = None) -> float:
    """Flow cost with capacities dropped; a lower bound on the LP value."""
    red = reduced if reduced is not None else reduce(instance, hub_set)
    return float(np.sum(weights * red.cost.min(axis=2)))


def expand_plan(plan: AllocationPlan) -> list[tuple[int, int, int, int, float]]:
    """Sparse x_ijkm: each (i, j, k) mass sits on its recorded second hub."""
    return sorted((i, j, k, plan.second_hub[(i, j, k)], f) for (i, j, k), f in plan.z.items() if f > 0)


def reprice(instance: Instance, plan: AllocationPlan, weights: np.ndarray) -> float:
    d = instance.distances
    total = 0.0
    for i, j, k, m, f in expand_plan(plan):
        total += weights[i, j] * f * (instance.beta * d[i, k] + instance.alpha * d[k, m] + instance.delta * d[m, j])
    return total


def full_allocation_lp(instance: Instance, hub_set: HubSet, demands: Optional[Sequence[np.ndarray]] = None,
                       weights: Optional[np.ndarray] = None):
    """The uncompressed x_ijkm LP with y fixed.

    Variables are x[p, k, m] for every positive-demand pair p and all k, m.
    Rows: sum_m x <= y_k, sum_k x <= y_m, per-scenario first-hub capacity
    sum W^s sum_m x <= Gamma_k y_k, and sum_km x = 1. The bound x <= 1 is
    implied by the last row and is not added. Returns (problem, pairs).
    """
    n = instance.n
    W = instance.demands if demands is None else np.asarray(demands, dtype=float)
    if W.ndim == 2:
        W = W[None]
    if weights is None:
        weights = expected_demand(instance) if demands is None else W.mean(axis=0)
    y = hub_set.open.astype(float)
    pairs = _pairs(W, weights)
    P = pairs.shape[0]
    nv = P * n * n
    if P == 0:
        return LpProblem(np.zeros(0), np.zeros((0, 0)), np.zeros(0), []), pairs
    C = route_cost_tensor(instance)
    c = np.concatenate([weights[i, j] * C[i, j].ravel() for i, j in pairs]) if P else np.zeros(0)

    def var(p, k, m):
        return (p * n + k) * n + m

    rows, rhs, senses = [], [], []
    for p in range(P):
        for k in range(n):
            r = np.zeros(nv)
            r[[var(p, k, m) for m in range(n)]] = 1.0
            rows.append(r), rhs.append(y[k]), senses.append("<=")
        for m in range(n):
            r = np.zeros(nv)
            r[[var(p, k, m) for k in range(n)]] = 1.0
            rows.append(r), rhs.append(y[m]), senses.append("<=")
    for s in range(W.shape[0]):
        for k in range(n):
            r = np.zeros(nv)
            for p, (i, j) in enumerate(pairs):
                r[[var(p, k, m) for m in range(n)]] = W[s, i, j]
            rows.append(r), rhs.append(instance.capacities[k] * y[k]), senses.append("<=")
    for p in range(P):
        r = np.zeros(nv)
        r[p * n * n:(p + 1) * n * n] = 1.0
        rows.append(r), rhs.append(1.0), senses.append("=")
    return LpProblem(c, np.array(rows).reshape(-1, nv), np.array(rhs), senses), pairs
