"""Domain types for the capacitated multiple-allocation hub location problem.

Node indices are 0-based everywhere in the library. Human-facing output
(CLI, solution files) uses 1-based labels so that hub sets read the same
way as the published tables.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Literal, Mapping, Optional, Sequence

import numpy as np

PROBABILITY_TOL = 1e-9

Status = Literal["optimal", "infeasible"]


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """Problem data.

    ``setup_costs`` has one row per setup-cost scenario and is expressed in
    the same money unit as flow costs (distance x flow). ``setup_cost_unit``
    records the factor that was applied when the file figures were loaded,
    e.g. 1e6 for data quoted in millions. ``report_unit`` is the divisor
    used when printing objectives (1000 reproduces tables quoted in
    thousands).
    """

    names: tuple[str, ...]
    distances: np.ndarray
    capacities: np.ndarray
    demands: np.ndarray  # (S, n, n)
    probabilities: np.ndarray  # (S,)
    setup_costs: np.ndarray  # (T, n)
    alpha: float = 1.0
    beta: float = 1.0
    delta: float = 1.0
    origin: Optional[int] = None
    setup_cost_unit: float = 1.0
    report_unit: float = 1.0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(str(s) for s in self.names))
        object.__setattr__(self, "distances", _frozen(self.distances))
        object.__setattr__(self, "capacities", _frozen(self.capacities))
        demands = np.asarray(self.demands, dtype=float)
        if demands.ndim == 2:
            demands = demands[None]
        object.__setattr__(self, "demands", _frozen(demands))
        object.__setattr__(self, "probabilities", _frozen(np.atleast_1d(self.probabilities)))
        setup = np.asarray(self.setup_costs, dtype=float)
        if setup.ndim == 1:
            setup = setup[None]
        object.__setattr__(self, "setup_costs", _frozen(setup))
        for attr in ("alpha", "beta", "delta", "setup_cost_unit", "report_unit"):
            object.__setattr__(self, attr, float(getattr(self, attr)))

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def n_demand_scenarios(self) -> int:
        return self.demands.shape[0]

    @property
    def n_setup_scenarios(self) -> int:
        return self.setup_costs.shape[0]

    def mean_setup(self) -> np.ndarray:
        return self.setup_costs.mean(axis=0)

    def replace(self, **changes) -> "Instance":
        return dataclasses.replace(self, **changes)

    def with_coefficients(self, alpha=None, beta=None, delta=None) -> "Instance":
        return self.replace(
            alpha=self.alpha if alpha is None else alpha,
            beta=self.beta if beta is None else beta,
            delta=self.delta if delta is None else delta,
        )

    def label(self, k: int) -> str:
        return f"{k + 1}:{self.names[k]}"


@dataclass(frozen=True)
class Violation:
    field: str
    index: tuple
    rule: str

    def __str__(self):
        where = f"{self.field}{list(self.index)}" if self.index else self.field
        return f"{where}: {self.rule}"


def validate_instance(instance: Instance) -> list[Violation]:
    """Check every structural invariant; returns the violations found."""
    out: list[Violation] = []
    n = instance.n
    d = instance.distances
    if d.shape != (n, n):
        out.append(Violation("distances", (), f"shape {d.shape} != ({n}, {n})"))
    else:
        if not np.all(np.isfinite(d)):
            out.append(Violation("distances", (), "non-finite entry"))
        for i, j in zip(*np.nonzero(d < 0)):
            out.append(Violation("distances", (int(i), int(j)), f"negative distance {d[i, j]}"))
        for i in range(n):
            if d[i, i] != 0:
                out.append(Violation("distances", (i, i), "nonzero diagonal"))
            for j in range(i + 1, n):
                if d[i, j] != d[j, i]:
                    out.append(Violation("distances", (i + 1, j + 1), f"asymmetric distance at ({i + 1},{j + 1})"))

    cap = instance.capacities
    if cap.shape != (n,):
        out.append(Violation("capacities", (), f"length {cap.shape} != {n}"))
    else:
        for k in np.nonzero(~(cap > 0))[0]:
            out.append(Violation("capacities", (int(k),), "capacity must be > 0"))

    p = instance.probabilities
    W = instance.demands
    if W.ndim != 3 or W.shape[1:] != (n, n):
        out.append(Violation("demand_scenarios", (), f"matrix shape {W.shape[1:]} != ({n}, {n})"))
    elif W.shape[0] != p.shape[0]:
        out.append(Violation("demand_scenarios", (), "probability count differs from scenario count"))
    else:
        for s in range(W.shape[0]):
            for i, j in zip(*np.nonzero(~(W[s] >= 0))):
                out.append(Violation("demand_scenarios", (s, int(i), int(j)), "negative or NaN demand"))
            for i in range(n):
                if W[s, i, i] != 0 and i != instance.origin:
                    out.append(Violation("demand_scenarios", (s, i, i), "nonzero diagonal demand"))
            if instance.origin is not None:
                others = np.delete(W[s], instance.origin, axis=0)
                if np.any(others != 0):
                    out.append(Violation("demand_scenarios", (s,), "demand outside the origin row"))
    for s in np.nonzero(~(p >= 0))[0]:
        out.append(Violation("probabilities", (int(s),), "negative probability"))
    if p.size == 0:
        out.append(Violation("probabilities", (), "no demand scenarios"))
    elif abs(p.sum() - 1.0) > PROBABILITY_TOL:
        out.append(Violation("probabilities", (), f"probabilities sum {p.sum():.12g} ≠ 1"))

    F = instance.setup_costs
    if F.ndim != 2 or F.shape[1] != n:
        out.append(Violation("setup_scenarios", (), f"cost vector length {F.shape[-1]} != {n}"))
    elif F.shape[0] == 0:
        out.append(Violation("setup_scenarios", (), "no setup scenarios"))
    else:
        for t, k in zip(*np.nonzero(~(F >= 0))):
            out.append(Violation("setup_scenarios", (int(t), int(k)), "negative or NaN setup cost"))

    if instance.origin is not None and not 0 <= instance.origin < n:
        out.append(Violation("origin", (instance.origin,), "origin index out of range"))
    for name in ("alpha", "beta", "delta"):
        v = getattr(instance, name)
        if not (np.isfinite(v) and v >= 0):
            out.append(Violation("coefficients", (name,), "coefficient must be finite and >= 0"))
    return out


def expected_demand(instance: Instance) -> np.ndarray:
    """Probability-weighted mean demand matrix."""
    return np.tensordot(instance.probabilities, instance.demands, axes=1)


@dataclass(frozen=True, order=True)
class HubSet:
    """Binary hub vector. Ordering compares the sorted open indices."""

    indices: tuple[int, ...]
    n: int = field(compare=False)

    @classmethod
    def of(cls, n: int, indices) -> "HubSet":
        idx = tuple(sorted({int(k) for k in indices}))
        if any(k < 0 or k >= n for k in idx):
            raise IndexError(f"hub index out of range for n={n}: {idx}")
        return cls(idx, n)

    @classmethod
    def from_mask(cls, mask: Sequence[bool]) -> "HubSet":
        return cls(tuple(int(k) for k in np.flatnonzero(mask)), len(mask))

    @property
    def open(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[list(self.indices)] = True
        return mask

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(k + 1 for k in self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, k):
        return k in self.indices

    def __str__(self):
        return ",".join(map(str, self.labels))


@dataclass(frozen=True)
class AllocationPlan:
    """Compressed routing: fraction of pair (i, j) whose first hub is k.

    The second hub of every (i, j, k) is the cheapest open hub, stored in
    ``second_hub``; the full x_ijkm vector is recovered by ``expand_plan``.
    """

    z: Mapping[tuple[int, int, int], float]
    second_hub: Mapping[tuple[int, int, int], int]

    @classmethod
    def empty(cls) -> "AllocationPlan":
        return cls({}, {})


@dataclass(frozen=True)
class Solution:
    hub_set: Optional[HubSet]
    allocation: AllocationPlan
    flow_cost: float
    setup_cost: float
    objective: float
    status: Status = "optimal"
    mode: str = "deterministic"
    setup_scenario: Optional[int] = None
    alpha: Optional[float] = None
    per_scenario_regret: Optional[dict[int, float]] = None
    max_regret: Optional[float] = None

    @classmethod
    def infeasible(cls, mode: str = "deterministic", **kw) -> "Solution":
        nan = float("nan")
        return cls(None, AllocationPlan.empty(), nan, nan, nan, "infeasible", mode, **kw)

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"
