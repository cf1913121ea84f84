"""Per-unit route costs and the first-hub reduction used by the allocation LPs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import HubSet, Instance

CACHE_MAX_NODES = 20


def unit_cost(instance: Instance, i: int, j: int, k: int, m: int) -> float:
    """Cost per flow unit of routing i -> k -> m -> j."""
    n = instance.n
    for v in (i, j, k, m):
        if not 0 <= v < n:
            raise IndexError(f"node index {v} out of range for n={n}")
    d = instance.distances
    return instance.beta * d[i, k] + instance.alpha * d[k, m] + instance.delta * d[m, j]


class CostOracle:
    """Lazy C_ijkm evaluator.

    The full n**4 tensor is only built on request and only for n up to
    ``cache_limit``; single lookups never allocate it.
    """

    def __init__(self, instance: Instance, cache_limit: int = CACHE_MAX_NODES):
        self.instance = instance
        self.cache_limit = cache_limit
        self._tensor: Optional[np.ndarray] = None

    def __call__(self, i, j, k, m) -> float:
        if self._tensor is not None:
            return float(self._tensor[i, j, k, m])
        return unit_cost(self.instance, i, j, k, m)

    def tensor(self) -> np.ndarray:
        if self._tensor is None:
            if self.instance.n > self.cache_limit:
                raise ValueError(f"refusing to materialize C for n={self.instance.n} > {self.cache_limit}")
            self._tensor = route_cost_tensor(self.instance)
            self._tensor.setflags(write=False)
        return self._tensor


def route_cost_tensor(instance: Instance) -> np.ndarray:
    d = instance.distances
    b, a, g = instance.beta, instance.alpha, instance.delta
    return b * d[:, None, :, None] + a * d[None, None, :, :] + g * d.T[None, :, None, :]


@dataclass(frozen=True)
class ReducedCost:
    """min over open second hubs of C_ijkm, for every (i, j) and open k.

    ``cost[i, j, p]`` refers to the p-th open hub ``hubs[p]``; the argmin
    second hub only depends on (k, j) and is stored as ``second[j, p]``.
    """

    hubs: tuple[int, ...]
    cost: np.ndarray  # (n, n, h)
    second: np.ndarray  # (n, h), node indices

    def at(self, i: int, j: int, k: int) -> float:
        return float(self.cost[i, j, self.hubs.index(k)])

    def second_hub(self, i: int, j: int, k: int) -> int:
        return int(self.second[j, self.hubs.index(k)])


def reduce(instance: Instance, hub_set: HubSet) -> ReducedCost:
    """Collapse the second-hub index by taking the cheapest open m.

    Ties go to the lowest node index (np.argmin over ascending hubs).
    """
    hubs = tuple(hub_set.indices)
    if not hubs:
        raise ValueError("hub set is empty")
    d = instance.distances
    H = np.asarray(hubs)
    # tail[k, m, j] = alpha d_km + delta d_mj over open k, m
    tail = instance.alpha * d[np.ix_(H, H)][:, :, None] + instance.delta * d[H, :][None, :, :]
    pos = np.argmin(tail, axis=1)  # (h, n)
    best_tail = np.take_along_axis(tail, pos[:, None, :], axis=1)[:, 0, :]  # (h, n) over (k, j)
    cost = instance.beta * d[:, H][:, None, :] + best_tail.T[None, :, :]
    second = H[pos].T  # (n, h)
    cost.setflags(write=False)
    second.setflags(write=False)
    return ReducedCost(hubs, cost, second)
