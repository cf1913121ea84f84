"""Scenario families for setup costs and seasonal demand."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

# five evenly spaced factors between the 0.7 and 1.3 endpoints
DEFAULT_MULTIPLIERS = (0.7, 0.85, 1.0, 1.15, 1.3)
# alternative spacings checked when the default does not reproduce a result
ALTERNATIVE_SPACINGS = {
    "even5": DEFAULT_MULTIPLIERS,
    "endpoints": (0.7, 1.3),
    "three": (0.7, 1.0, 1.3),
    "clustered_low": (0.7, 0.75, 0.8, 1.0, 1.3),
    "clustered_high": (0.7, 1.0, 1.2, 1.25, 1.3),
}


@dataclass(frozen=True)
class MultiplierFamily:
    base: np.ndarray
    multipliers: tuple[float, ...]

    def __post_init__(self):
        mult = tuple(float(m) for m in self.multipliers)
        if not mult:
            raise ValueError("multipliers must be nonempty")
        if any(not m > 0 for m in mult):
            raise ValueError(f"multipliers must be strictly positive: {mult}")
        if list(mult) != sorted(mult):
            raise ValueError("multipliers must be sorted ascending")
        object.__setattr__(self, "multipliers", mult)
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))

    def scenarios(self) -> np.ndarray:
        return build_setup_scenarios(self.base, self.multipliers)


def build_setup_scenarios(base, multipliers) -> np.ndarray:
    """One row per multiplier t: F_t = multiplier_t * base."""
    base = np.asarray(base, dtype=float)
    mult = np.asarray(list(multipliers), dtype=float)
    if mult.size == 0:
        raise ValueError("multipliers must be nonempty")
    if np.any(~(mult > 0)):
        raise ValueError(f"nonpositive multiplier in {mult.tolist()}")
    return mult[:, None] * base[None, :]


def build_seasonal_demands(seasonal, origin: int, probabilities: Optional[Sequence[float]] = None):
    """Turn per-destination seasonal demand columns into origin-row matrices.

    ``seasonal`` is (n, S): row = destination, column = season. Returns
    (demands (S, n, n), probabilities (S,)). The origin's own entry is kept,
    since the origin node still needs its demand routed through a hub.
    """
    seasonal = np.asarray(seasonal, dtype=float)
    if seasonal.ndim == 1:
        seasonal = seasonal[:, None]
    n, S = seasonal.shape
    if not 0 <= origin < n:
        raise ValueError(f"origin {origin} out of range for n={n}")
    if np.any(seasonal < 0):
        raise ValueError("seasonal demands must be nonnegative")
    if probabilities is None:
        probabilities = np.full(S, 1.0 / S)
    probabilities = np.asarray(probabilities, dtype=float)
    if probabilities.shape != (S,):
        raise ValueError(f"{probabilities.size} probabilities for {S} seasons")
    if abs(probabilities.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum {probabilities.sum()} != 1")
    W = np.zeros((S, n, n))
    W[:, origin, :] = seasonal.T
    return W, probabilities
