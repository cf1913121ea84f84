"""Independent reference computations used by the property tests."""

import itertools

import numpy as np

from hubloc.core import HubSet

BOX = 1e7


def random_tiny_lp(rng: np.random.Generator):
    n = int(rng.integers(1, 5))
    m = int(rng.integers(1, 5))
    c = rng.integers(-9, 10, n).astype(float)
    A = rng.integers(-9, 10, (m, n)).astype(float)
    b = rng.integers(-9, 10, m).astype(float)
    senses = [("<=", ">=", "=")[int(k)] for k in rng.choice(3, m, p=[0.5, 0.3, 0.2])]
    return c, A, b, senses


def _vertex_min(c, A, b, senses, box):
    """Minimum of c x over the polytope intersected with 0 <= x <= box, by vertex enumeration."""
    n = c.size
    rows, rhs, eq = [], [], []
    for a, v, s in zip(A, b, senses):
        if s == "<=":
            rows.append(a), rhs.append(v), eq.append(False)
        elif s == ">=":
            rows.append(-a), rhs.append(-v), eq.append(False)
        else:
            rows.append(a), rhs.append(v), eq.append(True)
    for i in range(n):
        e = np.zeros(n)
        e[i] = -1.0
        rows.append(e), rhs.append(0.0), eq.append(False)
        rows.append(-e), rhs.append(box), eq.append(False)
    G, h = np.array(rows), np.array(rhs)
    eq = np.array(eq)
    best = None
    for active in itertools.combinations(range(len(G)), n):
        M = G[list(active)]
        if abs(np.linalg.det(M)) < 1e-9:
            continue
        x = np.linalg.solve(M, h[list(active)])
        slack = h - G @ x
        tol = 1e-7 * (1 + np.abs(h))
        if np.any(slack < -tol) or np.any(np.abs(slack[eq]) > tol[eq]):
            continue
        val = float(c @ x)
        if best is None or val < best[0]:
            best = (val, x)
    return best


def vertex_oracle(c, A, b, senses):
    """('optimal', value) / ('infeasible', None) / ('unbounded', None)."""
    first = _vertex_min(c, A, b, senses, BOX)
    if first is None:
        return "infeasible", None
    second = _vertex_min(c, A, b, senses, 2 * BOX)
    if second[0] < first[0] - 1e-6 * (1 + abs(first[0])):
        return "unbounded", None
    return "optimal", first[0]


def all_hub_sets(n):
    for r in range(1, n + 1):
        for idx in itertools.combinations(range(n), r):
            yield HubSet(idx, n)
