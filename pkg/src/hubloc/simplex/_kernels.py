"""Tableau pivot loops.

Two interchangeable implementations of the same pivoting rules: a numba
``@njit`` kernel and a vectorized numpy fallback. Both must visit the same
sequence of bases for a given tableau, so tie-breaking is spelled out
identically in each. Set ``HUBLOC_NUMBA=0`` to force the numpy path.

Tableau layout: rows ``0..m-1`` are constraints, row ``m`` holds reduced
costs; the last column is the right-hand side (objective row: minus the
current objective value).
"""

from __future__ import annotations

import os

import numpy as np

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2

RATIO_TIE = 1e-12

try:  # pragma: no cover - exercised implicitly
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def _env_wants_numba() -> bool:
    return os.environ.get("HUBLOC_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


def pivot_numpy(T, r, c):
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def pivot_loop_numpy(T, basis, n_enter, max_iter, bland_after, piv_tol, opt_tol):
    m = T.shape[0] - 1
    it = 0
    while True:
        d = T[m, :n_enter]
        if it >= bland_after:
            neg = np.flatnonzero(d < -opt_tol)
            if neg.size == 0:
                return OPTIMAL, it
            c = int(neg[0])
        else:
            c = int(np.argmin(d))
            if d[c] >= -opt_tol:
                return OPTIMAL, it
        if it >= max_iter:
            return ITERATION_LIMIT, it
        col = T[:m, c]
        rows = np.flatnonzero(col > piv_tol)
        if rows.size == 0:
            return UNBOUNDED, it
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + RATIO_TIE * (1.0 + abs(best))]
        r = int(tied[np.argmin(basis[tied])])
        pivot_numpy(T, r, c)
        basis[r] = c
        it += 1


def _pivot_loop_py(T, basis, n_enter, max_iter, bland_after, piv_tol, opt_tol):
    m = T.shape[0] - 1
    ncol = T.shape[1]
    it = 0
    while True:
        c = -1
        if it >= bland_after:
            for j in range(n_enter):
                if T[m, j] < -opt_tol:
                    c = j
                    break
        else:
            best_d = -opt_tol
            for j in range(n_enter):
                if T[m, j] < best_d:
                    best_d = T[m, j]
                    c = j
            # argmin semantics: first index among exact minima
        if c < 0:
            return OPTIMAL, it
        if it >= max_iter:
            return ITERATION_LIMIT, it
        best = np.inf
        for i in range(m):
            if T[i, c] > piv_tol:
                ratio = T[i, ncol - 1] / T[i, c]
                if ratio < best:
                    best = ratio
        if best == np.inf:
            return UNBOUNDED, it
        r = -1
        lim = best + RATIO_TIE * (1.0 + abs(best))
        for i in range(m):
            if T[i, c] > piv_tol:
                ratio = T[i, ncol - 1] / T[i, c]
                if ratio <= lim and (r < 0 or basis[i] < basis[r]):
                    r = i
        piv = T[r, c]
        for j in range(ncol):
            T[r, j] /= piv
        for i in range(m + 1):
            if i != r:
                f = T[i, c]
                if f != 0.0:
                    for j in range(ncol):
                        T[i, j] -= f * T[r, j]
        basis[r] = c
        it += 1


if HAVE_NUMBA:
    pivot_loop_numba = numba.njit(cache=True, nogil=True)(_pivot_loop_py)
else:  # pragma: no cover
    pivot_loop_numba = None

BACKENDS = {"numpy": pivot_loop_numpy}
if HAVE_NUMBA:
    BACKENDS["numba"] = pivot_loop_numba

DEFAULT_BACKEND = "numba" if (HAVE_NUMBA and _env_wants_numba()) else "numpy"


def get_pivot_loop(backend: str | None = None):
    name = backend or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown simplex backend {name!r}; available: {sorted(BACKENDS)}") from None
