"""Dense two-phase primal simplex."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np

from . import _kernels

LpStatus = Literal["optimal", "infeasible", "unbounded"]

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7
OPT_TOL = 1e-9
BLAND_AFTER = 5000

LE, EQ, GE = "<=", "=", ">="
_SENSES = {"<=": LE, "L": LE, "le": LE, "=": EQ, "==": EQ, "E": EQ, "eq": EQ, ">=": GE, "G": GE, "ge": GE}


@dataclass
class LpProblem:
    """minimize c @ x  s.t.  A x (senses) b,  0 <= x <= upper."""

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    senses: Sequence[str]
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        self.A = np.asarray(self.A, dtype=float).reshape(-1, self.c.shape[0]) if np.size(self.A) else np.zeros((0, self.c.shape[0]))
        self.b = np.asarray(self.b, dtype=float).ravel()
        self.senses = [_SENSES[s] for s in self.senses]
        if self.upper is not None:
            self.upper = np.asarray(self.upper, dtype=float)

    @property
    def shape(self):
        return self.A.shape

    def check(self):
        m, n = self.A.shape
        if self.c.shape != (n,):
            raise ValueError(f"c has shape {self.c.shape}, expected ({n},)")
        if self.b.shape != (m,) or len(self.senses) != m:
            raise ValueError(f"b/senses length mismatch with {m} rows")
        if self.upper is not None and self.upper.shape != (n,):
            raise ValueError("upper bound vector length mismatch")
        for name, arr in (("c", self.c), ("A", self.A), ("b", self.b)):
            if np.isnan(arr).any():
                raise ValueError(f"NaN in {name}")
        if not np.all(np.isfinite(self.b)):
            raise ValueError("b must be finite")
        if self.upper is not None and (np.isnan(self.upper).any() or (self.upper < 0).any()):
            raise ValueError("upper bounds must be >= 0")


@dataclass
class LpResult:
    status: LpStatus
    value: float = float("nan")
    x: Optional[np.ndarray] = None
    dual: Optional[np.ndarray] = None  # one per constraint row
    bound_dual: Optional[np.ndarray] = None  # one per variable, 0 where no upper bound
    iterations: int = 0
    phase1_value: float = float("nan")
    info: dict = field(default_factory=dict)

    @property
    def is_optimal(self):
        return self.status == "optimal"


class SimplexError(RuntimeError):
    """Numeric trouble the solver will not hide (iteration limit, overflow, singular basis)."""


def _standard_form(p: LpProblem):
    """Rows of A plus explicit upper-bound rows, equilibrated, with b >= 0."""
    m, n = p.A.shape
    A = p.A
    b = p.b
    senses = list(p.senses)
    if p.upper is not None:
        bounded = np.flatnonzero(np.isfinite(p.upper))
        if bounded.size:
            A = np.vstack([A, np.eye(n)[bounded]])
            b = np.concatenate([b, p.upper[bounded]])
            senses += [LE] * bounded.size
    else:
        bounded = np.zeros(0, dtype=int)
    A = A.copy()
    b = b.copy()
    scale = np.abs(A).max(axis=1) if A.size else np.ones(0)
    scale[scale == 0] = 1.0
    A /= scale[:, None]
    b /= scale
    sign = np.where(b < 0, -1.0, 1.0)
    A *= sign[:, None]
    b *= sign
    flip = {LE: GE, GE: LE, EQ: EQ}
    senses = [flip[s] if sg < 0 else s for s, sg in zip(senses, sign)]
    return A, b, senses, scale, sign, bounded


def solve_lp(problem: LpProblem, *, backend: str | None = None, bland_after: int = BLAND_AFTER,
             max_iter: Optional[int] = None) -> LpResult:
    problem.check()
    if not np.all(np.isfinite(problem.c)):
        raise ValueError("c must be finite")
    loop = _kernels.get_pivot_loop(backend)
    A, b, senses, row_scale, row_sign, bounded = _standard_form(problem)
    m, n = A.shape

    le = [i for i, s in enumerate(senses) if s == LE]
    ge = [i for i, s in enumerate(senses) if s == GE]
    art_rows = [i for i, s in enumerate(senses) if s != LE]
    n_slack = len(le) + len(ge)
    n_art = len(art_rows)
    N = n + n_slack + n_art
    T = np.zeros((m + 1, N + 1))
    T[:m, :n] = A
    T[:m, -1] = b
    basis = np.empty(m, dtype=np.int64)
    col = n
    for i in le:
        T[i, col] = 1.0
        basis[i] = col
        col += 1
    for i in ge:
        T[i, col] = -1.0
        col += 1
    first_art = col
    for i in art_rows:
        T[i, col] = 1.0
        basis[i] = col
        col += 1

    if max_iter is None:
        max_iter = 10 * (m + N) ** 2 + 100
    iterations = 0
    piv_tol, opt_tol = PIVOT_TOL, OPT_TOL

    phase1 = 0.0
    if n_art:
        T[m, :first_art] = -T[art_rows, :first_art].sum(axis=0)
        T[m, -1] = -T[art_rows, -1].sum()
        status, it = loop(T, basis, N, max_iter, bland_after, piv_tol, opt_tol)
        iterations += it
        if status == _kernels.ITERATION_LIMIT:
            raise SimplexError(f"phase 1 hit the iteration limit ({max_iter})")
        phase1 = -T[m, -1]
        if phase1 > FEAS_TOL * (1.0 + (b.max() if m else 0.0)):
            return LpResult("infeasible", iterations=iterations, phase1_value=phase1)
        # pivot remaining artificials out; rows where that is impossible are redundant
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= first_art:
                cand = np.flatnonzero(np.abs(T[i, :first_art]) > piv_tol)
                if cand.size:
                    _kernels.pivot_numpy(T, i, int(cand[0]))
                    basis[i] = int(cand[0])
                else:
                    keep[i] = False
        if not keep.all():
            T = np.vstack([T[:m][keep], T[m:]])
            basis = basis[keep]
        T = np.ascontiguousarray(np.delete(T, np.s_[first_art:N], axis=1))
        N = first_art
        m = T.shape[0] - 1
    else:
        keep = np.ones(m, dtype=bool)

    cmax = np.abs(problem.c).max() if problem.c.size else 0.0
    cscale = cmax if cmax > 0 else 1.0
    cost = np.zeros(N)
    cost[:n] = problem.c / cscale
    T[m, :N] = cost - cost[basis] @ T[:m, :N]
    T[m, -1] = -cost[basis] @ T[:m, -1]
    status, it = loop(T, basis, N, max_iter, bland_after, piv_tol, opt_tol)
    iterations += it
    if status == _kernels.ITERATION_LIMIT:
        raise SimplexError(f"phase 2 hit the iteration limit ({max_iter})")
    if status == _kernels.UNBOUNDED:
        return LpResult("unbounded", iterations=iterations, phase1_value=phase1)

    full = np.zeros(N)
    full[basis] = T[:m, -1]
    x = np.clip(full[:n], 0.0, None)
    if problem.upper is not None:
        x = np.minimum(x, np.where(np.isfinite(problem.upper), problem.upper, np.inf))
    value = float(problem.c @ x)
    if not np.isfinite(value):
        raise SimplexError("objective overflow")

    # duals of the scaled standard form: B^T y = c_B over the kept rows
    Astd = np.zeros((A.shape[0], N))
    Astd[:, :n] = A
    colp = n
    for i in le:
        Astd[i, colp] = 1.0
        colp += 1
    for i in ge:
        Astd[i, colp] = -1.0
        colp += 1
    B = Astd[keep][:, basis]
    try:
        y_kept = np.linalg.solve(B.T, cost[basis])
    except np.linalg.LinAlgError as exc:
        raise SimplexError("singular final basis") from exc
    y_std = np.zeros(A.shape[0])
    y_std[keep] = y_kept
    y = y_std * row_sign / row_scale * cscale
    n_rows = problem.A.shape[0]
    bound_dual = np.zeros(n)
    bound_dual[bounded] = y[n_rows:]
    return LpResult("optimal", value, x, y[:n_rows], bound_dual, iterations, phase1)


def certify(problem: LpProblem, result: LpResult) -> dict:
    """Primal feasibility, complementary slackness and duality-gap residuals."""
    x, y, w = result.x, result.dual, result.bound_dual
    A, b, c = problem.A, problem.b, problem.c
    Ax = A @ x
    viol = np.zeros_like(b)
    slack = np.zeros_like(b)
    dual_sign = 0.0
    for i, s in enumerate(problem.senses):
        if s == LE:
            viol[i] = max(Ax[i] - b[i], 0.0)
            slack[i] = b[i] - Ax[i]
            dual_sign = max(dual_sign, y[i])
        elif s == GE:
            viol[i] = max(b[i] - Ax[i], 0.0)
            slack[i] = Ax[i] - b[i]
            dual_sign = max(dual_sign, -y[i])
        else:
            viol[i] = abs(Ax[i] - b[i])
    viol = max(viol.max(initial=0.0), max(-x.min(initial=0.0), 0.0))
    upper = problem.upper if problem.upper is not None else np.full_like(c, np.inf)
    has_ub = np.isfinite(upper)
    if has_ub.any():
        viol = max(viol, max((x - upper)[has_ub].max(), 0.0))
    r = c - A.T @ y - w
    scale = 1.0 + abs(result.value)
    cs = max(
        np.abs(y * slack).max(initial=0.0),
        np.abs(r * x).max(initial=0.0),
        np.abs(w[has_ub] * (upper[has_ub] - x[has_ub])).max(initial=0.0),
    ) / scale
    dual_value = b @ y + (w[has_ub] @ upper[has_ub] if has_ub.any() else 0.0)
    return {
        "primal_residual": float(viol),
        "primal_tol": 1e-7 * (1.0 + np.abs(b).max(initial=0.0)),
        "complementary_slackness": float(cs),
        "duality_gap": float(abs(result.value - dual_value) / scale),
        "dual_infeasibility": float(max(-r.min(initial=0.0), dual_sign, w.max(initial=0.0), 0.0) / (1.0 + np.abs(c).max(initial=0.0))),
    }
