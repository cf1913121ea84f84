from ._kernels import BACKENDS, DEFAULT_BACKEND, HAVE_NUMBA
from .lp import LpProblem, LpResult, SimplexError, certify, solve_lp

__all__ = ["BACKENDS", "DEFAULT_BACKEND", "HAVE_NUMBA", "LpProblem", "LpResult", "SimplexError", "certify", "solve_lp"]
