import numpy as np
import pytest

from hubloc.core import Instance
from hubloc.io import load_packaged


def random_instance(rng: np.random.Generator, n: int, n_demand: int = 1, n_setup: int = 1,
                    tightness: float = 0.6, alpha: float | None = None) -> Instance:
    """Small random instance with integer data.

    Node coordinates on a grid give metric distances; capacities are drawn so
    that most single hubs cannot carry everything (tightness = share of total
    demand one hub can take on average).
    """
    pts = rng.integers(0, 20, size=(n, 2))
    D = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2).astype(float)
    W = rng.integers(0, 10, size=(n_demand, n, n)).astype(float)
    for s in range(n_demand):
        np.fill_diagonal(W[s], 0.0)
    total = W.sum(axis=(1, 2)).max()
    cap = np.maximum(1.0, np.round(rng.uniform(0.3, 1.0, n) * tightness * total * 2))
    P = rng.dirichlet(np.ones(n_demand)) if n_demand > 1 else np.ones(1)
    P = P / P.sum()
    F = rng.integers(0, 60, size=(n_setup, n)).astype(float)
    a = float(rng.choice([0.2, 0.5, 0.8, 1.0])) if alpha is None else alpha
    return Instance(tuple(str(i + 1) for i in range(n)), D, cap, W, P, F, alpha=a)


@pytest.fixture(scope="session")
def testcase1():
    return load_packaged("testcase1.json")


@pytest.fixture(scope="session")
def testcase1_ext():
    return load_packaged("testcase1_ext.json")


@pytest.fixture(scope="session")
def casestudy():
    return load_packaged("casestudy_west.json")


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    print(ACCEPTANCE_LINES[number])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
