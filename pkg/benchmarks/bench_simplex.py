"""Compare the numba and numpy pivot loops.

    python3 benchmarks/bench_simplex.py [--repeat 5] [--quick]

Two workloads: dense random LPs of growing size, and the capacitated
allocation LPs met while solving the packaged 5-city instance with all
first-hub capacities halved (so the LP path is taken for most hub sets).
Both backends run the same pivot rule, so iteration counts must agree.
"""

import argparse
import statistics
import time

import numpy as np

from hubloc.allocation import full_allocation_lp
from hubloc.core import HubSet
from hubloc.io import load_packaged
from hubloc.simplex import BACKENDS, LpProblem, solve_lp


def random_lp(rng, m, n):
    A = rng.uniform(0.0, 1.0, (m, n))
    b = A @ rng.uniform(0.0, 1.0, n) + rng.uniform(0.1, 1.0, m)
    c = -rng.uniform(0.1, 1.0, n)
    return LpProblem(c, A, b, ["<="] * m)


def time_solve(prob, backend, repeat):
    solve_lp(prob, backend=backend)  # warm-up, includes numba compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = solve_lp(prob, backend=backend)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), res


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="smaller sizes only")
    args = ap.parse_args()
    backends = sorted(BACKENDS)
    rng = np.random.default_rng(0)
    sizes = [(20, 40), (60, 120)] if args.quick else [(20, 40), (60, 120), (120, 240), (200, 400)]
    workloads = [(f"random {m}x{n}", random_lp(rng, m, n)) for m, n in sizes]

    inst = load_packaged("testcase1.json")
    inst = inst.replace(capacities=inst.capacities / 2)
    for hubs in ([0, 2], [1, 2, 3], list(range(5))):
        prob, _ = full_allocation_lp(inst, HubSet.of(5, hubs))
        workloads.append((f"x-LP hubs {{{','.join(str(k + 1) for k in hubs)}}} {prob.A.shape[0]}x{prob.A.shape[1]}", prob))

    print(f"{'workload':<34}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}{'iters':>8}")
    for name, prob in workloads:
        row, iters = [], set()
        for be in backends:
            t, res = time_solve(prob, be, args.repeat)
            row.append(t)
            iters.add(res.iterations)
        assert len(iters) == 1, f"backends disagree on iteration count for {name}: {iters}"
        speed = row[backends.index("numpy")] / row[backends.index("numba")] if "numba" in backends else float("nan")
        print(f"{name:<34}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row) + f"{speed:>9.1f}x{iters.pop():>8}")


if __name__ == "__main__":
    main()
