"""Command-line interface.

Exit codes: 0 optimal (or success), 1 input error, 2 infeasible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .analysis import break_even
from .core import Instance
from .search import (InfeasibleModelError, SearchConfig, SearchError, solve_deterministic, solve_minimax_regret,
                     solve_scenario)

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2
DEFAULT_ALPHAS = (0.3, 0.5, 0.7, 1.0)


def _fmt(x: float, full: bool) -> str:
    if x is None or x != x:
        return "-"
    return repr(float(x)) if full else f"{x:.6g}"


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    for cand in (path, path + ".json"):
        q = io.packaged_path(cand)
        if q.exists():
            return q
    raise FileNotFoundError(f"no such instance file: {path}")


def _load(args) -> Instance:
    inst = io.load_instance(_resolve(args.instance))
    coef = {k: getattr(args, k, None) for k in ("alpha", "beta", "delta")}
    coef = {k: v for k, v in coef.items() if v is not None}
    return inst.with_coefficients(**coef) if coef else inst


def _config(args) -> SearchConfig:
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    return SearchConfig(enable_pruning=not args.no_prune, threads=threads)


def _hub_names(inst: Instance, hubs) -> str:
    return ",".join(inst.names[k] for k in hubs.indices)


def cmd_validate(args) -> int:
    inst = io.load_instance(_resolve(args.instance))
    print(f"ok: {inst.name} n={inst.n} demand_scenarios={inst.n_demand_scenarios} "
          f"setup_scenarios={inst.n_setup_scenarios}")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _load(args)
    cfg = _config(args)
    unit = inst.report_unit
    full = args.full_precision
    t0 = time.perf_counter()
    if args.mode == "minimax":
        try:
            report = solve_minimax_regret(inst, cfg)
        except InfeasibleModelError as exc:
            print(f"infeasible: {exc}", file=sys.stderr)
            print("status: infeasible")
            return EXIT_INFEASIBLE
        obj, sol = report, report.solution
        line = f"hubs: {sol.hub_set} max_regret: {_fmt(report.max_regret / unit, full)}"
    else:
        if args.mode == "scenario":
            if args.scenario is None:
                raise ValueError("--scenario is required with --mode scenario")
            sol = solve_scenario(inst, args.scenario - 1, cfg)
        else:
            sol = solve_deterministic(inst, config=cfg)
        obj = sol
        if not sol.is_optimal:
            print("status: infeasible")
            print("no hub set can carry the demand within capacity", file=sys.stderr)
            if args.out:
                io.write_solution(sol, args.out, inst, timestamp=not args.no_timestamp)
            return EXIT_INFEASIBLE
        line = f"hubs: {sol.hub_set} objective: {_fmt(sol.objective / unit, full)}"
    elapsed = time.perf_counter() - t0
    print(line)
    if any(name != str(k + 1) for k, name in enumerate(inst.names)):
        print(f"hub names: {_hub_names(inst, sol.hub_set)}")
    print(f"flow: {_fmt(sol.flow_cost / unit, full)} setup: {_fmt(sol.setup_cost / unit, full)}")
    print(f"time: {elapsed:.3f}s")
    if args.out:
        io.write_solution(obj, args.out, inst, timestamp=not args.no_timestamp)
    return EXIT_OK


def _alphas(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad alpha list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty alpha list")
    return vals


def table3_grid(inst: Instance, alphas, cfg: SearchConfig):
    """Rows (label, [(hubs, cost) per alpha]); MRM costs are None."""
    rows = {"BDM": []}
    for t in range(inst.n_setup_scenarios):
        rows[f"s_f{t + 1}"] = []
    rows["MRM"] = []
    for a in alphas:
        J = inst.with_coefficients(alpha=a)
        d = solve_deterministic(J, config=cfg)
        rows["BDM"].append((d.hub_set, d.objective))
        report = solve_minimax_regret(J, cfg)
        for t, s in enumerate(report.scenario_solutions):
            rows[f"s_f{t + 1}"].append((s.hub_set, s.objective))
        rows["MRM"].append((report.hub_set, None))
    return list(rows.items())


def cmd_table3(args) -> int:
    inst = _load(args)
    cfg = _config(args)
    alphas = args.alphas or list(DEFAULT_ALPHAS)
    try:
        grid = table3_grid(inst, alphas, cfg)
    except InfeasibleModelError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    unit = inst.report_unit
    header = ["model"] + [f"{c}@{a:g}" for a in alphas for c in ("hubs", "cost")]
    print("\t".join(header))
    for label, cells in grid:
        out = [label]
        for hubs, cost in cells:
            out += [str(hubs) if hubs is not None else "-", "-" if cost is None else _fmt(cost / unit, args.full_precision)]
        print("\t".join(out))
    return EXIT_OK


def cmd_breakeven(args) -> int:
    inst = _load(args)
    cfg = _config(args)
    if args.phi_max < 0:
        raise ValueError("--phi-max must be nonnegative")
    steps = 1 if args.phi_max == 0 else args.phi_steps
    grid = np.linspace(0.0, args.phi_max, steps)
    try:
        rep = break_even(inst, args.horizon, grid, establishment=args.establishment, config=cfg)
    except InfeasibleModelError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    if args.out:
        io.write_break_even(rep, args.out)
    else:
        sys.stdout.write(io.break_even_tsv(rep))
    print(f"seasonal hubs: {' | '.join(_hub_names(inst, s.hub_set) for s in rep.seasonal.solutions)}")
    print(f"fixed hubs: {_hub_names(inst, rep.fixed.hub_set)}")
    print(f"reconfigurations: {rep.events}")
    print(f"phi*: {_fmt(rep.phi_star, args.full_precision)}" if rep.has_crossing else rep.note)
    return EXIT_OK


def cmd_schema(args) -> int:
    print(json.dumps(io.SCHEMAS[args.kind], indent=2))
    return EXIT_OK


def _common(p: argparse.ArgumentParser, coefficients=True):
    p.add_argument("instance", help="instance file, or the name of a packaged instance")
    if coefficients:
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--delta", type=float)
    p.add_argument("--no-prune", action="store_true", help="evaluate every capacity-feasible hub set")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all CPUs)")
    p.add_argument("--seed", type=int, default=None, help="reserved; the solver is deterministic")
    p.add_argument("--full-precision", action="store_true", help="print exact values instead of 6 digits")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hubloc", description="Capacitated hub location under uncertain demand and setup cost")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("instance")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="solve one model")
    _common(p)
    p.add_argument("--mode", choices=["deterministic", "scenario", "minimax"], default="deterministic")
    p.add_argument("--scenario", type=int, help="setup scenario number (1-based) for --mode scenario")
    p.add_argument("--out", help="write the solution document here")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp from --out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table3", help="hub sets and costs for every model across alpha values")
    _common(p)
    p.add_argument("--alphas", type=_alphas, help="comma-separated alpha values")
    p.set_defaults(func=cmd_table3)

    p = sub.add_parser("breakeven", help="seasonal re-optimization versus the minimax network")
    _common(p)
    p.add_argument("--horizon", type=float, default=360.0, help="horizon in days (default 360)")
    p.add_argument("--phi-max", type=float, default=0.05)
    p.add_argument("--phi-steps", type=int, default=51)
    p.add_argument("--establishment", choices=["installed", "grand_total"], default="installed")
    p.add_argument("--out", help="write the tab-delimited grid here")
    p.set_defaults(func=cmd_breakeven)

    p = sub.add_parser("schema", help="print a document schema")
    p.add_argument("kind", choices=sorted(io.SCHEMAS), nargs="?", default="instance")
    p.set_defaults(func=cmd_schema)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (io.InstanceFormatError, FileNotFoundError, IndexError, ValueError, SearchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
