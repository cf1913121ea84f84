"""Instance and solution documents (JSON, schema_version 1).

Node numbers in documents (origin, hubs, allocation quadruples, setup
scenario) are 1-based, matching the published tables; the in-memory
model is 0-based.
"""

from __future__ import annotations

import json
import math
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Union

import jsonschema
import numpy as np

from .core import AllocationPlan, HubSet, Instance, Solution, validate_instance
from .scenarios import build_seasonal_demands, build_setup_scenarios
from .search import RegretReport

SCHEMA_VERSION = 1

_matrix = {"type": "array", "items": {"type": "array", "items": {"type": ["number", "null"]}}}
_vector = {"type": "array", "items": {"type": "number"}}

INSTANCE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "hub location instance",
    "type": "object",
    "required": ["schema_version", "nodes", "distances", "capacities", "coefficients", "demand_scenarios",
                 "setup_scenarios"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "nodes": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        "distances": {
            "type": "object",
            "oneOf": [{"required": ["full"]}, {"required": ["upper"]}],
            "properties": {"full": _matrix, "upper": _matrix},
            "additionalProperties": False,
        },
        "capacities": _vector,
        "coefficients": {
            "type": "object",
            "required": ["alpha"],
            "properties": {"alpha": {"type": "number"}, "beta": {"type": "number"}, "delta": {"type": "number"}},
            "additionalProperties": False,
        },
        "origin": {"type": "integer", "minimum": 1},
        "demand_scenarios": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["probability"],
                "oneOf": [{"required": ["matrix"]}, {"required": ["origin_row"]}],
                "properties": {
                    "name": {"type": "string"},
                    "probability": {"type": "number"},
                    "matrix": _matrix,
                    "origin_row": _vector,
                },
                "additionalProperties": False,
            },
        },
        "setup_scenarios": {
            "oneOf": [
                {"type": "array", "minItems": 1, "items": _vector},
                {
                    "type": "object",
                    "required": ["base", "multipliers"],
                    "properties": {"base": _vector, "multipliers": _vector},
                    "additionalProperties": False,
                },
            ]
        },
        "setup_cost_unit": {"type": "number", "exclusiveMinimum": 0},
        "report_unit": {"type": "number", "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}

_nullable_num = {"type": ["number", "null"]}
SOLUTION_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "hub location solution",
    "type": "object",
    "required": ["schema_version", "kind", "status", "mode", "hubs", "allocation", "flow_cost", "setup_cost",
                 "objective"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"enum": ["solution", "regret_report"]},
        "instance": {"type": "string"},
        "status": {"enum": ["optimal", "infeasible"]},
        "mode": {"enum": ["deterministic", "scenario", "minimax"]},
        "alpha": _nullable_num,
        "setup_scenario": {"type": ["integer", "null"]},
        "hubs": {"type": "array", "items": {"type": "integer"}},
        "hub_names": {"type": "array", "items": {"type": "string"}},
        "allocation": {
            "type": "array",
            "items": {"type": "array", "prefixItems": [{"type": "integer"}] * 4 + [{"type": "number"}],
                      "minItems": 5, "maxItems": 5},
        },
        "flow_cost": _nullable_num,
        "setup_cost": _nullable_num,
        "objective": _nullable_num,
        "per_scenario_regret": {"type": ["array", "null"], "items": {"type": "number"}},
        "max_regret": _nullable_num,
        "z_star": {"type": "array", "items": {"type": "number"}},
        "scenario_setup_costs": {"type": "array", "items": {"type": "number"}},
        "scenario_hubs": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "scenario_objectives": {"type": "array", "items": _nullable_num},
        "timestamp": {"type": "string"},
        "n_nodes": {"type": ["integer", "null"]},
    },
    "additionalProperties": False,
}

SCHEMAS = {"instance": INSTANCE_SCHEMA, "solution": SOLUTION_SCHEMA}


class InstanceFormatError(ValueError):
    pass


def _square(rows, n, what) -> np.ndarray:
    out = np.zeros((n, n))
    if len(rows) != n:
        raise InstanceFormatError(f"{what}: expected {n} rows, got {len(rows)}")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise InstanceFormatError(f"{what}[{i}]: expected {n} entries, got {len(row)}")
        out[i] = [0.0 if v is None else v for v in row]
    return out


def _upper(rows, n) -> np.ndarray:
    """Upper-triangular rows, each starting either at the diagonal or just after it."""
    D = np.zeros((n, n))
    if len(rows) not in (n, n - 1):
        raise InstanceFormatError(f"distances.upper: expected {n} rows, got {len(rows)}")
    for i, row in enumerate(rows):
        vals = [0.0 if v is None else float(v) for v in row]
        if len(vals) == n - i:
            if vals[0] != 0:
                raise InstanceFormatError(f"distances.upper[{i}]: diagonal entry must be 0")
            vals = vals[1:]
        elif len(vals) != n - i - 1:
            raise InstanceFormatError(f"distances.upper[{i}]: expected {n - i} or {n - i - 1} entries, got {len(vals)}")
        for off, v in enumerate(vals):
            j = i + 1 + off
            D[i, j] = D[j, i] = v
    return D


def parse_instance(doc: dict, source: str = "<document>") -> Instance:
    try:
        jsonschema.validate(doc, INSTANCE_SCHEMA)
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InstanceFormatError(f"{source}: at {loc}: {exc.message}") from None
    names = doc["nodes"]
    n = len(names)
    dist = doc["distances"]
    D = _square(dist["full"], n, "distances.full") if "full" in dist else _upper(dist["upper"], n)
    origin = doc.get("origin")
    origin = None if origin is None else origin - 1
    mats, probs = [], []
    for s, sc in enumerate(doc["demand_scenarios"]):
        probs.append(sc["probability"])
        if "matrix" in sc:
            W = _square(sc["matrix"], n, f"demand_scenarios[{s}].matrix")
            if origin is None:
                np.fill_diagonal(W, 0.0)
        else:
            if origin is None:
                raise InstanceFormatError(f"{source}: demand_scenarios[{s}] uses origin_row but no origin is set")
            row = sc["origin_row"]
            if len(row) != n:
                raise InstanceFormatError(f"demand_scenarios[{s}].origin_row: expected {n} entries, got {len(row)}")
            W = build_seasonal_demands(np.asarray(row, dtype=float), origin, [1.0])[0][0]
        mats.append(W)
    unit = float(doc.get("setup_cost_unit", 1.0))
    ss = doc["setup_scenarios"]
    F = build_setup_scenarios(ss["base"], ss["multipliers"]) if isinstance(ss, dict) else np.asarray(ss, float)
    coef = doc["coefficients"]
    return Instance(
        names=names,
        distances=D,
        capacities=np.asarray(doc["capacities"], dtype=float),
        demands=np.array(mats),
        probabilities=np.asarray(probs, dtype=float),
        setup_costs=F * unit,
        alpha=coef["alpha"],
        beta=coef.get("beta", 1.0),
        delta=coef.get("delta", 1.0),
        origin=origin,
        setup_cost_unit=unit,
        report_unit=doc.get("report_unit", 1.0),
        name=doc.get("name", ""),
    )


def load_instance(path: Union[str, Path]) -> Instance:
    """Read, schema-check and validate an instance document."""
    path = Path(path)
    text = path.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    inst = parse_instance(doc, str(path))
    if not inst.name:
        inst = inst.replace(name=path.stem)
    problems = validate_instance(inst)
    if problems:
        raise InstanceFormatError(f"{path}: invalid instance:\n" + "\n".join(f"  {v}" for v in problems))
    return inst


def instance_to_dict(instance: Instance) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": instance.name,
        "nodes": list(instance.names),
        "distances": {"full": instance.distances.tolist()},
        "capacities": instance.capacities.tolist(),
        "coefficients": {"alpha": instance.alpha, "beta": instance.beta, "delta": instance.delta},
        "demand_scenarios": [{"probability": float(p), "matrix": W.tolist()}
                             for p, W in zip(instance.probabilities, instance.demands)],
        "setup_scenarios": (instance.setup_costs / instance.setup_cost_unit).tolist(),
        "setup_cost_unit": instance.setup_cost_unit,
        "report_unit": instance.report_unit,
    }
    if instance.origin is not None:
        doc["origin"] = instance.origin + 1
    return doc


def packaged_path(name: str) -> Path:
    """Filesystem path of a bundled instance such as ``testcase1.json``."""
    return Path(str(resources.files("hubloc") / "data" / name))


def packaged_instances() -> list[str]:
    return sorted(p.name for p in resources.files("hubloc").joinpath("data").iterdir() if p.name.endswith(".json"))


def load_packaged(name: str) -> Instance:
    return load_instance(packaged_path(name))


def _num(v):
    return None if v is None or (isinstance(v, float) and math.isnan(v)) else float(v)


def _unnum(v):
    return float("nan") if v is None else float(v)


def solution_to_dict(obj: Union[Solution, RegretReport], instance: Instance | None = None,
                     timestamp: bool = False) -> dict:
    report = obj if isinstance(obj, RegretReport) else None
    sol = report.solution if report else obj
    hubs = list(sol.hub_set.labels) if sol.hub_set else []
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "regret_report" if report else "solution",
        "status": sol.status,
        "mode": sol.mode,
        "alpha": _num(sol.alpha),
        "setup_scenario": None if sol.setup_scenario is None else sol.setup_scenario + 1,
        "n_nodes": sol.hub_set.n if sol.hub_set else (instance.n if instance is not None else None),
        "hubs": hubs,
        "allocation": [[i + 1, j + 1, k + 1, m + 1, f] for i, j, k, m, f in _expand(sol.allocation)],
        "flow_cost": _num(sol.flow_cost),
        "setup_cost": _num(sol.setup_cost),
        "objective": _num(sol.objective),
        "per_scenario_regret": None if sol.per_scenario_regret is None
        else [sol.per_scenario_regret[t] for t in sorted(sol.per_scenario_regret)],
        "max_regret": _num(sol.max_regret),
    }
    if instance is not None:
        doc["instance"] = instance.name
        doc["hub_names"] = [instance.names[k - 1] for k in hubs]
    if report:
        doc["z_star"] = list(report.z_star)
        doc["scenario_setup_costs"] = list(report.setup_costs)
        doc["scenario_hubs"] = [list(s.hub_set.labels) for s in report.scenario_solutions]
        doc["scenario_objectives"] = [_num(s.objective) for s in report.scenario_solutions]
    if timestamp:
        doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return doc


def _expand(plan):
    from .allocation import expand_plan

    return expand_plan(plan)


def dumps(doc) -> str:
    """JSON with one line per innermost list; floats use the shortest round-trip repr."""

    def enc(o, ind):
        pad = " " * (ind + 1)
        if isinstance(o, dict) and o:
            body = ",\n".join(pad + json.dumps(k) + ": " + enc(v, ind + 1) for k, v in o.items())
            return "{\n" + body + "\n" + " " * ind + "}"
        if isinstance(o, list) and o and isinstance(o[0], (list, dict)):
            return "[\n" + ",\n".join(pad + enc(v, ind + 1) for v in o) + "\n" + " " * ind + "]"
        return json.dumps(o, allow_nan=False)

    return enc(doc, 0) + "\n"


def write_solution(obj: Union[Solution, RegretReport], path: Union[str, Path], instance: Instance | None = None,
                   timestamp: bool = False) -> None:
    doc = solution_to_dict(obj, instance, timestamp)
    Path(path).write_text(dumps(doc))


def solution_from_dict(doc: dict, n: int | None = None) -> Union[Solution, RegretReport]:
    jsonschema.validate(doc, SOLUTION_SCHEMA)
    if n is None:
        n = doc.get("n_nodes")
    if n is None:
        idx = [v for q in doc["allocation"] for v in q[:4]] + doc["hubs"]
        n = max(idx) if idx else 0
    hubs = HubSet.of(n, [k - 1 for k in doc["hubs"]]) if doc["status"] == "optimal" else None
    z, second = {}, {}
    for i, j, k, m, f in doc["allocation"]:
        z[(i - 1, j - 1, k - 1)] = float(f)
        second[(i - 1, j - 1, k - 1)] = m - 1
    psr = doc.get("per_scenario_regret")
    sol = Solution(
        hubs,
        AllocationPlan(z, second),
        _unnum(doc["flow_cost"]),
        _unnum(doc["setup_cost"]),
        _unnum(doc["objective"]),
        doc["status"],
        doc["mode"],
        None if doc.get("setup_scenario") is None else doc["setup_scenario"] - 1,
        None if doc.get("alpha") is None else float(doc["alpha"]),
        None if psr is None else {t: float(r) for t, r in enumerate(psr)},
        None if doc.get("max_regret") is None else float(doc["max_regret"]),
    )
    if doc["kind"] != "regret_report":
        return sol
    scen = [Solution(HubSet.of(n, [k - 1 for k in h]), AllocationPlan.empty(), float("nan"), float("nan"),
                     _unnum(o), "optimal", "scenario", t, sol.alpha)
            for t, (h, o) in enumerate(zip(doc["scenario_hubs"], doc["scenario_objectives"]))]
    return RegretReport(list(doc["z_star"]), scen, list(doc["scenario_setup_costs"]), list(psr), sol.max_regret, sol)


def load_solution(path: Union[str, Path], n: int | None = None):
    return solution_from_dict(json.loads(Path(path).read_text()), n)


def break_even_tsv(report) -> str:
    """Tab-delimited grid with columns phi, seasonal_total, fixed_total."""
    lines = ["phi\tseasonal_total\tfixed_total"]
    for p, s, f in zip(report.phi, report.seasonal_total, report.fixed_total):
        lines.append(f"{float(p)!r}\t{float(s)!r}\t{float(f)!r}")
    return "\n".join(lines) + "\n"


def write_break_even(report, path: Union[str, Path]) -> None:
    Path(path).write_text(break_even_tsv(report))
