"""Declarative scenario runner: JSON configs in, run records and reports out."""
from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import os
import time
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import jsonschema
import numpy as np

from . import hyperspace as hs
from . import limits as lm
from . import symbolic as sy
from . import torus as tr
from .spaces import (
    ERROR_BUDGET,
    GOLDEN_ALPHA,
    SUBSHIFT,
    SymbolicPoint,
    SystemSpec,
    TorusPoint,
    complement,
)

OUTPUT_ENV = "QUASILAB_OUTPUT_DIR"
DEFAULT_OUTPUT = "quasilab-output"
RECORD_FORMAT = "quasilab.run-record/1"


class ConfigError(ValueError):
    """Config failed schema or semantic validation; ``problems`` lists offending keys."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


# ---------------------------------------------------------------- configs


def schema() -> dict:
    return json.loads(resources.files("quasilab.scenarios").joinpath("schema.json").read_text())


def shipped_scenarios() -> dict[str, Path]:
    """Shipped config files by stem."""
    root = resources.files("quasilab.scenarios")
    out = {}
    for entry in root.iterdir():
        if entry.name.endswith(".json") and entry.name != "schema.json":
            out[entry.name[:-5]] = Path(str(entry))
    return dict(sorted(out.items()))


def resolve_config(path_or_name: str) -> Path:
    p = Path(path_or_name)
    if p.exists():
        return p
    shipped = shipped_scenarios()
    if path_or_name in shipped:
        return shipped[path_or_name]
    raise FileNotFoundError(f"no config file or shipped scenario named {path_or_name!r}")


def load_config(path_or_name: str) -> dict:
    path = resolve_config(path_or_name)
    try:
        cfg = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError([f"<root>: not valid JSON ({exc})"]) from None
    validate_config(cfg)
    return cfg


def validate_config(cfg: Any) -> None:
    validator = jsonschema.Draft202012Validator(schema())
    problems = []
    for err in sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path)):
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        problems.append(f"{where}: {err.message}")
    if problems:
        raise ConfigError(problems)
    names = [s["name"] for s in cfg["scenarios"]]
    dup = sorted({n for n in names if names.count(n) > 1})
    if dup:
        problems.append(f"scenarios: duplicate names {dup}")
    for i, sc in enumerate(cfg["scenarios"]):
        try:
            build_system(sc["system"])
        except ValueError as exc:
            problems.append(f"scenarios/{i}/system: {exc}")
    if problems:
        raise ConfigError(problems)


def build_system(spec: dict) -> SystemSpec:
    if spec["kind"] == SUBSHIFT:
        return SystemSpec.subshift({int(k): v for k, v in spec["rules"].items()})
    alpha = spec["alpha"]
    return SystemSpec.torus(GOLDEN_ALPHA if alpha == "golden" else float(alpha))


def build_point(spec: dict, system: SystemSpec):
    if "x" in spec:
        return TorusPoint(spec["x"], spec["y"])
    if "base" in spec:
        return sy.base_point(spec["base"], spec.get("shift", 0))
    if "seed" in spec:
        return SymbolicPoint(seed=tuple(spec["seed"]), shift=spec.get("shift", 0),
                             complemented=spec.get("complemented", False), system=system)
    if "panel" in spec:
        return sy.base_point("a", sy.panel_shifts()[spec["panel"]] + spec.get("shift", 0))
    return SymbolicPoint.from_word(spec["word"], spec.get("origin"), system=system)


def build_set(spec: list, system: SystemSpec) -> hs.FiniteClosedSet:
    return hs.FiniteClosedSet(system, [build_point(p, system) for p in spec])


def build_net(spec: dict, system: SystemSpec) -> lm.TimeNet:
    if "table" in spec:
        return lm.timenet_for_idempotent(sy.TABLES[spec["table"]], spec["radii"], spec["horizon"])
    if "constant" in spec:
        return lm.constant_net(spec["constant"])
    if "torus_identity" in spec:
        t = spec["torus_identity"]
        return lm.torus_identity_net(system, t["tolerances"], t["horizon"], t["panel_count"], t["seed"])
    p, q = (build_net(s, system) for s in spec["compose"])
    return lm.compose_nets(p, q, spec["pairing"])


def _set_record(A: hs.FiniteClosedSet) -> list:
    return [lm.point_record(p) for p in A.points]


# ---------------------------------------------------------------- operations


def op_idempotent_algebra(system, params, rng):
    tables = sy.TABLES
    comps = {f"{s}{t}": sy.idempotent_compose(tables[s], tables[t]).mapping
             for s in tables for t in tables}
    samples = sy.offorbit_panel(count=params["offorbit_samples"])

    def same(x, y):
        return sy.tables_agree(sy.idempotent_compose(tables[x[0]], tables[x[1]]), tables[y], samples)

    fixed = {name: {b: sy.in_fixed_set(t, sy.base_point(b)) for b in sy.BASES} for name, t in tables.items()}
    ab = hs.closed_set([sy.A, sy.B])
    u1_ab = sy.apply_to_finite_set(sy.U1, ab)
    v1_ab = sy.apply_to_finite_set(sy.V1, ab)
    verdicts = {
        "u1v1=v1": same(("u1", "v1"), "v1"),
        "v1u1=u1": same(("v1", "u1"), "u1"),
        "u2v2=v2": same(("u2", "v2"), "v2"),
        "v2u2=u2": same(("v2", "u2"), "u2"),
        "u1~v1": sy.quasi_order_check(sy.U1, sy.V1) == "equivalent",
        "u2~v2": sy.quasi_order_check(sy.U2, sy.V2) == "equivalent",
        "u1,u2 incomparable": sy.quasi_order_check(sy.U1, sy.U2) == "incomparable",
        "idempotent": all(same((n, n), n) for n in tables),
        "F_u1=F_v1 contains b,bbar not a,abar": fixed["u1"] == fixed["v1"] == {
            "a": False, "abar": False, "b": True, "bbar": True},
        "F_u2=F_v2 contains a,abar not b,bbar": fixed["u2"] == fixed["v2"] == {
            "a": True, "abar": True, "b": False, "bbar": False},
        "off-orbit samples fixed": all(sy.in_fixed_set(t, p) for t in tables.values() for p in samples),
        "u1({a,b})={b}": u1_ab == hs.closed_set([sy.B]),
        "v1({a,b})={b,bbar}": v1_ab == hs.closed_set([sy.B, sy.BBAR]),
    }
    outputs = {
        "compositions": comps,
        "quasi_order": {f"{s},{t}": sy.quasi_order_check(tables[s], tables[t]) for s in tables for t in tables},
        "fixed_sets": fixed,
        "u1({a,b})": _set_record(u1_ab),
        "v1({a,b})": _set_record(v1_ab),
        "offorbit_panel_shifts": [str(n) for n in sy.panel_shifts()],
    }
    return outputs, verdicts, {}, {}


def op_time_net(system, params, rng):
    net = build_net(params["net"], system)
    return {"net": net.as_dict()}, {"nonempty": not net.empty, "complete": net.truncation is None}, {}, {}


def op_cluster_set(system, params, rng):
    net = build_net(params["net"], system)
    eps = params["eps"]
    outputs, verdicts, tables = {"net": net.as_dict(), "clusters": []}, {}, {}
    for i, spec in enumerate(params["sets"]):
        A = build_set(spec, system)
        c = lm.cluster_set(A, net, eps)
        outputs["clusters"].append(c.as_dict())
        verdicts[f"set {i} converged"] = c.converged
        tables[f"cluster-{i}-points.csv"] = _points_csv(c.result)
        tables[f"cluster-{i}-witness.csv"] = _rows_csv(["step", "d_H"], enumerate(c.witness, start=1))
    return outputs, verdicts, {}, tables


def op_finite_set_rule(system, params, rng):
    net = build_net(params["net"], system)
    table = sy.TABLES[params["net"]["table"]]
    eps, k = params["eps"], params["max_shift"]
    pool = [sy.base_point(b, s) for b in sy.BASES for s in range(-k, k + 1)]
    checked, mismatches = 0, []
    for size in range(1, params["max_size"] + 1):
        for combo in itertools.combinations(pool, size):
            A = hs.closed_set(combo)
            c = lm.cluster_set(A, net, eps)
            checked += 1
            if c.result.points != sy.apply_to_finite_set(table, A).points or not c.converged:
                mismatches.append(_set_record(A))
    outputs = {"net": net.as_dict(), "checked": checked, "mismatches": mismatches[:20],
               "mismatch_count": len(mismatches)}
    return outputs, {"cluster equals table image": not mismatches}, {}, {}


def op_idempotency(system, params, rng):
    eps = params["eps"]
    rows, ok = [], True
    for nspec in params["nets"]:
        net = build_net(nspec, system)
        for spec in params["sets"]:
            A = build_set(spec, system)
            once = lm.cluster_set(A, net, eps).result
            twice = lm.cluster_set(once, net, eps).result
            d = hs.hausdorff(once, twice)
            ok &= d <= eps
            rows.append({"net": net.label, "set": spec, "d_H": d, "once": _set_record(once)})
    return {"checks": rows}, {"double application within eps": bool(ok)}, {}, {}


def op_proximal_absorption(system, params, rng):
    net = build_net(params["net"], system)
    A = build_set(params["set"], system)
    y = build_point(params["extra"], system)
    Ay = hs.FiniteClosedSet(system, A.points + (y,))
    c1, c2 = lm.cluster_set(A, net, params["eps"]), lm.cluster_set(Ay, net, params["eps"])
    d = hs.hausdorff(c1.result, c2.result)
    outputs = {"without": c1.as_dict(), "with": c2.as_dict(), "d_H": d}
    return outputs, {"cluster sets agree within eps": d <= params["eps"]}, {}, {}


def op_recurrence(system, params, rng):
    outputs, verdicts, tables = {"reports": []}, {}, {}
    agree = True
    for i, spec in enumerate(params["sets"]):
        A = build_set(spec, system)
        r = lm.recurrence_report(A, params["eps"], params["horizon"])
        rec = r.as_dict()
        rec["set"] = _set_record(A)
        rec["return_times_head"] = r.return_times[:64]
        rec["distances_sha256"] = hashlib.sha256(np.ascontiguousarray(r.distances).tobytes()).hexdigest()
        if system.is_subshift and params.get("check_tables", False):
            rec["fixed_by"] = [n for n, t in sy.TABLES.items() if all(sy.in_fixed_set(t, p) for p in A.points)]
            agree &= bool(rec["fixed_by"]) == r.syndetic
        outputs["reports"].append(rec)
        verdicts[f"set {i}"] = r.verdict
        tables[f"recurrence-{i}.csv"] = _rows_csv(["n", "d_H", "gap"], r.rows())
    if system.is_subshift and params.get("check_tables", False):
        verdicts["syndetic iff fixed by a table"] = bool(agree)
    return outputs, verdicts, {}, tables


def op_ap_set(system, params, rng):
    outputs, verdicts = {"reports": []}, {}
    for i, spec in enumerate(params["tuples"]):
        pts = [build_point(p, system) for p in spec]
        r = lm.ap_set_test(pts, params["eps"], params["horizon"], system)
        outputs["reports"].append(r.as_dict() | {"tuple": spec})
        verdicts[f"tuple {i}"] = r.verdict
    return outputs, verdicts, {}, {}


def op_proximality(system, params, rng):
    outputs, verdicts = {"pairs": []}, {}
    for i, (ps, qs) in enumerate(params["pairs"]):
        x, y = build_point(ps, system), build_point(qs, system)
        r = lm.proximal_pair(x, y, params["horizon"], params["threshold"], system)
        rec = r.as_dict() | {"x": ps, "y": qs, "first_distances": [float(v) for v in r.distances[:34]]}
        outputs["pairs"].append(rec)
        verdicts[f"pair {i}"] = r.verdict
    return outputs, verdicts, {}, {}


def op_prolongation(system, params, rng):
    x = build_point(params["point"], system)
    est = lm.prolongation_point(x, params["delta"], params["sample"], params["horizon"], params["eps"],
                                seed=int(rng.integers(2 ** 31)), system=system)
    ref = hs.space_standin(system, params["eps"] / 4) if system.is_subshift else hs.torus_grid(
        int(np.ceil(2 / params["eps"])), system)
    cover = hs.covering_radius(est, ref)
    outputs = {"size": len(est), "covering_radius": cover, "reference_size": len(ref)}
    return outputs, {"eps-dense": cover <= params["eps"]}, {}, {"prolongation-points.csv": _points_csv(est)}


def op_d_star(system, params, rng):
    outputs, verdicts = {"orbits": []}, {}
    for i, spec in enumerate(params["sets"]):
        A = build_set(spec, system)
        members = lm.d_star_estimate(A, params["horizon"], params["eps"])
        rec = {"set": spec, "members": len(members), "first_members": [_set_record(M) for M in members[:8]]}
        if system.is_subshift:
            rec["complement_symmetric"] = all(_complement_closed(M) for M in members)
        if params.get("catalog_check", False):
            chk = lm.d_star_catalog_check(A, params["horizon"], params["eps"])
            rec["catalog"] = {k: chk[k] for k in ("catalog_to_orbit", "orbit_to_catalog", "passed")}
            verdicts[f"set {i} catalog within 2 eps"] = chk["passed"]
        outputs["orbits"].append(rec)
    return outputs, verdicts, {}, {}


def _complement_closed(M: hs.FiniteClosedSet) -> bool:
    return hs.FiniteClosedSet(M.system, [complement(p) for p in M.points]) == M


def op_quasifactor(system, params, rng):
    outputs, verdicts = {"collections": []}, {}
    for i, spec in enumerate(params["generators"]):
        A = build_set(spec, system)
        coll = lm.d_star_estimate(A, params["orbit_horizon"], params["eps"])
        q = lm.quasifactor_check(coll, params["eps"], params["horizon"])
        rec = q.as_dict() | {"generator": spec}
        if system.is_subshift:
            rec["complement_symmetric"] = all(_complement_closed(M) for M in coll)
        if q.witness:
            rec["witness_sets"] = [_set_record(coll[q.witness[0]]), _set_record(coll[q.witness[1]])]
        outputs["collections"].append(rec)
        verdicts[f"generator {i}"] = q.verdict
    return outputs, verdicts, {}, {}


def op_skew_closed_form(system, params, rng):
    pts = rng.random((params["points"], 2))
    n_max = params["max_n"]
    worst = 0.0
    for x, y in pts:
        xs, ys = tr.skew_power_many(system, np.arange(n_max + 1), x, y)
        p = TorusPoint(x, y)
        for n in range(n_max + 1):
            worst = max(worst, float(max(abs((xs[n] - p.x + 0.5) % 1 - 0.5), abs((ys[n] - p.y + 0.5) % 1 - 0.5))))
            p = tr.skew_step(system, p)
    outputs = {"max_deviation": worst, "points": params["points"], "max_n": n_max}
    budget = {"per_step": ERROR_BUDGET, "iterated_steps": n_max}
    return outputs, {"closed form matches iteration": worst <= params["tol"]}, budget, {}


def op_furstenberg_density(system, params, rng):
    targets = rng.random((params["targets"], 2))
    recs = tr.verify_dT_density(system, targets, params["horizon"], params["search_tol"],
                                workers=params.get("workers", 1))
    rows = [r.as_dict() for r in recs]
    ok = all(r.found and r.approach <= params["approach_tol"] for r in recs)
    outputs = {"targets": rows, "max_approach": max((r.approach for r in recs if r.found), default=None),
               "not_found": sum(not r.found for r in recs)}
    budget = {"per_step": ERROR_BUDGET, "fixed_point_rounding": params["horizon"] * 2.0 ** -63}
    csv_rows = [(r.target[0], r.target[1], r.n, r.approach, r.hits) for r in recs]
    return outputs, {"all targets approached": ok}, budget, {
        "density.csv": _rows_csv(["x", "y", "n", "approach", "hits"], csv_rows)}


def op_hausdorff_axioms(system, params, rng):
    pool = _axiom_pool(system, rng)
    D = hs.pairwise_distances(pool, pool)
    tol = params["tol"]
    sym_ok, tri_ok = True, True
    worst = 0.0
    for _ in range(params["triples"]):
        sets = [rng.choice(len(pool), size=int(rng.integers(1, params["max_size"] + 1)), replace=False)
                for _ in range(3)]
        d = {}
        for i, j in ((0, 1), (1, 0), (1, 2), (0, 2)):
            sub = D[np.ix_(sets[i], sets[j])]
            d[i, j] = max(sub.min(axis=1).max(), sub.min(axis=0).max())
        sym_ok &= abs(d[0, 1] - d[1, 0]) <= tol
        excess = d[0, 2] - d[0, 1] - d[1, 2]
        worst = max(worst, excess)
        tri_ok &= excess <= tol
    outputs = {"triples": params["triples"], "pool": len(pool), "max_triangle_excess": float(worst)}
    return outputs, {"symmetry": bool(sym_ok), "triangle inequality": bool(tri_ok)}, {}, {}


def _axiom_pool(system, rng, size: int = 160):
    if system.is_subshift:
        pts = [sy.base_point(sy.BASES[int(rng.integers(4))], int(rng.integers(-64, 64))) for _ in range(size - 8)]
        return pts + list(sy.offorbit_panel())
    return [TorusPoint(float(u), float(v)) for u, v in rng.random((size, 2))]


OPERATIONS: dict[str, Callable] = {
    "idempotent-algebra": op_idempotent_algebra,
    "time-net": op_time_net,
    "cluster-set": op_cluster_set,
    "finite-set-rule": op_finite_set_rule,
    "idempotency": op_idempotency,
    "proximal-absorption": op_proximal_absorption,
    "recurrence": op_recurrence,
    "ap-set": op_ap_set,
    "proximality": op_proximality,
    "prolongation": op_prolongation,
    "d-star": op_d_star,
    "quasifactor": op_quasifactor,
    "skew-closed-form": op_skew_closed_form,
    "furstenberg-density": op_furstenberg_density,
    "hausdorff-axioms": op_hausdorff_axioms,
}


# ---------------------------------------------------------------- running


def run_scenario(sc: dict) -> dict:
    """Execute one validated scenario; errors are captured in the record."""
    system = build_system(sc["system"])
    rng = np.random.default_rng(sc["rng_seed"])
    t0 = time.perf_counter()
    record = {"format": RECORD_FORMAT, "scenario": sc, "status": "ok", "outputs": {}, "verdicts": {},
              "error_budget": {"per_step": ERROR_BUDGET}, "tables": {}}
    try:
        outputs, verdicts, extra, tables = OPERATIONS[sc["operation"]](system, sc["params"], rng)
        record["outputs"] = _jsonable(outputs)
        record["verdicts"] = _jsonable(verdicts)
        record["error_budget"].update(_jsonable(extra))
        record["tables"] = tables
    except lm.EmptyNetError as exc:
        record["status"] = "error"
        record["error"] = {"type": "EmptyNetError", "message": str(exc), "best": _jsonable(exc.best)}
    except Exception as exc:  # noqa: BLE001 - every failure must land in the record
        record["status"] = "error"
        record["error"] = {"type": type(exc).__name__, "message": str(exc)}
    elapsed = time.perf_counter() - t0
    record["timing"] = {"seconds": round(elapsed, 3), "budget_s": sc["runtime_budget_s"],
                        "within_budget": elapsed <= sc["runtime_budget_s"]}
    return record


def run_config(path_or_name: str, output_dir: str | os.PathLike | None = None) -> list[dict]:
    cfg = load_config(path_or_name)
    out = output_directory(output_dir)
    records = []
    for sc in cfg["scenarios"]:
        rec = run_scenario(sc)
        write_record(rec, out)
        records.append(rec)
    return records


def output_directory(explicit=None) -> Path:
    return Path(explicit or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT)


# ---------------------------------------------------------------- reports


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _points_csv(A: hs.FiniteClosedSet) -> str:
    if A.is_symbolic:
        rows = []
        for p in A.points:
            rec = lm.point_record(p)
            rows.append((rec.get("base", ""), rec.get("shift", ""), rec.get("word", ""),
                         "".join("01"[c] for c in p.letters(-8, 8)) if p.known_radius() >= 8 else ""))
        return _rows_csv(["base", "shift", "word", "window8"], rows)
    return _rows_csv(["x", "y"], [(p.x, p.y) for p in A.points])


def machine_lines(record: dict) -> list[str]:
    """Line-delimited JSON with sorted keys; wall-clock timing is left out so reruns are byte-identical."""
    dump = lambda obj: json.dumps(obj, sort_keys=True, separators=(",", ":"))  # noqa: E731
    sc = record["scenario"]
    lines = [dump({"record": "scenario", "name": sc["name"], "operation": sc["operation"],
                   "status": record["status"], "config": sc})]
    for key in sorted(record["outputs"]):
        lines.append(dump({"record": "output", "key": key, "value": record["outputs"][key]}))
    for key in sorted(record["verdicts"]):
        lines.append(dump({"record": "verdict", "key": key, "value": record["verdicts"][key]}))
    lines.append(dump({"record": "error_budget", "value": record["error_budget"]}))
    if "error" in record:
        lines.append(dump({"record": "error", "value": record["error"]}))
    for name in sorted(record.get("tables", {})):
        digest = hashlib.sha256(record["tables"][name].encode()).hexdigest()
        lines.append(dump({"record": "table", "name": name, "sha256": digest}))
    return lines


def _short(v, width: int = 72) -> str:
    s = v if isinstance(v, str) else json.dumps(v, sort_keys=True)
    return s if len(s) <= width else s[: width - 3] + "..."


def table_text(record: dict) -> str:
    sc = record["scenario"]
    lines = [f"scenario   {sc['name']}", f"operation  {sc['operation']}", f"status     {record['status']}"]
    if "timing" in record:
        lines.append(f"seconds    {record['timing']['seconds']} (budget {record['timing']['budget_s']})")
    if "error" in record:
        lines.append(f"error      {record['error']['type']}: {record['error']['message']}")
    if record["verdicts"]:
        lines.append("")
        lines.append("verdicts")
        w = max(len(k) for k in record["verdicts"])
        for k in sorted(record["verdicts"]):
            lines.append(f"  {k.ljust(w)}  {record['verdicts'][k]}")
    if record["outputs"]:
        lines.append("")
        lines.append("outputs")
        w = max(len(k) for k in record["outputs"])
        for k in sorted(record["outputs"]):
            lines.append(f"  {k.ljust(w)}  {_short(record['outputs'][k])}")
    return "\n".join(lines) + "\n"


def emit_report(record: dict, fmt: str, directory: Path) -> list[Path]:
    """Write one report format for a record; returns the files written."""
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt == "machine":
        path = directory / "machine.jsonl"
        path.write_text("\n".join(machine_lines(record)) + "\n")
        written.append(path)
        for name, text in sorted(record.get("tables", {}).items()):
            p = directory / name
            p.write_text(text)
            written.append(p)
    elif fmt == "table-text":
        path = directory / "report.txt"
        path.write_text(table_text(record))
        written.append(path)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return written


def write_record(record: dict, out: Path) -> Path:
    directory = out / record["scenario"]["name"]
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / "record.json"
    path.write_text(json.dumps(record, sort_keys=True, indent=1) + "\n")
    emit_report(record, "machine", directory)
    emit_report(record, "table-text", directory)
    return path


def machine_digest(record: dict) -> str:
    return hashlib.sha256("\n".join(machine_lines(record)).encode()).hexdigest()


def clear_caches() -> None:
    """Drop memoised nets and panels so a rerun recomputes everything."""
    lm._cached_net.cache_clear()
    lm._cached_torus_net.cache_clear()
    sy._panel.cache_clear()
    sy._base_bytes.cache_clear()
