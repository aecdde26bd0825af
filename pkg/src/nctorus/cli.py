"""Command-line front end: ``nctorus <command> --input file.json``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from itertools import product

import jsonschema

from . import __version__
from .action import CyclicAction, check_theta_symplectic, free_outside_origin, order_of, split_block_diagonal
from .errors import NCTorusError, ParseError, SchemaError
from .heisenberg import (
    FOURIER,
    INVERSE_FOURIER,
    Grid,
    MetaplecticOp,
    build_geometry,
    commutation_residual,
    fourier_fixed_point_residual,
    gaussian,
    inner_identity_residual,
    metaplectic_kind,
    verify_covariance,
    verify_inner_compat,
    verify_unitarity,
)
from .schemas import INPUT_SCHEMAS, input_schema
from .serialize import parse_field, parse_int_matrix, parse_matrix, parse_scalar, scalar_to_json
from .skewmat import all_pfaffian_minors, find_positive_t, index_str, index_tuples, minors_positive, pfaffian, standard_Z
from .so_nn import extension_condition
from .trace_range import (
    Outcome,
    gl2_orbit_equal,
    morita_lambda_search,
    orbifold_range_bounds,
    span,
    torus_range,
)

DEFAULTS = {"t_max": 64, "coeff_bound": 10, "max_order": 24, "tolerance": 1e-6}
FOURIER_TOLERANCE = 1e-3
EXIT_CODES = {"ok": 0, "error": 1, "unknown": 2}


class Unknown(Exception):
    """Raised by a handler whose bounded search ran out; carries the payload."""

    def __init__(self, payload):
        super().__init__("bounded search exhausted")
        self.payload = payload


# ---------------------------------------------------------------------------
# handlers: (doc, flags) -> payload


def _field(doc):
    return parse_field(doc.get("field"))


def _theta(doc):
    return parse_matrix(doc["theta"], _field(doc))


def cmd_pfaffian(doc, flags):
    theta = _theta(doc)
    value = pfaffian(theta)
    return {"n": theta.n, "pfaffian": scalar_to_json(value), "text": str(value),
            "methods_agree": value == pfaffian(theta, "expansion")}


def cmd_minors(doc, flags):
    theta = _theta(doc)
    minors = all_pfaffian_minors(theta)
    return {"n": theta.n, "count": len(minors),
            "minors": [{"I": index_str(I), "value": scalar_to_json(v), "text": str(v)} for I, v in minors.items()]}


def cmd_find_t(doc, flags):
    theta = _theta(doc)
    t = find_positive_t(theta, flags["t_max"])
    if t is None:
        raise Unknown({"result": "not_found", "t": None, "bound": {"t_max": flags["t_max"]}})
    verified = minors_positive(theta + standard_Z(theta.n) * t)
    return {"result": "found", "t": t, "verified": verified}


def cmd_check_symplectic(doc, flags):
    return {"symplectic": check_theta_symplectic(parse_int_matrix(doc["W"]), _theta(doc))}


def cmd_order(doc, flags):
    N = order_of(parse_int_matrix(doc["W"]), flags["max_order"])
    return {"order": N, "finite": N is not None, "max_order": flags["max_order"]}


def cmd_freeness(doc, flags):
    W = parse_int_matrix(doc["W"])
    N = order_of(W, flags["max_order"])
    if N is None:
        raise Unknown({"order": None, "free": None, "bound": {"max_order": flags["max_order"]}})
    return {"order": N, "free": free_outside_origin(W, N)}


def cmd_extension_check(doc, flags):
    W = parse_int_matrix(doc["W"])
    chosen = doc.get("I")
    if chosen is None:
        tuples = index_tuples(len(W))
    elif chosen and isinstance(chosen[0], list):
        tuples = [tuple(I) for I in chosen]
    else:
        tuples = [tuple(chosen)]
    results = [{"I": index_str(I), "holds": extension_condition(W, I)} for I in tuples]
    return {"results": results, "all_hold": all(r["holds"] for r in results)}


def cmd_trace_range(doc, flags):
    return torus_range(_theta(doc)).to_json()


def cmd_orbifold_range(doc, flags):
    theta = _theta(doc)
    act = CyclicAction.generated_by(parse_int_matrix(doc["W"]), theta, flags["max_order"])
    return orbifold_range_bounds(theta, act).to_json()


def cmd_morita_lambda(doc, flags):
    fld = _field(doc)
    R1 = span([parse_scalar(s, fld) for s in doc["R1"]])
    R2 = span([parse_scalar(s, fld) for s in doc["R2"]])
    lam = morita_lambda_search(R1, R2, flags["coeff_bound"])
    base = {"R1": R1.to_json(), "R2": R2.to_json()}
    if lam is Outcome.UNKNOWN:
        raise Unknown(dict(base, result="unknown", **{"lambda": None}, bound={"coeff_bound": flags["coeff_bound"]}))
    if lam is Outcome.NOT_FOUND:
        return dict(base, result="not_found", **{"lambda": None})
    return dict(base, result="found", **{"lambda": scalar_to_json(lam), "lambda_text": str(lam)})


def cmd_gl2_orbit(doc, flags):
    fld = _field(doc)
    verdict = gl2_orbit_equal(parse_scalar(doc["theta1"], fld), parse_scalar(doc["theta2"], fld))
    if verdict is Outcome.UNKNOWN:
        raise Unknown({"equal": None, "bound": {"iterations": 500}})
    return {"equal": verdict}


def _lattice_box(n: int, b: int) -> list:
    return [list(l) for l in product(range(-b, b + 1), repeat=n)]


def cmd_verify_module(doc, flags):
    fld = _field(doc)
    theta = _theta(doc)
    p = doc["p"]
    t11 = [[parse_scalar(a, fld) for a in r] for r in doc["t11"]] if "t11" in doc else None
    geom = build_geometry(theta, p, t11)
    gspec = doc["grid"]
    grid = Grid(p, geom.q, gspec["L"], gspec["h"], gspec.get("K", 5 if geom.q else 0))
    f = gaussian(grid, center=[0.3] * p, freq=[0.2] * p, lattice="gaussian")
    g = gaussian(grid, center=[-0.2] * p, width=1.5, lattice="gaussian")
    box = _lattice_box(theta.n, doc.get("l_box", 1))

    act, op, kind = None, None, None
    if "W" in doc:
        act = CyclicAction.generated_by(parse_int_matrix(doc["W"]), theta, flags["max_order"])
        W1, _ = split_block_diagonal(act.W, 2 * p)
        kind = metaplectic_kind(geom, W1)
        re, im = doc.get("phase", [1.0, 0.0])
        op = MetaplecticOp(kind, complex(re, im))
    tests = doc.get("tests") or (["commutation", "inner_identity"]
                                 + (["covariance", "unitarity", "inner_compat"] if act else []))

    explicit = flags.get("tolerance_explicit") or "tolerance" in doc
    base_tol = flags["tolerance"]
    fourier = kind in (FOURIER, INVERSE_FOURIER)

    results = {}
    for name in tests:
        tol = base_tol
        if name == "commutation":
            pairs = [(i, j) for i in range(1, theta.n + 1) for j in range(i + 1, theta.n + 1)]
            r = max(commutation_residual(f, geom, i, j) for i, j in pairs)
        elif name == "inner_identity":
            r = max(inner_identity_residual(f, g, l, geom) for l in box)
        elif name == "fourier_fixed_point":
            r = fourier_fixed_point_residual(grid)
            tol = base_tol if explicit else FOURIER_TOLERANCE
        else:
            if act is None:
                raise SchemaError(f"test {name!r} needs a W")
            if fourier and not explicit:
                tol = FOURIER_TOLERANCE
            if name == "covariance":
                r = max(verify_covariance(f, act, l, geom, op) for l in box)
            elif name == "unitarity":
                r = verify_unitarity(f, g, act, geom, op)
            else:
                r = verify_inner_compat(f, g, act, box, geom, op)
        results[name] = {"residual": r, "tolerance": tol, "passed": r < tol}
    payload = {
        "name": doc.get("name", ""),
        "geometry": geom.to_json(),
        "metaplectic": kind,
        "grid": {"L": grid.L, "h": grid.h, "K": grid.K, "points": grid.M},
        "tests": results,
        "passed": all(v["passed"] for v in results.values()),
    }
    return payload


HANDLERS = {
    "pfaffian": cmd_pfaffian,
    "minors": cmd_minors,
    "find-t": cmd_find_t,
    "check-symplectic": cmd_check_symplectic,
    "order": cmd_order,
    "freeness": cmd_freeness,
    "extension-check": cmd_extension_check,
    "trace-range": cmd_trace_range,
    "orbifold-range": cmd_orbifold_range,
    "morita-lambda": cmd_morita_lambda,
    "gl2-orbit": cmd_gl2_orbit,
    "verify-module": cmd_verify_module,
}
assert set(HANDLERS) == set(INPUT_SCHEMAS)


# ---------------------------------------------------------------------------
# running and reporting


def resolve_flags(doc: dict, overrides: dict) -> dict:
    """Explicit flags beat values in the input, which beat the defaults."""
    flags = {}
    for key, default in DEFAULTS.items():
        if overrides.get(key) is not None:
            flags[key] = overrides[key]
        else:
            flags[key] = doc.get(key, default) if isinstance(doc, dict) else default
    return flags


def run(command: str, doc, overrides: dict = None) -> dict:
    """Validate ``doc`` and run ``command``; always returns a report dict."""
    overrides = overrides or {}
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    flags = resolve_flags(doc, overrides)
    report = {"command": command, "flags": flags, "version": __version__, "payload": {}}
    try:
        try:
            jsonschema.validate(doc, input_schema(command))
        except jsonschema.ValidationError as exc:
            path = "/".join(str(p) for p in exc.absolute_path)
            raise SchemaError(f"{path or '<root>'}: {exc.message}") from None
        inner = dict(flags, tolerance_explicit=overrides.get("tolerance") is not None)
        report["payload"] = HANDLERS[command](doc, inner)
        report["status"] = "ok"
        if command == "verify-module" and not report["payload"]["passed"]:
            report["status"] = "error"
            report["error"] = {"code": "TOLERANCE_EXCEEDED", "message": "a residual exceeded its tolerance"}
    except Unknown as exc:
        report["status"] = "unknown"
        report["payload"] = exc.payload
    except NCTorusError as exc:
        report["status"] = "error"
        report["error"] = {"code": exc.code, "message": str(exc)}
    return report


def emit_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _range_text(r: dict) -> str:
    return "Z<" + ", ".join(r["generators"]) + ">"


def emit_text(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]
    if "error" in report:
        lines.append(f"error {report['error']['code']}: {report['error']['message']}")
    p = report["payload"]
    cmd = report["command"]
    if cmd == "orbifold-range" and "lower" in p:
        lines.append(f"order: {p['order']}")
        lines.append(f"decided: {str(p['decided']).lower()}")
        lines.append("admitted: " + " / ".join(p["admitted"]))
        lines.append(f"lower: {_range_text(p['lower'])}")
        lines.append(f"upper: {_range_text(p['upper'])}")
    elif cmd == "trace-range" and "generators" in p:
        lines.append(f"range: {_range_text(p)}")
        lines.append(f"denominator: {p['denominator']}")
    elif cmd == "minors" and "minors" in p:
        lines.append(f"count: {p['count']}")
        lines.extend(f"pf[{m['I']}] = {m['text']}" for m in p["minors"])
    elif cmd == "verify-module" and "tests" in p:
        for name, res in p["tests"].items():
            mark = "pass" if res["passed"] else "FAIL"
            lines.append(f"{name}: residual {res['residual']:.3e} (tolerance {res['tolerance']:g}) {mark}")
    else:
        for key in sorted(p):
            val = p[key]
            if isinstance(val, (dict, list)):
                val = json.dumps(val, sort_keys=True)
            lines.append(f"{key}: {val}")
    if report["status"] == "unknown" and "bound" in p:
        lines.append("exhausted bound: " + ", ".join(f"{k}={v}" for k, v in sorted(p["bound"].items())))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nctorus", description="Exact computations for noncommutative tori.")
    parser.add_argument("--version", action="version", version=f"nctorus {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in HANDLERS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", required=True, help="input JSON file ('-' for stdin)")
        sp.add_argument("--output", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=["json", "text"], default="json")
        sp.add_argument("--t-max", dest="t_max", type=int)
        sp.add_argument("--coeff-bound", dest="coeff_bound", type=int)
        sp.add_argument("--max-order", dest="max_order", type=int)
        sp.add_argument("--tolerance", type=float)
        sp.add_argument("--timing", action="store_true", help="add wall-clock timing (breaks byte stability)")
    return parser


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        return json.loads(text)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: getattr(args, k) for k in DEFAULTS}
    start = time.perf_counter()
    try:
        doc = _load(args.input)
        report = run(args.command, doc, overrides)
    except ParseError as exc:
        report = {"command": args.command, "status": "error", "payload": {},
                  "flags": resolve_flags({}, overrides), "version": __version__,
                  "error": {"code": exc.code, "message": str(exc)}}
    if args.timing:
        report["timing"] = {"seconds": time.perf_counter() - start}
    text = emit_json(report) if args.format == "json" else emit_text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_CODES[report["status"]]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
