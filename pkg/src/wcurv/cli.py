"""Command-line entry point: metric-file ingestion, built-in catalog,
grid construction, and report serialization.

Input files are TOML documents carrying expression strings; the exact
schema is documented in the README.  Reports are emitted as JSON (the
stable machine interface) or as a human-readable text summary.

Exit codes: 0 on success, 1 for parse/validation errors, 2 for a
runtime domain error at a non-excluded evaluation point.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from typing import Any, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import expr as ex
from .catalog import CATALOG, BuiltMetric, CatalogEntry, build, make_grid
from .classify import classify, verify_claims
from .kernels import BACKEND
from .metric import DegenerateMetricError, DIM

__all__ = ["main", "entry_from_file", "build_report"]

SCHEMA_VERSION = "1"


class CliError(Exception):
    """Input problem reportable as a diagnostic with exit code 1."""


# ---------------------------------------------------------------------------
# argument helpers

def _parse_param(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise CliError(f"--param expects name=value, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise CliError(f"--param {name}: {value!r} is not a number") from None


def _parse_grid(text: str) -> tuple[str, tuple[float, float, int]]:
    name, sep, spec = text.partition("=")
    parts = spec.split(":")
    if not sep or not name or len(parts) != 3:
        raise CliError(f"--grid expects coord=min:max:count, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise CliError(f"--grid {name}: bad range {spec!r}") from None
    if n < 1:
        raise CliError(f"--grid {name}: count must be >= 1")
    return name, (lo, hi, n)


# ---------------------------------------------------------------------------
# metric-file ingestion

def _expr_rows(raw: Sequence[Sequence[str]], what: str) -> tuple[tuple[str, ...], ...]:
    """Normalize a 4x4 (or lower-triangle) array of strings to full 4x4."""
    if len(raw) != DIM:
        raise CliError(f"{what} must have {DIM} rows, got {len(raw)}")
    rows = [list(r) for r in raw]
    if all(len(rows[i]) == i + 1 for i in range(DIM)):
        full = [["0"] * DIM for _ in range(DIM)]
        for i in range(DIM):
            for j in range(i + 1):
                full[i][j] = full[j][i] = rows[i][j]
        rows = full
    for i, row in enumerate(rows):
        if len(row) != DIM:
            raise CliError(f"{what} row {i} must have {DIM} entries "
                           f"(or form a lower triangle)")
        if not all(isinstance(s, str) for s in row):
            raise CliError(f"{what} entries must be expression strings")
    return tuple(tuple(row) for row in rows)


def _vector(raw: Any, what: str) -> tuple[str, str, str, str]:
    if not isinstance(raw, list) or len(raw) != DIM \
            or not all(isinstance(s, str) for s in raw):
        raise CliError(f"{what} must be a list of {DIM} expression strings")
    return tuple(raw)


def _scalar_expr(raw: Any, what: str) -> str:
    if isinstance(raw, str):
        return raw
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return repr(float(raw))
    raise CliError(f"{what} must be an expression string or a number")


def entry_from_file(path: str) -> CatalogEntry:
    """Read a TOML metric file and normalize it to a CatalogEntry."""
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}") from None
    except tomllib.TOMLDecodeError as e:
        raise CliError(f"{path}: TOML syntax error: {e}") from None

    try:
        coords = doc["coordinates"]
        raw_metric = doc["metric"]
    except KeyError as e:
        raise CliError(f"{path}: missing required key {e}") from None
    if not isinstance(coords, list) or len(coords) != DIM:
        raise CliError(f"{path}: coordinates must list {DIM} names")

    params = {str(k): float(v) for k, v in doc.get("parameters", {}).items()}
    consts = doc.get("constants", {})
    ev = doc.get("evaluation", {})
    ranges = {str(k): (float(v["min"]), float(v["max"]), int(v["count"]))
              for k, v in ev.get("ranges", {}).items()}
    fixed = {str(k): float(v) for k, v in ev.get("fixed", {}).items()}

    faraday = doc.get("faraday")
    if faraday is not None:
        faraday = _expr_rows(faraday, "faraday")

    return CatalogEntry(
        name=str(doc.get("name", path)),
        description=str(doc.get("description", "user-supplied metric")),
        coordinates=tuple(coords),
        parameters=params,
        metric=_expr_rows(raw_metric, "metric"),
        lambda_expr=_scalar_expr(consts.get("lambda", "0"), "constants.lambda"),
        kappa=float(consts.get("kappa", 1.0)),
        fluid=(_vector(doc["fluid_velocity"], "fluid_velocity")
               if "fluid_velocity" in doc else None),
        mu=_scalar_expr(doc["mu"], "mu") if "mu" in doc else None,
        p=_scalar_expr(doc["p"], "p") if "p" in doc else None,
        xi=_vector(doc["xi"], "xi") if "xi" in doc else None,
        faraday=faraday,
        grid_ranges=ranges,
        grid_fixed=fixed,
        exclusions=tuple(str(s) for s in ev.get("exclusions", ())),
    )


def _explicit_points(path_doc_points: Any, n_coords: int) -> list[tuple[float, ...]]:
    pts = []
    for i, row in enumerate(path_doc_points):
        if len(row) != n_coords:
            raise CliError(f"evaluation.points[{i}] must have {n_coords} values")
        pts.append(tuple(float(v) for v in row))
    return pts


def _normalize_expr(text: str, allowed: set[str], what: str) -> str:
    try:
        node = ex.parse(text)
    except ex.ParseError as e:
        raise CliError(f"{what}: {e}") from None
    loose = ex.free_symbols(node) - allowed
    if loose:
        raise CliError(f"{what}: unknown symbol(s) {sorted(loose)}")
    return ex.to_str(node)


def _echo_input(bm: BuiltMetric, grid_ranges, grid_fixed) -> dict:
    """Normalized input echo: every expression re-printed from its parse
    tree, so the echo re-runs to the same report."""
    entry = bm.entry
    allowed = set(entry.coordinates) | set(bm.parameters)

    def norm(text, what):
        return _normalize_expr(text, allowed, what)

    echo: dict[str, Any] = {
        "name": entry.name,
        "coordinates": list(entry.coordinates),
        "parameters": {k: bm.parameters[k] for k in sorted(bm.parameters)},
        "signature": bm.spec.signature,
        "metric": [[norm(s, f"metric[{i}][{j}]") for j, s in enumerate(row)]
                   for i, row in enumerate(entry.metric)],
        "constants": {
            "lambda": _normalize_expr(entry.lambda_expr, set(bm.parameters),
                                      "constants.lambda"),
            "kappa": entry.kappa,
        },
    }
    if entry.fluid:
        echo["fluid_velocity"] = [norm(s, "fluid_velocity") for s in entry.fluid]
    if entry.mu is not None:
        echo["mu"] = norm(entry.mu, "mu")
    if entry.p is not None:
        echo["p"] = norm(entry.p, "p")
    if entry.xi:
        echo["xi"] = [norm(s, "xi") for s in entry.xi]
    if entry.faraday:
        echo["faraday"] = [[norm(s, "faraday") for s in row]
                           for row in entry.faraday]
    echo["evaluation"] = {
        "ranges": {k: {"min": v[0], "max": v[1], "count": v[2]}
                   for k, v in sorted(grid_ranges.items())},
        "fixed": {k: float(v) for k, v in sorted(grid_fixed.items())},
        "exclusions": [norm(s, "exclusion") for s in entry.exclusions],
    }
    return echo


# ---------------------------------------------------------------------------
# report assembly

def _jsonable(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, str, int)) or obj is None:
        return obj
    if isinstance(obj, float) or hasattr(obj, "item"):
        value = float(obj)
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r} in report")
        return value
    return str(obj)


def build_report(bm: BuiltMetric, grid: Sequence[tuple[float, ...]],
                 grid_ranges, grid_fixed, tol: float) -> dict:
    report, records = classify(bm.spec, grid, bm.inputs, tol=tol)
    claims = verify_claims(report, records)
    return {
        "schema_version": SCHEMA_VERSION,
        "backend": BACKEND,
        "tolerance": tol,
        "input": _echo_input(bm, grid_ranges, grid_fixed),
        "grid": _jsonable(list(grid)),
        "points": [_jsonable(r) for r in records],
        "flags": [_jsonable(f) for f in report.flags],
        "claims": [_jsonable(c) for c in claims],
    }


def _text_summary(report: dict, file) -> None:
    echo = report["input"]
    print(f"metric: {echo['name']}  (backend: {report['backend']}, "
          f"tol: {report['tolerance']:g})", file=file)
    print(f"grid: {len(report['grid'])} points", file=file)
    print("flags:", file=file)
    for flag in report["flags"]:
        worst = flag["worst_residual"]
        detail = "" if worst is None else f"  worst {worst:.3e} at {flag['worst_point']}"
        print(f"  {flag['name']:<28} {flag['verdict']}{detail}", file=file)
    print("claims:", file=file)
    for claim in report["claims"]:
        line = f"  {claim['claim']:<48} {claim['status']}"
        if claim["status"] == "violated" and claim["counterexample"]:
            line += f"  counterexample at {claim['counterexample']}"
        print(line, file=file)


def _locate_failure(bm: BuiltMetric, grid, tol: float) -> str:
    """Re-run point by point to name where a domain error occurred."""
    from .classify import evaluate_point
    for point in grid:
        try:
            evaluate_point(bm.spec, point, bm.inputs)
        except (ex.EvalDomainError, DegenerateMetricError, ValueError,
                ZeroDivisionError, OverflowError) as e:
            return f"at point {tuple(point)}: {e}"
    return "at an undetermined point"


# ---------------------------------------------------------------------------
# subcommands

def _cmd_analyze(args: argparse.Namespace) -> int:
    if args.catalog:
        if args.catalog not in CATALOG:
            raise CliError(f"unknown catalog metric {args.catalog!r}; "
                           f"choices: {', '.join(sorted(CATALOG))}")
        entry = CATALOG[args.catalog]
    elif args.file:
        entry = entry_from_file(args.file)
    else:
        raise CliError("give a metric file or --catalog NAME")

    overrides = dict(_parse_param(s) for s in args.param or ())
    try:
        bm = build(entry, overrides)
    except (KeyError, ValueError, ex.ExprError) as e:
        raise CliError(str(e)) from None

    grid_ranges = dict(entry.grid_ranges)
    grid_fixed = dict(entry.grid_fixed)
    for spec_text in args.grid or ():
        name, rng = _parse_grid(spec_text)
        if name not in bm.spec.chart.names:
            raise CliError(f"--grid {name}: not a coordinate of {entry.name}")
        grid_ranges[name] = rng
        grid_fixed.pop(name, None)
    grid = make_grid(bm, grid_ranges, grid_fixed)
    if not grid:
        raise CliError("evaluation grid is empty (all points excluded?)")

    problems = bm.spec.validate(sample_points=grid).problems
    runtime = [m for m in problems if m.startswith("evaluation failed at")]
    structural = [m for m in problems if m not in runtime]
    if structural:
        for msg in structural:
            print(f"error: {msg}", file=sys.stderr)
        return 1
    if runtime:
        print(f"error: domain failure {runtime[0].removeprefix('evaluation failed ')}",
              file=sys.stderr)
        return 2

    started = time.monotonic()
    try:
        report = build_report(bm, grid, grid_ranges, grid_fixed, args.tol)
    except (ex.EvalDomainError, DegenerateMetricError, ValueError,
            ZeroDivisionError, OverflowError) as e:
        where = _locate_failure(bm, grid, args.tol)
        print(f"error: domain failure {where} ({e})", file=sys.stderr)
        return 2
    report["wall_clock_seconds"] = time.monotonic() - started

    if args.format == "json":
        rendered = json.dumps(report, indent=2) + "\n"
    else:
        import io
        buf = io.StringIO()
        _text_summary(report, buf)
        rendered = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(rendered)
        _text_summary(report, sys.stderr)
    else:
        sys.stdout.write(rendered)
    return 0


def _cmd_catalog(_args: argparse.Namespace) -> int:
    for name in sorted(CATALOG):
        entry = CATALOG[name]
        params = ", ".join(f"{k}={v:g}" for k, v in entry.parameters.items())
        suffix = f"  [{params}]" if params else ""
        print(f"{name:<22} {entry.description}{suffix}")
    return 0


def _cmd_check_expr(args: argparse.Namespace) -> int:
    try:
        node = ex.parse(args.expression)
    except ex.ParseError as e:
        raise CliError(str(e)) from None
    deriv = ex.simplify(ex.differentiate(node, args.wrt))
    print(f"expression: {ex.to_str(ex.simplify(node))}")
    print(f"d/d{args.wrt}:     {ex.to_str(deriv)}")
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wcurv",
        description="Curvature, W-tensor, fluid, and symmetry analysis "
                    "of 4D Lorentzian metrics.")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="run the full pipeline")
    analyze.add_argument("file", nargs="?", help="TOML metric file")
    analyze.add_argument("--catalog", help="built-in metric name")
    analyze.add_argument("--param", action="append", metavar="NAME=VALUE",
                         help="override a metric parameter")
    analyze.add_argument("--grid", action="append", metavar="COORD=MIN:MAX:COUNT",
                         help="override the evaluation range of a coordinate")
    analyze.add_argument("--tol", type=float, default=1e-9,
                         help="relative residual tolerance (default 1e-9)")
    analyze.add_argument("--format", choices=("json", "text"), default="json")
    analyze.add_argument("--out", help="write the report to a file")
    analyze.set_defaults(func=_cmd_analyze)

    cat = sub.add_parser("catalog", help="list built-in metrics")
    cat.set_defaults(func=_cmd_catalog)

    check = sub.add_parser("check-expr", help="parse and differentiate an expression")
    check.add_argument("expression")
    check.add_argument("--wrt", required=True, help="differentiation variable")
    check.set_defaults(func=_cmd_check_expr)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
