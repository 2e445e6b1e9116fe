"""Command-line front end: evaluate distances, hunt counterexamples, classify regions.

Subcommands
-----------
eval         evaluate one distance (rho, rho-pq, lambda, chordal, example,
             iota, rho-tilde, c-constant, cross-ratio, j, delta, rho-sup,
             rho-double-prime) at given points
check        run a verification (triangle, mi, convex, lambda-sharp);
             exit code 1 means a violation/witness was found
classify     label a (p, q) grid of power-mean weights
order        trace-ratio order check between two weights, or the
             sufficient/necessary condition report against S_alpha
domain-eval  evaluate domain properties (boundary distance, membership)

Weight functions use a small grammar, e.g. ``power:p=1,q=1``,
``scaled:p=-1,scale=0.5``, ``product:f=exp``, ``stolarsky:alpha=1``,
``const:c=2``, ``min``, ``max``.  Points are comma-separated reals; the token
``inf`` is the point at infinity and is accepted only by the chordal,
cross-ratio and delta commands.  Exit codes: 0 pass/ok, 1 violation found,
2 parse error, 3 domain or degeneracy error.  Standard output carries exactly
one machine-readable report (JSON by default, ``--format csv`` for tables);
diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import domains, verify
from .errors import (
    DegenerateWeightError,
    EvaluationError,
    InvalidDomainError,
    InvalidParameterError,
    OutsideDomainError,
    QuadratureError,
    RelMetricsError,
)
from .means import (
    ConstantWeight,
    MaxMean,
    MinMean,
    PowerMeanPower,
    ProductWeight,
    ScaledPowerMean,
    WeightFunction,
    stolarsky_weight,
)
from .metrics import (
    INFINITY,
    MetricKind,
    chordal,
    example_metric,
    is_infinite,
    lambda_apc,
    rho,
    rho_pq,
)

EXIT_OK = 0
EXIT_FOUND = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3


class CliParseError(Exception):
    """Bad command-line value (maps to exit code 2)."""


# ---------------------------------------------------------------------------
# Argument value parsers
# ---------------------------------------------------------------------------


def parse_extended(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    if t in ("-inf", "-infinity"):
        return -math.inf
    try:
        return float(t)
    except ValueError as exc:
        raise CliParseError(f"cannot parse number {text!r}") from exc


def parse_point(text: str):
    t = text.strip().lower()
    if t == "inf":
        return INFINITY
    try:
        return np.array([float(tok) for tok in text.replace(",", " ").split()])
    except ValueError as exc:
        raise CliParseError(f"cannot parse point {text!r}") from exc


def parse_weight(spec: str) -> WeightFunction:
    family, _, paramtext = spec.strip().partition(":")
    family = family.strip().lower()
    params = {}
    if paramtext:
        for item in paramtext.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise CliParseError(f"weight parameter {item!r} is not key=value")
            params[key.strip().lower()] = value.strip()
    try:
        if family == "power":
            return PowerMeanPower(parse_extended(params.pop("p")),
                                  parse_extended(params.pop("q", "1")))
        if family == "scaled":
            return ScaledPowerMean(parse_extended(params.pop("p")),
                                   parse_extended(params.pop("scale")))
        if family == "const":
            return ConstantWeight(parse_extended(params.pop("c")))
        if family == "min":
            return MinMean()
        if family == "max":
            return MaxMean()
        if family == "stolarsky":
            return stolarsky_weight(parse_extended(params.pop("alpha")))
        if family == "product":
            name = params.pop("f")
            if name not in verify.FF_SUITE:
                known = ", ".join(sorted(verify.FF_SUITE))
                raise CliParseError(f"unknown product factor {name!r}; known: {known}")
            return ProductWeight(verify.FF_SUITE[name], name)
    except KeyError as exc:
        raise CliParseError(f"weight family {family!r} is missing parameter {exc}") from exc
    except InvalidParameterError as exc:
        raise CliParseError(str(exc)) from exc
    raise CliParseError(
        f"unknown weight family {family!r}; use power, scaled, product, min, max, const, stolarsky"
    )


def parse_range(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise CliParseError(f"range {text!r} must look like lo:hi:step")
    lo, hi, step = (parse_extended(p) for p in parts)
    if not step > 0 or hi < lo:
        raise CliParseError(f"range {text!r} must have hi >= lo and step > 0")
    return lo, hi, step


def load_domain(text: str) -> domains.DomainSpec:
    """A --domain value: either a spec file path or an inline one-line spec."""
    inline = text.strip().lower()
    try:
        if inline == "halfplane":
            return domains.HalfPlane()
        if inline.startswith("ball:"):
            return domains.UnitBall(int(inline.split(":", 1)[1].replace("n=", "")))
        return domains.load_domain_spec(text)
    except (OSError, InvalidDomainError, ValueError) as exc:
        raise CliParseError(f"cannot load domain {text!r}: {exc}") from exc


def search_config(args) -> verify.SearchConfig:
    lo, hi = args.range
    return verify.SearchConfig(
        ranges=((lo, hi),) * 3,
        coarse_grid_points=args.grid,
        refine_iterations=args.refine,
        violation_tolerance=args.tolerance,
        seed=args.seed,
        random_triples=args.random_triples,
    )


def _range_pair(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise CliParseError(f"range {text!r} must look like lo:hi")
    lo, hi = (parse_extended(p) for p in parts)
    return lo, hi


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _point_repr(p) -> str:
    if is_infinite(p):
        return "inf"
    arr = np.atleast_1d(np.asarray(p, dtype=float))
    return " ".join(repr(float(v)) for v in arr)


def _flatten(record: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        elif isinstance(value, (list, tuple)):
            flat[name] = json.dumps(value)
        else:
            flat[name] = value
    return flat


def _jsonable(value):
    """Non-finite floats become strings so the output is strict JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value).replace("math.", "")
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def emit(record: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(_jsonable(record), indent=2, sort_keys=True)
    else:
        flat = _flatten(record)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(flat.keys())
        writer.writerow(["" if v is None else v for v in flat.values()])
        text = buf.getvalue().rstrip("\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def emit_region_table(table: verify.RegionTable, args) -> None:
    if args.format == "json":
        text = json.dumps(table.to_dict(), indent=2, sort_keys=True)
    else:
        text = region_table_to_csv(table)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


_REGION_COLUMNS = ["p", "q", "label", "in_band", "x", "z", "y", "lhs", "rhs", "margin"]


def region_table_to_csv(table: verify.RegionTable) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(table.to_dict()["config"], sort_keys=True) + "\n")
    buf.write("# step: " + repr(table.step) + "\n")
    writer = csv.writer(buf)
    writer.writerow(_REGION_COLUMNS)
    for cell in table.cells:
        w = cell.witness
        row = [repr(cell.p), repr(cell.q), cell.label, int(cell.in_band)]
        if w is None:
            row += [""] * 6
        else:
            row += [repr(float(w.x)), repr(float(w.z)), repr(float(w.y)),
                    repr(w.lhs), repr(w.rhs), repr(w.margin)]
        writer.writerow(row)
    return buf.getvalue().rstrip("\n")


def region_table_from_csv(text: str) -> verify.RegionTable:
    config = None
    step = None
    rows: List[List[str]] = []
    for line in text.splitlines():
        if line.startswith("# config: "):
            config = json.loads(line[len("# config: "):])
        elif line.startswith("# step: "):
            step = float(line[len("# step: "):])
        elif line.strip():
            rows.append(next(csv.reader([line])))
    if config is None or step is None or not rows:
        raise CliParseError("malformed region table CSV")
    header, data = rows[0], rows[1:]
    if header != _REGION_COLUMNS:
        raise CliParseError(f"unexpected region table columns {header}")
    cells = []
    for row in data:
        witness = None
        if row[4]:
            witness = verify.ViolationReport(
                x=float(row[4]), z=float(row[5]), y=float(row[6]),
                lhs=float(row[7]), rhs=float(row[8]), margin=float(row[9]),
            )
        cells.append(verify.RegionCell(
            p=float(row[0]), q=float(row[1]), label=row[2],
            in_band=bool(int(row[3])), witness=witness,
        ))
    return verify.RegionTable(
        cells=tuple(cells), step=step,
        config=verify.SearchConfig(
            ranges=tuple(tuple(r) for r in config["ranges"]),
            coarse_grid_points=int(config["coarse_grid_points"]),
            refine_iterations=int(config["refine_iterations"]),
            violation_tolerance=float(config["violation_tolerance"]),
            seed=int(config["seed"]),
            random_triples=int(config["random_triples"]),
        ),
    )


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def cmd_eval(args) -> int:
    x = parse_point(args.x) if args.x is not None else None
    y = parse_point(args.y) if args.y is not None else None
    metric = args.metric
    record = {"command": "eval", "metric": metric}
    if x is not None:
        record["x"] = _point_repr(x)
    if y is not None:
        record["y"] = _point_repr(y)

    if metric == "rho":
        M = parse_weight(args.weight)
        record["weight"] = M.label()
        record["value"] = rho(M, x, y)
    elif metric == "rho-pq":
        record.update(p=args.p, q=args.q)
        record["value"] = rho_pq(args.p, args.q, x, y)
    elif metric == "lambda":
        record.update(p=args.p, c=args.c)
        record["value"] = lambda_apc(args.p, args.c, x, y)
    elif metric == "chordal":
        record["value"] = chordal(x, y)
    elif metric == "example":
        record["p"] = args.p
        record["value"] = example_metric(args.p, x, y)
    elif metric == "iota":
        record["s"] = args.s
        record["value"] = domains.iota(args.s, x, y)
    elif metric == "rho-tilde":
        record["s"] = args.s
        record["value"] = domains.rho_tilde_halfplane(args.s, x, y)
    elif metric == "c-constant":
        record["s"] = args.s
        record["value"] = domains.c_constant(args.s)
    elif metric == "cross-ratio":
        pts = [parse_point(t) for t in (args.pa, args.pb, args.pc, args.pd)]
        record.update({k: _point_repr(p) for k, p in zip(("a", "b", "c", "d"), pts)})
        record["value"] = domains.cross_ratio(*pts)
    elif metric == "j":
        G = load_domain(args.domain)
        record["domain"] = G.label()
        record["value"] = domains.j_metric(G, x, y)
    elif metric == "delta":
        G = load_domain(args.domain)
        record.update(domain=G.label(), p=args.p)
        record["sup_grid"] = {"pair_grid": domains.PAIR_GRID, "refine_tol": domains.REFINE_TOL}
        record["value"] = domains.delta_p(G, args.p, x, y)
    elif metric == "rho-sup":
        G = load_domain(args.domain)
        M = parse_weight(args.weight)
        record.update(domain=G.label(), weight=M.label())
        record["sup_grid"] = {"samples": domains.SUP_SAMPLES, "refine_tol": domains.REFINE_TOL}
        record["value"] = domains.rho_sup(M, G, x, y)
    elif metric == "rho-double-prime":
        G = load_domain(args.domain)
        M = parse_weight(args.weight)
        record.update(domain=G.label(), weight=M.label())
        record["value"] = domains.rho_double_prime(M, G, x, y)
    else:  # pragma: no cover - argparse restricts choices
        raise CliParseError(f"unknown metric {metric!r}")
    emit(record, args)
    return EXIT_OK


_TRANSFORMS = {
    "raw": MetricKind.RAW,
    "log1p": MetricKind.LOG1P,
    "arcsinh": MetricKind.ARCSINH,
    "arccosh1p": MetricKind.ARCCOSH1P,
}


def cmd_check(args) -> int:
    cfg = search_config(args)
    record = {"command": "check", "what": args.what, "config": cfg.to_dict()}
    found = False
    if args.what == "triangle":
        M = parse_weight(args.weight)
        record["weight"] = M.label()
        record["transform"] = args.transform
        kind = _TRANSFORMS[args.transform]
        if kind is MetricKind.RAW:
            report = verify.triangle_search_1d(M, cfg)
        else:
            report = verify.triangle_search_transformed(M, kind, cfg)
        record["violation"] = report.to_dict() if report else None
        found = report is not None
    elif args.what == "mi":
        M = parse_weight(args.weight)
        record["weight"] = M.label()
        witness = verify.mi_check(M, cfg)
        record["witness"] = vars(witness) if witness else None
        found = witness is not None
    elif args.what == "convex":
        if args.f not in verify.FF_SUITE:
            raise CliParseError(f"unknown function {args.f!r}; known: {', '.join(sorted(verify.FF_SUITE))}")
        record["f"] = args.f
        witness = verify.convexity_check(verify.FF_SUITE[args.f], cfg)
        record["witness"] = vars(witness) if witness else None
        found = witness is not None
    elif args.what == "lambda-sharp":
        record.update(p=args.p, c=args.c)
        report = verify.lambda_sharpness(args.p, args.c, cfg)
        record["violation"] = report.to_dict() if report else None
        found = report is not None
    record["found"] = found
    emit(record, args)
    return EXIT_FOUND if found else EXIT_OK


def cmd_classify(args) -> int:
    cfg = search_config(args)
    p_lo, p_hi, p_step = args.p
    q_lo, q_hi, q_step = args.q
    if not math.isclose(p_step, q_step):
        raise CliParseError("p and q must use the same step")
    table = verify.classify_pq_region((p_lo, p_hi), (q_lo, q_hi), p_step, cfg)
    emit_region_table(table, args)
    return EXIT_OK


def cmd_order(args) -> int:
    cfg = search_config(args)
    M = parse_weight(args.m)
    record = {"command": "order", "m": M.label(), "config": cfg.to_dict()}
    if args.plem_alpha is not None:
        report = verify.plem_conditions(M, args.plem_alpha, cfg)
        record.update(alpha=args.plem_alpha, plem=report.to_dict())
        emit(record, args)
        return EXIT_OK if report.sufficient else EXIT_FOUND
    if args.n is None:
        raise CliParseError("order requires --n WEIGHT or --plem-alpha ALPHA")
    N = parse_weight(args.n)
    record["n"] = N.label()
    report = verify.strong_order_check(M, N, cfg)
    record["order"] = report.to_dict()
    emit(record, args)
    return EXIT_OK if report.verdict == "increasing" else EXIT_FOUND


def cmd_domain_eval(args) -> int:
    G = load_domain(args.domain)
    x = parse_point(args.x)
    record = {"command": "domain-eval", "domain": G.label(), "op": args.op,
              "x": _point_repr(x)}
    if args.op == "boundary-distance":
        record["value"] = domains.boundary_distance(G, x)
    else:
        record["value"] = bool(G.contains(x))
    emit(record, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def _add_common(sub) -> None:
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--out", default=None, help="write the report to a file instead of stdout")


def _add_search(sub) -> None:
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--grid", type=int, default=64, help="coarse grid points per axis")
    sub.add_argument("--refine", type=int, default=60, help="golden-section iterations")
    sub.add_argument("--tolerance", type=float, default=1e-9, help="relative violation tolerance")
    sub.add_argument("--random-triples", type=int, default=100_000)
    sub.add_argument("--range", type=_range_pair, default=(1e-6, 1e6),
                     metavar="LO:HI", help="magnitude range per variable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relmetrics",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_eval = subs.add_parser("eval", help="evaluate one distance at given points")
    p_eval.add_argument("metric", choices=(
        "rho", "rho-pq", "lambda", "chordal", "example", "iota", "rho-tilde",
        "c-constant", "cross-ratio", "j", "delta", "rho-sup", "rho-double-prime"))
    p_eval.add_argument("--x", help="point, e.g. '1,2' or 'inf'")
    p_eval.add_argument("--y")
    p_eval.add_argument("--weight", help="weight spec, e.g. power:p=1,q=1")
    p_eval.add_argument("--p", type=parse_extended)
    p_eval.add_argument("--q", type=parse_extended)
    p_eval.add_argument("--c", type=parse_extended)
    p_eval.add_argument("--s", type=parse_extended)
    p_eval.add_argument("--domain", help="domain spec file or 'halfplane' / 'ball:N'")
    p_eval.add_argument("--pa")
    p_eval.add_argument("--pb")
    p_eval.add_argument("--pc")
    p_eval.add_argument("--pd")
    _add_common(p_eval)
    p_eval.set_defaults(fn=cmd_eval)

    p_check = subs.add_parser("check", help="run a verification; exit 1 if a witness is found")
    p_check.add_argument("what", choices=("triangle", "mi", "convex", "lambda-sharp"))
    p_check.add_argument("--weight")
    p_check.add_argument("--f", help="named product factor for the convexity check")
    p_check.add_argument("--p", type=parse_extended)
    p_check.add_argument("--c", type=parse_extended)
    p_check.add_argument("--transform", choices=tuple(_TRANSFORMS), default="raw")
    _add_search(p_check)
    _add_common(p_check)
    p_check.set_defaults(fn=cmd_check)

    p_classify = subs.add_parser("classify", help="label a (p, q) grid by triangle search")
    p_classify.add_argument("--p", type=parse_range, required=True, metavar="LO:HI:STEP")
    p_classify.add_argument("--q", type=parse_range, required=True, metavar="LO:HI:STEP")
    _add_search(p_classify)
    _add_common(p_classify)
    p_classify.set_defaults(fn=cmd_classify)

    p_order = subs.add_parser("order", help="trace-ratio order check / plem report")
    p_order.add_argument("--m", required=True)
    p_order.add_argument("--n")
    p_order.add_argument("--plem-alpha", type=parse_extended, default=None)
    _add_search(p_order)
    _add_common(p_order)
    p_order.set_defaults(fn=cmd_order)

    p_dom = subs.add_parser("domain-eval", help="evaluate domain properties at a point")
    p_dom.add_argument("--domain", required=True)
    p_dom.add_argument("--x", required=True)
    p_dom.add_argument("--op", choices=("boundary-distance", "contains"),
                       default="boundary-distance")
    _add_common(p_dom)
    p_dom.set_defaults(fn=cmd_domain_eval)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except CliParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (OutsideDomainError, DegenerateWeightError, InvalidDomainError,
            EvaluationError, QuadratureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InvalidParameterError, RelMetricsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TypeError as exc:
        print(f"error: missing or mismatched arguments: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
