"""Command-line front end: ``matconvex <command> [options]``.

Every command prints one JSON report on standard output and a short
human-readable summary on standard error. Exit codes: 0 pass, 1 definitive
fail (the report carries the certificate), 2 usage error, 3 indeterminate.

Examples
--------
    matconvex classify --function recip --interval "(0.1,10)" --order 3 --property convex
    matconvex gap --order 2 --degree 4 --interval "(-1,1)" --kind concave
    matconvex oracle --function "poly:0,0,0,1" --interval "(0.1,3)" --order 2
    matconvex verify --suite identities --seed 1
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import __version__
from .classify import NODE_STRATEGIES, HypothesisError, SamplerConfig, classify
from .ddouble import DD
from .divdiff import PRECISIONS, MAX_QUADRATURE_ORDER, dd_table, divided_difference, hermite_simplex_quadrature
from .funcmodel import DomainError, parse_function, parse_interval
from .gaps import KINDS as GAP_KINDS
from .gaps import build_gap_polynomial, build_halfline_gap, certify
from .oracle import WITNESS_THRESHOLD, witness_search
from .specmat import (
    confluent_factorization_check,
    derivative_matrix_Kn,
    derivative_matrix_Mn,
    kraus_matrix,
    pick_matrix,
)
from .transforms import (
    connection_check,
    difference_quotient,
    roundtrip,
    theorem_roundtrip_audit,
    transform_S,
    transform_T,
)
from .verify import SUITES, criterion_summary, suite_checks

SCHEMA = "matconvex-report/1"
SEED_ENV = "MATCONVEX_SEED"
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INDETERMINATE = 0, 1, 2, 3
EXIT_CODES = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "indeterminate": EXIT_INDETERMINATE}
FACTORIZATION_LIMIT = 1e-8
ROUNDTRIP_LIMIT = 1e-8
CONNECTION_LIMIT = 1e-9
ORACLE_PROPERTIES = {"convex": "convexity", "concave": "concavity", "monotone": "monotonicity",
                     "convexity": "convexity", "concavity": "concavity", "monotonicity": "monotonicity"}


class UsageError(Exception):
    """Bad command-line input; maps to exit code 2."""


@dataclass
class RunConfig:
    command: str
    function: Optional[str]
    interval: Optional[str]
    order: Optional[int]
    trials: int
    seed: int
    tolerance: float
    output: Optional[str]
    options: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# JSON plumbing
# ---------------------------------------------------------------------------

def jsonable(obj):
    """Convert reports to plain JSON types; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, DD):
        obj = float(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return str(obj)


def render(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"


def _floats(text: str, what: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse {what} {text!r}; expected comma-separated numbers") from None
    if not values:
        raise UsageError(f"{what} must not be empty")
    return values


def _model(args):
    if args.function is None:
        raise UsageError("--function is required")
    try:
        interval = parse_interval(args.interval) if args.interval else None
        return parse_function(args.function, interval), interval
    except (ValueError, DomainError) as exc:
        raise UsageError(str(exc)) from None


def _interval(args):
    if not args.interval:
        raise UsageError("--interval is required")
    try:
        return parse_interval(args.interval)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _sampler(args) -> SamplerConfig:
    try:
        return SamplerConfig(trials=args.trials, seed=args.seed, tolerance=args.tolerance, jobs=args.jobs,
                             node_strategy=getattr(args, "node_strategy", "uniform"),
                             min_gap=getattr(args, "min_gap", 1e-4), strict=getattr(args, "strict", False))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# Commands: each returns (status, result, summary line)
# ---------------------------------------------------------------------------

def cmd_divdiff(args):
    f, _ = _model(args)
    nodes = _floats(args.nodes, "nodes")
    value = divided_difference(f, nodes, args.precision)
    result = {"nodes": nodes, "value": value, "table": dd_table(f, nodes, args.precision).to_dict()}
    if args.quadrature:
        if len(nodes) - 1 > MAX_QUADRATURE_ORDER:
            raise UsageError(f"quadrature supports at most {MAX_QUADRATURE_ORDER + 1} nodes")
        q = hermite_simplex_quadrature(f, nodes)
        result["quadrature"] = q
        result["quadrature_difference"] = abs(q - value)
    return "pass", result, f"[{', '.join(f'{x:g}' for x in nodes)}]_f = {value:.17g}"


def cmd_matrices(args):
    f, _ = _model(args)
    tol = args.tolerance
    if args.kind in ("K", "M"):
        if args.point is None or args.order is None:
            raise UsageError("--point and --order are required for K and M")
        build = derivative_matrix_Kn if args.kind == "K" else derivative_matrix_Mn
        rep = build(f, args.point, args.order, tol, args.strict)
    else:
        if args.nodes is None:
            raise UsageError("--nodes is required for pick, kraus and factorization")
        nodes = _floats(args.nodes, "nodes")
        s = nodes[0] if args.s is None else args.s
        if args.kind == "factorization":
            rows = confluent_factorization_check(f, nodes, s)
            worst = max(r.residual for r in rows)
            status = "pass" if worst <= FACTORIZATION_LIMIT else "fail"
            result = {"rows": [r.to_dict() for r in rows], "worst_residual": worst, "limit": FACTORIZATION_LIMIT}
            return status, result, f"factorization worst residual {worst:.3e}"
        rep = pick_matrix(f, nodes, tol, args.strict) if args.kind == "pick" else kraus_matrix(f, nodes, s, tol, args.strict)
    status = {"indefinite": "fail", "indeterminate": "indeterminate"}.get(rep.verdict, "pass")
    return status, rep.to_dict(), f"{rep.kind}: {rep.verdict}, lambda_min {rep.min_eigenvalue:.3e}"


def cmd_classify(args):
    f, _ = _model(args)
    interval = _interval(args)
    if args.order is None:
        raise UsageError("--order is required")
    rep = classify(f, interval, args.order, args.property, _sampler(args))
    return rep.verdict, rep.to_dict(), f"{args.property} order {args.order}: {rep.label}"


def cmd_gap(args):
    if args.order is None:
        raise UsageError("--order is required")
    degree = args.degree if args.degree is not None else 2 * args.order
    try:
        if args.halfline:
            g, gap = build_halfline_gap(args.order, args.tolerance)
            result = {"gap": gap.to_dict(), "halfline_model": g.to_spec(), "domain": g.domain.to_spec()}
        else:
            interval = _interval(args) if args.interval else None
            gap = build_gap_polynomial(args.order, degree, interval, args.kind, args.tolerance)
            result = {"gap": gap.to_dict()}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = certify(gap, tolerance=args.tolerance)
    result["coefficients"] = [str(b) for b in gap.base_coefficients[1:]]
    result["certified"] = ok
    summary = f"gap n={gap.target_order} m={gap.degree} {gap.kind} on {gap.certified_interval}: alpha {gap.alpha:.6g}"
    return ("pass" if ok else "fail"), result, summary


def cmd_transform(args):
    f, _ = _model(args)
    if args.check == "audit":
        interval = _interval(args)
        if args.order is None:
            raise UsageError("--order is required for the audit")
        a = theorem_roundtrip_audit(f, interval, args.order, _sampler(args), args.anchors)
        summary = f"f in K_{args.order + 1}: {a.f_in_K_next}; S in P_{args.order}: {a.S_in_P_n_for_all_t0}"
        return ("pass" if a.consistent else "fail"), a.to_dict(), summary
    if args.anchor is None:
        raise UsageError("--anchor is required")
    if args.check == "roundtrip":
        if args.kind == "d":
            raise UsageError("round trips exist for T and S only")
        r = roundtrip(f, args.anchor, args.kind)
        status = "pass" if r.max_relative_error <= ROUNDTRIP_LIMIT else "fail"
        return status, dict(r.to_dict(), limit=ROUNDTRIP_LIMIT), f"{args.kind} round trip {r.max_relative_error:.3e}"
    if args.check == "connection":
        err = connection_check(f, args.anchor)
        status = "pass" if err <= CONNECTION_LIMIT else "fail"
        return status, {"max_abs_difference": err, "limit": CONNECTION_LIMIT}, f"S vs T(d) {err:.3e}"
    build = {"T": transform_T, "S": transform_S, "d": difference_quotient}[args.kind]
    model = build(f, args.anchor)
    points = _floats(args.points, "points") if args.points else [float(t) for t in f.domain.grid(args.grid)]
    values = [model(t) for t in points]
    result = {"model": model.to_spec(), "points": points, "values": values}
    return "pass", result, f"{model.to_spec()} at {len(points)} points"


def cmd_oracle(args):
    f, _ = _model(args)
    interval = _interval(args)
    if args.order is None:
        raise UsageError("--order (matrix dimension) is required")
    prop = ORACLE_PROPERTIES[args.property]
    out = witness_search(f, interval, args.order, prop, args.trials, args.seed, args.threshold, args.jobs)
    status = "fail" if out.found else "pass"
    if out.found:
        summary = f"witness at trial {out.witness.seed_trace[1]}: deficit {out.witness.deficit_min_eigenvalue:.3e}"
    else:
        summary = f"no witness in {out.trials_run} trials (worst deficit {out.worst_deficit:.3e})"
    return status, out.to_dict(), summary


def cmd_verify(args):
    checks = suite_checks(args.suite, args.seed, args.jobs)
    for c in checks:
        print(c.line(), file=sys.stderr)
    per = criterion_summary(checks)
    ok = all(per.values())
    result = {"suite": args.suite, "checks": [c.to_dict() for c in checks],
              "criteria": {str(k): ("pass" if v else "fail") for k, v in per.items()}}
    return ("pass" if ok else "fail"), result, f"suite {args.suite}: {sum(c.passed for c in checks)}/{len(checks)} checks pass"


COMMANDS = {
    "divdiff": cmd_divdiff, "matrices": cmd_matrices, "classify": cmd_classify, "gap": cmd_gap,
    "transform": cmd_transform, "oracle": cmd_oracle, "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def build_parser(default_seed: int = 0) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=default_seed,
                        help=f"base seed (default {default_seed}, overridable via {SEED_ENV})")
    common.add_argument("--trials", type=int, default=200, help="sampled trials (default 200)")
    common.add_argument("--tolerance", type=float, default=1e-9, help="relative tolerance (default 1e-9)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--output", help="also write the JSON report to this path")
    common.add_argument("--quiet", action="store_true", help="no summary on standard error")

    fn = argparse.ArgumentParser(add_help=False)
    fn.add_argument("--function", help='function spec, e.g. "recip", "poly:0,0,1", "affine(-1,0)@log"')
    fn.add_argument("--interval", help='interval spec, e.g. "(0.1,10)" or "[0,inf)"')

    parser = argparse.ArgumentParser(prog="matconvex", description="Matrix convexity and monotonicity toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("divdiff", parents=[common, fn], help="divided difference at repeated or distinct nodes")
    p.add_argument("--nodes", required=True, help="comma-separated nodes; repeats are confluent")
    p.add_argument("--precision", choices=PRECISIONS, default=None)
    p.add_argument("--quadrature", action="store_true", help="cross-check by simplex quadrature")

    p = sub.add_parser("matrices", parents=[common, fn], help="Pick, Kraus, K_n, M_n or the factorization check")
    p.add_argument("--kind", choices=("pick", "kraus", "K", "M", "factorization"), default="pick")
    p.add_argument("--nodes")
    p.add_argument("--s", type=float, help="Kraus anchor (default: first node)")
    p.add_argument("--point", type=float, help="evaluation point for K and M")
    p.add_argument("--order", type=int)
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("classify", parents=[common, fn], help="sampled order-n criterion")
    p.add_argument("--order", type=int)
    p.add_argument("--property", choices=("convex", "concave", "monotone"), default="convex")
    p.add_argument("--strategy", "--node-strategy", dest="node_strategy", choices=NODE_STRATEGIES, default="uniform")
    p.add_argument("--min-gap", type=float, default=1e-4)
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("gap", parents=[common], help="build and certify a gap polynomial")
    p.add_argument("--order", type=int)
    p.add_argument("--degree", type=int, help="polynomial degree (default 2n)")
    p.add_argument("--interval", help="target interval (default: the natural window)")
    p.add_argument("--kind", choices=GAP_KINDS, default="concave")
    p.add_argument("--halfline", action="store_true", help="transport to [0,inf) via t/(1+t)")

    p = sub.add_parser("transform", parents=[common, fn], help="T, S and difference-quotient transforms")
    p.add_argument("--kind", choices=("T", "S", "d"), default="S")
    p.add_argument("--anchor", type=float)
    p.add_argument("--eval-at", "--points", dest="points", help="comma-separated evaluation points")
    p.add_argument("--grid", type=int, default=8, help="interior grid points when --eval-at is absent (default 8)")
    p.add_argument("--check", choices=("values", "roundtrip", "connection", "audit"), default="values")
    p.add_argument("--roundtrip", dest="check", action="store_const", const="roundtrip", help="same as --check roundtrip")
    p.add_argument("--order", type=int, help="order n for the audit")
    p.add_argument("--anchors", type=int, default=50, help="anchors for the audit (default 50)")

    p = sub.add_parser("oracle", parents=[common, fn], help="witness search on Hermitian pairs")
    p.add_argument("--order", type=int, help="matrix dimension")
    p.add_argument("--property", choices=sorted(ORACLE_PROPERTIES), default="convexity")
    p.add_argument("--threshold", type=float, default=WITNESS_THRESHOLD)

    p = sub.add_parser("verify", parents=[common], help="run an acceptance suite")
    p.add_argument("--suite", choices=SUITES, default="all")
    return parser


def _config(args) -> RunConfig:
    shared = {"command", "function", "interval", "order", "trials", "seed", "tolerance", "output", "quiet"}
    options = {k: v for k, v in sorted(vars(args).items()) if k not in shared}
    return RunConfig(args.command, getattr(args, "function", None), getattr(args, "interval", None),
                     getattr(args, "order", None), args.trials, args.seed, args.tolerance, args.output, options)


def run(argv=None) -> int:
    """Parse ``argv``, run the command, print the report; return the exit code."""
    try:
        parser = build_parser(_default_seed())
    except UsageError as exc:
        print(f"matconvex: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    cfg = _config(args)
    start = time.perf_counter()
    try:
        status, result, summary = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"matconvex {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypothesisError as exc:
        status, result, summary = "fail", {"hypothesis_violated": str(exc)}, f"hypothesis violated: {exc}"
    except (DomainError, ValueError) as exc:
        print(f"matconvex {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "run_config": cfg.to_dict(),
        "status": status,
        "result": result,
        "duration_seconds": round(time.perf_counter() - start, 6),
    }
    text = render(report)
    sys.stdout.write(text)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if not args.quiet:
        print(f"{status.upper()}: {summary}", file=sys.stderr)
    return EXIT_CODES[status]


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
