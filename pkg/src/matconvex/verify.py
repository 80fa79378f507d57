"""Seeded acceptance suites shared by ``matconvex verify`` and the test suite.

Each suite returns a list of :class:`Check` objects, one per sub-check, tagged
with the acceptance criterion it belongs to. Every random draw comes from
``numpy.random.default_rng([seed, stream, trial])`` so a suite is a pure
function of its seed.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .classify import SamplerConfig, classify, locality_check, test_n_convex, two_convex_audit
from .divdiff import (
    divided_difference,
    geometric_mean_bound_check,
    hermite_simplex_quadrature,
    reciprocal_closed_form,
)
from .funcmodel import (
    Interval,
    affine,
    catalog,
    compose_affine,
    exponential,
    logarithm,
    neg_log,
    parse_interval,
    polynomial,
    power,
    reciprocal,
)
from .gaps import (
    build_gap_polynomial,
    certify,
    degree_exclusion_minor,
    gap_coefficients,
    hankel_exact,
)
from .oracle import cross_validate, recompute_deficit, witness_search
from .specmat import confluent_factorization_check, derivative_matrix_Kn
from .transforms import (
    connection_check,
    roundtrip,
    s_pick_determinant_identity_check,
    sylvester_reduce,
    theorem_roundtrip_audit,
)

SUITES = ("identities", "gaps", "two-convex", "transforms", "oracle", "all")


@dataclass
class Check:
    """Outcome of one sub-check of an acceptance criterion."""

    criterion: int
    name: str
    passed: bool
    worst: float
    limit: Optional[float]
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        bound = "" if self.limit is None else f" (limit {self.limit:.0e})"
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.criterion}.{self.name}: worst {self.worst:.3e}{bound}"

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "name": self.name,
            "passed": self.passed,
            "worst": _finite(self.worst),
            "limit": self.limit,
            "detail": self.detail,
        }


def _finite(x: float):
    return x if math.isfinite(x) else str(x)


def _rng(seed: int, stream: int, trial: int = 0) -> np.random.Generator:
    return np.random.default_rng([seed, stream, trial])


def _rel(a: float, b: float) -> float:
    big = max(abs(a), abs(b))
    return 0.0 if a == b else abs(a - b) / big


def _spread_nodes(rng: np.random.Generator, lo: float, hi: float, r: int, gap: float) -> list[float]:
    while True:
        x = np.sort(rng.uniform(lo, hi, r))
        if r == 1 or np.min(np.diff(x)) >= gap:
            return [float(v) for v in rng.permutation(x)]


def _timed(fn: Callable[[], Check]) -> Check:
    t = time.perf_counter()
    c = fn()
    c.seconds = time.perf_counter() - t
    return c


# ---------------------------------------------------------------------------
# Criterion 1: factorization identity
# ---------------------------------------------------------------------------

def check_factorization(seed: int, trials: int = 1000, limit: float = 1e-8) -> Check:
    worst, worst_at, rows, unresolved = 0.0, None, 0, 0
    for k in range(trials):
        rng = _rng(seed, 1, k)
        if k % 4 == 0:
            f, lo, hi, label = exponential(), -2.0, 2.0, "exp"
        else:
            deg = int(rng.integers(0, 11))
            coeffs = rng.standard_normal(deg + 1)
            f, lo, hi, label = polynomial(coeffs), -1.0, 1.0, f"poly deg {deg}"
        r = int(rng.integers(1, 6))
        nodes = _spread_nodes(rng, lo, hi, r, 1e-2)
        s = nodes[int(rng.integers(0, r))]
        for row in confluent_factorization_check(f, nodes, s):
            rows += 1
            unresolved += not row.resolved
            if row.residual > worst:
                worst, worst_at = row.residual, dict(trial=k, function=label, nodes=nodes, s=s, r=row.r)
    return Check(1, "factorization", worst <= limit, worst, limit,
                 dict(trials=trials, rows=rows, singular_rows=unresolved, worst_at=worst_at))


# ---------------------------------------------------------------------------
# Criterion 2: divided-difference engine
# ---------------------------------------------------------------------------

def check_quadrature(seed: int, per_order: int = 50, limit: float = 1e-6) -> Check:
    funcs = [("exp", exponential(), -1.0, 1.0), ("recip", reciprocal(), 0.5, 2.0), ("log", logarithm(), 0.5, 2.0)]
    worst = 0.0
    for (label, f, lo, hi), n in itertools.product(funcs, range(1, 5)):
        for k in range(per_order):
            rng = _rng(seed, 2, 1000 * n + k)
            x = [float(v) for v in rng.uniform(lo, hi, n + 1)]
            worst = max(worst, _rel(divided_difference(f, x), hermite_simplex_quadrature(f, x)))
    return Check(2, "recurrence-vs-quadrature", worst <= limit, worst, limit, dict(orders="1..4"))


def check_reciprocal(seed: int, per_order: int = 100, limit: float = 1e-10) -> Check:
    f = reciprocal()
    worst = 0.0
    for n in range(0, 7):
        for k in range(per_order):
            x = [float(v) for v in _rng(seed, 3, 1000 * n + k).uniform(0.2, 5.0, n + 1)]
            worst = max(worst, _rel(divided_difference(f, x), reciprocal_closed_form(x)))
    return Check(2, "recurrence-vs-reciprocal", worst <= limit, worst, limit, dict(orders="0..6"))


def check_permutation(seed: int, per_order: int = 50, limit: float = 1e-10) -> Check:
    funcs = [exponential(), logarithm(), polynomial([0.3, -1.0, 0.5, 2.0, -0.7, 0.1, 1.3])]
    worst = 0.0
    for n in range(1, 7):
        for k in range(per_order):
            rng = _rng(seed, 4, 1000 * n + k)
            f = funcs[k % len(funcs)]
            x = [float(v) for v in rng.uniform(0.5, 3.0, n + 1)]
            if k % 5 == 0:
                x[-1] = x[0]  # include confluent tuples
            base = divided_difference(f, x)
            for _ in range(3):
                worst = max(worst, _rel(base, divided_difference(f, list(rng.permutation(x)))))
    return Check(2, "permutation-invariance", worst <= limit, worst, limit, dict(orders="1..6"))


# ---------------------------------------------------------------------------
# Criterion 3: Kraus necessity
# ---------------------------------------------------------------------------

KRAUS_CASES = (
    ("recip", reciprocal, "(0.1,10)"),
    ("neg_log", neg_log, "(0.1,10)"),
    ("square", lambda: polynomial([0.0, 0.0, 1.0]), "(-5,5)"),
)


def check_kraus_necessity(seed: int, trials: int = 200, max_order: int = 4) -> Check:
    cfg = SamplerConfig(trials=trials, seed=seed)
    worst, failures, detail = math.inf, [], {}
    for label, make, spec in KRAUS_CASES:
        f, interval = make(), parse_interval(spec)
        for n in range(1, max_order + 1):
            rep = test_n_convex(f, interval, n, cfg)
            worst = min(worst, rep.evidence["worst_margin"])
            detail[f"{label} n={n} kraus"] = rep.verdict
            if rep.verdict == "fail":
                failures.append(f"{label} n={n} kraus")
            for t in interval.grid(64):
                k = derivative_matrix_Kn(f, float(t), n)
                worst = min(worst, k.normalized_min_eigenvalue)
                if k.verdict == "indefinite":
                    failures.append(f"{label} n={n} K_n at {float(t)!r}")
                    break
    detail["failures"] = failures
    return Check(3, "kraus-necessity", not failures, worst, None, detail)


# ---------------------------------------------------------------------------
# Criterion 6: geometric-mean inequality for exp
# ---------------------------------------------------------------------------

def check_exp_mean(seed: int, per_order: int = 200, limit: float = 1e-12) -> Check:
    f = exponential()
    worst, worst_at = math.inf, None
    for n in range(1, 6):
        for k in range(per_order):
            x = [float(v) for v in _rng(seed, 6, 1000 * n + k).uniform(-3.0, 3.0, n + 1)]
            lhs = divided_difference(f, x)
            rhs = math.exp(sum(x) / (n + 1)) / math.factorial(n)
            if lhs - rhs < worst:
                worst, worst_at = lhs - rhs, x
    # the general form agrees in direction on a fixed tuple
    gm = geometric_mean_bound_check(f, [-1.0, 0.25, 2.0])
    ok = worst >= -limit and gm.satisfied and gm.direction == "convex"
    return Check(6, "exp-mean-bound", ok, worst, -limit,
                 dict(tuples=5 * per_order, worst_at=worst_at, general_form=gm.to_dict()))


# ---------------------------------------------------------------------------
# Criterion 4: gap constructions
# ---------------------------------------------------------------------------

GAP_CASES = ((2, 4), (3, 6))


def check_gap_sampling(seed: int, trials: int = 200) -> Check:
    cfg = SamplerConfig(trials=trials, seed=seed)
    detail, failures, worst = {}, [], math.inf
    for (n, m), kind in itertools.product(GAP_CASES, ("concave", "convex")):
        g = build_gap_polynomial(n, m, "(-1,1)", kind)
        key = f"n={n} {kind}"
        if not certify(g):
            failures.append(f"{key} certify")
        for prop in ("monotone", kind):
            rep = classify(g.model, g.certified_interval, n, prop, cfg)
            worst = min(worst, rep.evidence["worst_margin"])
            detail[f"{key} {prop}"] = rep.verdict
            if rep.verdict != "pass":
                failures.append(f"{key} {prop}")
    detail["failures"] = failures
    return Check(4, "gap-sampling", not failures, worst, None, detail)


def check_gap_hankel() -> Check:
    b = gap_coefficients(4, "concave")
    k2, m2 = hankel_exact(b, 2, 0), hankel_exact(b, 2, -1)
    want_k = [[Fraction(-1, 2), Fraction(1, 3)], [Fraction(1, 3), Fraction(-1, 4)]]
    want_m = [[Fraction(1), Fraction(-1, 2)], [Fraction(-1, 2), Fraction(1, 3)]]
    ok = k2 == want_k and m2 == want_m
    return Check(4, "hankel-exact", ok, 0.0 if ok else 1.0, 0.0,
                 dict(K2=[[str(x) for x in r] for r in k2], M2=[[str(x) for x in r] for r in m2]))


def check_exclusion_minors() -> Check:
    detail, ok = {}, True
    for m, n in ((3, 2), (4, 3), (5, 3)):
        b = gap_coefficients(m, "concave")
        r = degree_exclusion_minor(m, n, b)
        ok &= r.determinant == -b[m] ** 2
        detail[f"m={m} n={n}"] = str(r.determinant)
    return Check(4, "exclusion-minors", ok, 0.0 if ok else 1.0, 0.0, detail)


def check_gap_witness(seed: int, trials: int = 10_000, threshold: float = 1e-6, jobs: int = 1) -> Check:
    g = build_gap_polynomial(2, 4, "(-1,1)", "concave")
    out = witness_search(g.model, g.certified_interval, 3, "concavity", trials, seed, threshold, jobs)
    detail = out.to_dict()
    if out.found:
        detail["recomputed_deficit"] = recompute_deficit(g.model, out.witness)
    worst = out.worst_deficit
    return Check(4, "oracle-order-3-witness", out.found and worst <= -threshold, worst, -threshold, detail)


# ---------------------------------------------------------------------------
# Criterion 5: 2-convexity equivalence
# ---------------------------------------------------------------------------

def two_convex_catalog() -> list[tuple[str, object, Interval]]:
    c = catalog()
    cases = [
        ("reciprocal", c["reciprocal"], "(0.1,10)"),
        ("neg_log", c["neg_log"], "(0.1,10)"),
        ("exp", c["exp"], "(-1,1)"),
        ("square", c["square"], "(-1,1)"),
        ("cube", c["cube"], "(0.1,10)"),
        ("quartic", c["quartic"], "(0.5,2)"),
        ("g4", c["g4"], "(-0.3,0)"),
        ("-p4", compose_affine(c["p4"], -1.0, 0.0), "(0,0.3)"),
    ]
    return [(label, f, parse_interval(spec)) for label, f, spec in cases]


def overlapping_halves(interval: Interval, overlap: float = 0.2) -> tuple[Interval, Interval]:
    """Split ``interval`` into two pieces sharing ``overlap`` of its width."""
    lo, hi = interval.lower, interval.upper
    w = hi - lo
    cut_a, cut_b = lo + 0.5 * (1 + overlap) * w, lo + 0.5 * (1 - overlap) * w
    return Interval(lo, cut_a, interval.lower_closed, False), Interval(cut_b, hi, False, interval.upper_closed)


def check_two_convex(seed: int, grid: int = 1000, trials: int = 200) -> list[Check]:
    cfg = SamplerConfig(trials=trials, seed=seed)
    pointwise, verdicts, convex_members = 0, {}, []
    bad = []
    for label, f, interval in two_convex_catalog():
        a = two_convex_audit(f, interval, cfg, grid)
        pointwise += a.pointwise_disagreements
        verdicts[label] = dict(interval=interval.to_spec(), **a.verdicts)
        if not a.equivalent:
            bad.append(label)
        if a.equivalent and a.verdicts["2"] == "pass":
            convex_members.append((label, f, interval))
    checks = [
        Check(5, "pointwise-2-vs-3", pointwise == 0, float(pointwise), 0.0, dict(grid=grid)),
        Check(5, "interval-verdicts", not bad, float(len(bad)), 0.0, dict(verdicts=verdicts, disagreeing=bad)),
    ]
    loc, glued = {}, True
    for label, f, interval in convex_members:
        first, second = overlapping_halves(interval)
        r = locality_check(f, first, second, cfg, grid)
        loc[label] = r.to_dict()
        glued &= r.consistent and r.applicable
    checks.append(Check(5, "locality-gluing", glued and bool(loc), 0.0 if glued else 1.0, 0.0, loc))
    return checks


# ---------------------------------------------------------------------------
# Criterion 7: transforms
# ---------------------------------------------------------------------------

def _transform_cases():
    return [
        ("exp", exponential(), parse_interval("(-2,2)")),
        ("log", logarithm(), parse_interval("(0.2,5)")),
        ("square", polynomial([0.0, 0.0, 1.0]), parse_interval("(0.2,5)")),
        ("-recip", compose_affine(reciprocal(), -1.0, 0.0), parse_interval("(0.2,5)")),
        ("recip", reciprocal(), parse_interval("(0.2,5)")),
        ("neg_log", neg_log(), parse_interval("(0.2,5)")),
        ("pow1.5", power(1.5), parse_interval("(0.2,5)")),
    ]


def _anchors(interval: Interval, seed: int, stream: int, count: int) -> list[float]:
    lo, hi = interval.sampling_window()
    return [float(v) for v in _rng(seed, stream).uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), count)]


def check_roundtrips(seed: int, anchors: int = 5, limit: float = 1e-8) -> Check:
    worst, detail = 0.0, {}
    for label, f, interval in _transform_cases():
        g = f.with_domain(interval)
        for kind in ("T", "S"):
            ts = interval.grid(64)
            if kind == "T" and not all(g.taylor(float(t), 1)[1] > 0 for t in ts):
                continue
            if kind == "S" and not all(g.taylor(float(t), 2)[2] > 0 for t in ts):
                continue
            w = max(roundtrip(g, t0, kind).max_relative_error for t0 in _anchors(interval, seed, 7, anchors))
            detail[f"{kind}({label})"] = w
            worst = max(worst, w)
    return Check(7, "inverse-roundtrips", worst <= limit, worst, limit, detail)


def check_connection(seed: int, anchors: int = 5, limit: float = 1e-9) -> Check:
    worst, detail = 0.0, {}
    for label, f, interval in _transform_cases():
        g = f.with_domain(interval)
        if not all(g.taylor(float(t), 2)[2] > 0 for t in interval.grid(64)):
            continue
        w = max(connection_check(g, t0) for t0 in _anchors(interval, seed, 8, anchors))
        detail[label] = w
        worst = max(worst, w)
    return Check(7, "connection", worst <= limit, worst, limit, detail)


def check_sylvester(seed: int, trials: int = 1000, limit: float = 1e-10) -> Check:
    worst = 0.0
    for k in range(trials):
        rng = _rng(seed, 9, k)
        size = int(rng.integers(2, 8))  # k = size - 1 <= 6
        worst = max(worst, sylvester_reduce(rng.standard_normal((size, size))).residual)
    return Check(7, "sylvester", worst <= limit, worst, limit, dict(trials=trials, sizes="2..7"))


def check_s_pick(seed: int, trials: int = 200, limit: float = 1e-7) -> Check:
    cases = [(label, f, i) for label, f, i in _transform_cases() if label in ("exp", "recip", "neg_log", "square")]
    worst = 0.0
    for k in range(trials):
        rng = _rng(seed, 10, k)
        label, f, interval = cases[k % len(cases)]
        lo, hi = interval.sampling_window()
        pts = _spread_nodes(rng, lo, hi, int(rng.integers(2, 6)), 1e-2)
        worst = max(worst, s_pick_determinant_identity_check(f, pts[0], pts[1:]).residual)
    return Check(7, "s-pick-identity", worst <= limit, worst, limit, dict(trials=trials))


def check_theorem_audits(seed: int, trials: int = 200) -> Check:
    cfg = SamplerConfig(trials=trials, seed=seed)
    g = build_gap_polynomial(2, 4, None, "convex")
    cases = [
        ("recip", reciprocal(), parse_interval("(0.1,10)"), ("pass", "pass")),
        ("gap-convex n=2", g.model, g.certified_interval, ("fail", "fail")),
        ("exp", exponential(), parse_interval("(-1,1)"), ("fail", "fail")),
    ]
    detail, ok = {}, True
    for label, f, interval, want in cases:
        a = theorem_roundtrip_audit(f, interval, 2, cfg)
        got = (a.f_in_K_next, a.S_in_P_n_for_all_t0)
        certified = want[0] == "pass" or (a.criterion_certificate is not None and a.s_certificate is not None)
        detail[label] = dict(interval=interval.to_spec(), got=list(got), expected=list(want),
                             consistent=a.consistent, anchors_checked=a.anchors_checked)
        ok &= got == want and a.consistent and certified
    return Check(7, "theorem-audits", ok, 0.0 if ok else 1.0, 0.0, detail)


# ---------------------------------------------------------------------------
# Criterion 8: criterion versus definition
# ---------------------------------------------------------------------------

def cross_validation_scenarios() -> list[tuple[str, object, str, int, str]]:
    """Twenty ``(label, f, interval, n, property)`` scenarios with clear verdicts."""
    sq = polynomial([0.0, 0.0, 1.0])
    cube = polynomial([0.0, 0.0, 0.0, 1.0])
    quartic = polynomial([0.0, 0.0, 0.0, 0.0, 1.0])
    return [
        ("t^2", sq, "(-1,1)", 2, "convex"),
        ("t^2", sq, "(-1,1)", 4, "convex"),
        ("t^2", sq, "(0.1,10)", 2, "monotone"),
        ("t^3", cube, "(0.1,3)", 2, "convex"),
        ("t^3", cube, "(0.1,3)", 2, "monotone"),
        ("t^4", quartic, "(-1,1)", 2, "convex"),
        ("1/t", reciprocal(), "(0.1,10)", 2, "convex"),
        ("1/t", reciprocal(), "(0.1,10)", 4, "convex"),
        ("1/t", reciprocal(), "(0.1,10)", 1, "monotone"),
        ("1/t", reciprocal(), "(0.1,10)", 3, "monotone"),
        ("-log", neg_log(), "(0.1,10)", 3, "convex"),
        ("log", logarithm(), "(0.1,10)", 3, "monotone"),
        ("log", logarithm(), "(0.1,10)", 3, "concave"),
        ("exp", exponential(), "(-3,3)", 2, "convex"),
        ("exp", exponential(), "(-3,3)", 2, "monotone"),
        ("sqrt", power(0.5), "(0.1,10)", 4, "monotone"),
        ("sqrt", power(0.5), "(0.1,10)", 3, "concave"),
        ("t^1.5", power(1.5), "(0.1,10)", 3, "convex"),
        ("t^2.5", power(2.5), "(0.1,10)", 2, "convex"),
        ("2t+1", affine(2.0, 1.0), "(-1,1)", 4, "monotone"),
    ]


def check_cross_validation(seed: int, trials: int = 200, oracle_trials: int = 2000, jobs: int = 1) -> Check:
    cfg = SamplerConfig(trials=trials, seed=seed, jobs=jobs)
    detail, agree = {}, 0
    for k, (label, f, spec, n, prop) in enumerate(cross_validation_scenarios()):
        cv = cross_validate(f, parse_interval(spec), n, prop, cfg, oracle_trials)
        agree += cv.agree
        detail[f"{k:02d} {label} {spec} n={n} {prop}"] = f"{cv.criterion_verdict}/{cv.oracle_verdict}"
    total = len(cross_validation_scenarios())
    return Check(8, "criterion-vs-oracle", agree == total, float(total - agree), 0.0, detail)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def suite_checks(name: str, seed: int = 1, jobs: int = 1) -> list[Check]:
    """Run one acceptance suite and return its checks."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
    if name == "all":
        return [c for s in SUITES[:-1] for c in suite_checks(s, seed, jobs)]
    if name == "identities":
        fns = [lambda: check_factorization(seed), lambda: check_quadrature(seed),
               lambda: check_reciprocal(seed), lambda: check_permutation(seed),
               lambda: check_kraus_necessity(seed), lambda: check_exp_mean(seed)]
    elif name == "gaps":
        fns = [lambda: check_gap_sampling(seed), check_gap_hankel, check_exclusion_minors,
               lambda: check_gap_witness(seed, jobs=jobs)]
    elif name == "two-convex":
        t = time.perf_counter()
        checks = check_two_convex(seed)
        for c in checks:
            c.seconds = (time.perf_counter() - t) / len(checks)
        return checks
    elif name == "transforms":
        fns = [lambda: check_roundtrips(seed), lambda: check_connection(seed), lambda: check_sylvester(seed),
               lambda: check_s_pick(seed), lambda: check_theorem_audits(seed)]
    else:
        fns = [lambda: check_cross_validation(seed, jobs=jobs)]
    return [_timed(fn) for fn in fns]


def criterion_summary(checks: list[Check]) -> dict[int, bool]:
    out: dict[int, bool] = {}
    for c in checks:
        out[c.criterion] = out.get(c.criterion, True) and c.passed
    return dict(sorted(out.items()))


__all__ = ["Check", "SUITES", "suite_checks", "criterion_summary", "cross_validation_scenarios",
           "two_convex_catalog"]
