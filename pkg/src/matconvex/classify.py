"""Order-n verdicts from the criterion matrices.

The tests here are randomized: a universally quantified positivity
condition is probed on seeded node sets, so a ``pass`` verdict means
"no violation among the sampled configurations" and is labelled
``sampled-pass`` in reports.

Node streams are derived from ``numpy.random.default_rng([seed, stream,
trial])`` and nodes are drawn one after the other, so the first ``n`` nodes
of an ``(n + 1)``-node draw coincide with the ``n``-node draw of the same
trial. This makes the sampled verdicts nest across orders.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from .divdiff import divided_difference
from .funcmodel import DomainError, Interval
from .specmat import (
    DEFAULT_TOLERANCE,
    derivative_matrix_Kn,
    is_definite,
    kraus_matrix,
    pick_matrix,
)

NODE_STRATEGIES = ("uniform", "clustered", "endpoint_biased", "mixed")
PROPERTIES = ("convex", "concave", "monotone")
CLUSTER_RADIUS = 1e-2
MAX_REJECTIONS = 10_000


class HypothesisError(ValueError):
    """A standing hypothesis of an audit (such as ``f'' > 0``) fails."""


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SamplerConfig:
    """Seeded node sampler.

    Parameters
    ----------
    trials : int
        Number of node sets per test.
    seed : int
        Base seed; trial ``k`` uses ``default_rng([seed, stream, k])``.
    node_strategy : str
        ``uniform``, ``clustered`` (all nodes within ``1e-2`` of a random
        centre), ``endpoint_biased`` (arcsine-like, heavy near both ends) or
        ``mixed`` (cycles through the three by trial index).
    min_gap : float
        Minimum distance between distinct nodes of one draw.
    tolerance : float
        Relative tolerance of the definiteness verdicts.
    strict : bool
        Report ``indeterminate`` when ``lambda_min`` falls in the tolerance band.
    jobs : int
        Worker processes for the trial loop; the reduction is order independent.
    """

    trials: int = 200
    seed: int = 0
    node_strategy: str = "uniform"
    min_gap: float = 1e-4
    tolerance: float = DEFAULT_TOLERANCE
    strict: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.min_gap > 0:
            raise ValueError("min_gap must be positive")
        if self.node_strategy not in NODE_STRATEGIES:
            raise ValueError(f"unknown node strategy {self.node_strategy!r}; expected one of {NODE_STRATEGIES}")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    def to_dict(self) -> dict:
        return asdict(self)


def sampling_bounds(interval: Interval) -> tuple[float, float]:
    lo, hi = interval.sampling_window()
    return float(lo), float(hi)


def _strategy_for(cfg: SamplerConfig, trial: int) -> str:
    if cfg.node_strategy == "mixed":
        return ("uniform", "clustered", "endpoint_biased")[trial % 3]
    return cfg.node_strategy


def draw_nodes(interval: Interval, n: int, cfg: SamplerConfig, trial: int, stream: int = 0) -> list[float]:
    """Node set number ``trial`` of the given stream (deterministic)."""
    lo, hi = sampling_bounds(interval)
    if (n - 1) * cfg.min_gap >= hi - lo:
        raise ValueError(f"interval {interval} is too small for {n} nodes with min_gap {cfg.min_gap}")
    rng = np.random.default_rng([cfg.seed, stream, trial])
    strategy = _strategy_for(cfg, trial)
    if strategy == "clustered":
        radius = min(CLUSTER_RADIUS, 0.5 * (hi - lo))
        centre = rng.uniform(lo + radius, hi - radius) if hi - lo > 2 * radius else 0.5 * (lo + hi)
        a, b = max(lo, centre - radius), min(hi, centre + radius)
        if (n - 1) * cfg.min_gap >= b - a:
            a, b = lo, hi
    else:
        a, b = lo, hi
    nodes: list[float] = []
    for _ in range(n):
        for _attempt in range(MAX_REJECTIONS):
            if strategy == "endpoint_biased":
                x = a + (b - a) * rng.beta(0.3, 0.3)
            else:
                x = rng.uniform(a, b)
            x = float(x)
            if interval.contains(x) and all(abs(x - y) >= cfg.min_gap for y in nodes):
                nodes.append(x)
                break
        else:
            raise ValueError(f"could not place {n} nodes {cfg.min_gap} apart in {interval}")
    return nodes


def _map_trials(worker: Callable, args: tuple, trials: int, jobs: int) -> list:
    if jobs <= 1 or trials < 2:
        return [worker(args, k) for k in range(trials)]
    chunks = [range(k, min(trials, k + 32)) for k in range(0, trials, 32)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(_run_chunk, [(worker, args, list(c)) for c in chunks])
        return [r for part in parts for r in part]


def _run_chunk(payload) -> list:
    worker, args, ks = payload
    return [worker(args, k) for k in ks]


# ---------------------------------------------------------------------------
# Classification reports
# ---------------------------------------------------------------------------

def function_label(f) -> str:
    spec = getattr(f, "to_spec", None)
    return spec() if callable(spec) else repr(f)


@dataclass
class ClassificationReport:
    function: object
    interval: Interval
    order: int
    property: str
    verdict: str
    evidence: dict
    counterexample: Optional[dict] = None
    config: Optional[SamplerConfig] = None

    @property
    def label(self) -> str:
        return "sampled-pass" if self.verdict == "pass" else self.verdict

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "function": function_label(self.function),
            "interval": self.interval.to_spec(),
            "order": self.order,
            "property": self.property,
            "verdict": self.verdict,
            "label": self.label,
            "evidence": self.evidence,
            "counterexample": self.counterexample,
            "config": self.config.to_dict() if self.config else None,
        }


def _negate(f):
    neg = getattr(f, "negated", None)
    if neg is None:
        raise TypeError(f"{f!r} cannot be negated")
    return neg()


def _criterion_trial(args, trial: int) -> dict:
    g, interval, n, cfg, kind = args
    nodes = draw_nodes(interval, n, cfg, trial)
    anchors = nodes if kind == "kraus" else [None]
    out = {"trial": trial, "nodes": nodes, "checked": 0, "worst": math.inf, "worst_s": None,
           "violation": None, "band": 0}
    for s in anchors:
        if kind == "kraus":
            rep = kraus_matrix(g, nodes, s, cfg.tolerance, cfg.strict)
        else:
            rep = pick_matrix(g, nodes, cfg.tolerance, cfg.strict)
        out["checked"] += 1
        margin = rep.normalized_min_eigenvalue
        if margin < out["worst"]:
            out["worst"], out["worst_s"] = margin, s
        if rep.verdict == "indeterminate":
            out["band"] += 1
        if rep.verdict == "indefinite" and out["violation"] is None:
            out["violation"] = {
                "trial": trial,
                "nodes": list(rep.nodes),
                "s": s,
                "min_eigenvalue": rep.min_eigenvalue,
                "normalized_min_eigenvalue": margin,
                "determinant": float(np.linalg.det(rep.matrix)),
                "matrix": rep.matrix.tolist(),
            }
    return out


def _sampled_test(f, interval: Interval, n: int, cfg: SamplerConfig, prop: str) -> ClassificationReport:
    if n < 1:
        raise ValueError("order n must be at least 1")
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; expected one of {PROPERTIES}")
    cfg = cfg or SamplerConfig()
    g = _negate(f) if prop == "concave" else f
    kind = "pick" if prop == "monotone" else "kraus"
    results = _map_trials(_criterion_trial, (g, interval, n, cfg, kind), cfg.trials, cfg.jobs)
    violations = [r["violation"] for r in results if r["violation"] is not None]
    worst = min(results, key=lambda r: (r["worst"], r["trial"]))
    band = sum(r["band"] for r in results)
    if violations:
        verdict = "fail"
    elif band and cfg.strict:
        verdict = "indeterminate"
    else:
        verdict = "pass"
    evidence = {
        "criterion": kind,
        "trials": cfg.trials,
        "matrices_checked": sum(r["checked"] for r in results),
        "violations": len(violations),
        "in_tolerance_band": band,
        "worst_margin": worst["worst"],
        "worst_nodes": worst["nodes"],
        "worst_s": worst["worst_s"],
    }
    return ClassificationReport(f, interval, n, prop, verdict, evidence,
                                violations[0] if violations else None, cfg)


def test_n_convex(f, interval: Interval, n: int, cfg: Optional[SamplerConfig] = None,
                  concave: bool = False) -> ClassificationReport:
    """Sampled Kraus criterion for ``n``-convexity (``concave=True`` tests ``-f``).

    For every sampled node set ``t_1..t_n`` the Kraus matrix ``H(s)`` is
    checked for each ``s`` among the nodes.

    Examples
    --------
    >>> from matconvex.funcmodel import reciprocal, Interval
    >>> test_n_convex(reciprocal(), Interval(0.1, 10), 3, SamplerConfig(trials=20)).verdict
    'pass'
    """
    return _sampled_test(f, interval, n, cfg, "concave" if concave else "convex")


test_n_convex.__test__ = False  # keep pytest from collecting the library function


def test_n_monotone(f, interval: Interval, n: int, cfg: Optional[SamplerConfig] = None) -> ClassificationReport:
    """Sampled Löwner criterion: the Pick matrix ``([t_i, t_j]_f)`` must be PSD."""
    return _sampled_test(f, interval, n, cfg, "monotone")


test_n_monotone.__test__ = False


def classify(f, interval: Interval, n: int, prop: str, cfg: Optional[SamplerConfig] = None) -> ClassificationReport:
    """Dispatch on ``prop`` in ``convex``, ``concave``, ``monotone``."""
    return _sampled_test(f, interval, n, cfg, prop)


# ---------------------------------------------------------------------------
# Local convexity window
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowConfig:
    grid: int = 64
    initial_radius: float = 1e-3
    resolution: float = 1e-3
    max_doublings: int = 60
    tolerance: float = DEFAULT_TOLERANCE


def _window_ok(f, t0: float, r: float, n: int, cfg: WindowConfig, domain: Interval) -> bool:
    lo = max(t0 - r, domain.lower)
    hi = min(t0 + r, domain.upper)
    for t in np.linspace(lo, hi, cfg.grid):
        t = float(t)
        if not domain.contains(t):
            continue
        if not is_definite(derivative_matrix_Kn(f, t, n, cfg.tolerance)):
            return False
    return True


def local_convexity_window(f, t0: float, n: int, cfg: Optional[WindowConfig] = None) -> Optional[Interval]:
    """Largest sampled symmetric window around ``t0`` on which ``K_n(f; t)`` stays positive definite.

    Returns ``None`` when ``K_n(f; t0)`` itself is not positive definite.
    The window is clipped to the domain of ``f``. Positive definiteness is
    checked at ``cfg.grid`` equispaced points; the radius is found by
    doubling and then bisection to relative resolution ``cfg.resolution``.
    """
    cfg = cfg or WindowConfig()
    domain = f.domain
    t0 = float(t0)
    if not domain.interior().contains(t0):
        raise DomainError(f"anchor {t0} is not interior to {domain}")
    if not is_definite(derivative_matrix_Kn(f, t0, n, cfg.tolerance)):
        return None
    reach = max(t0 - domain.lower, domain.upper - t0)
    r = cfg.initial_radius * max(1.0, abs(t0))
    while not _window_ok(f, t0, r, n, cfg, domain):
        r *= 0.5
        if r < 1e-12 * max(1.0, abs(t0)):
            return None
    good, bad = r, None
    for _ in range(cfg.max_doublings):
        if good >= reach:
            break
        trial = min(2 * good, reach)
        if _window_ok(f, t0, trial, n, cfg, domain):
            good = trial
        else:
            bad = trial
            break
    if bad is not None:
        while bad - good > cfg.resolution * good:
            mid = 0.5 * (good + bad)
            if _window_ok(f, t0, mid, n, cfg, domain):
                good = mid
            else:
                bad = mid
    lo = max(t0 - good, domain.lower)
    hi = min(t0 + good, domain.upper)
    lc = domain.lower_closed if lo == domain.lower else False
    hc = domain.upper_closed if hi == domain.upper else False
    return Interval(lo, hi, lc, hc)


# ---------------------------------------------------------------------------
# 2-convexity audit
# ---------------------------------------------------------------------------

def _band(x: float, scale: float, tol: float) -> int:
    if x > tol * scale:
        return 1
    if x < -tol * scale:
        return -1
    return 0


def _check_second_derivative(f, points) -> None:
    for t in points:
        c = f.taylor(float(t), 2)
        if not c[2] > 0:
            raise HypothesisError(f"f'' <= 0 at t = {float(t)!r}; the 2-convexity audit needs f'' > 0")


def _pair_margins(f, t0: float, t1: float, tol: float) -> tuple[float, float, int, int]:
    a0 = divided_difference(f, (t0, t0, t0))
    a1 = divided_difference(f, (t1, t1, t1))
    x = divided_difference(f, (t0, t1, t1))
    y = divided_difference(f, (t0, t0, t1))
    q4 = a0 * a1 - x * y
    s4 = max(1.0, abs(a0 * a1), abs(x * y))
    q5 = a0 * x - y * y
    s5 = max(1.0, abs(a0 * x), y * y)
    return q4 / s4, q5 / s5, _band(q4, s4, tol), _band(q5, s5, tol)


@dataclass
class TwoConvexAudit:
    function: object
    interval: Interval
    verdicts: dict
    margins: dict
    pointwise_disagreements: int
    grid_points: int
    pairs: int
    condition_1: ClassificationReport

    @property
    def equivalent(self) -> bool:
        v = self.verdicts
        return len({v["1"], v["2"], v["4"], v["5"]}) == 1 and v["2"] == v["3"]

    def to_dict(self) -> dict:
        return {
            "function": function_label(self.function),
            "interval": self.interval.to_spec(),
            "verdicts": self.verdicts,
            "worst_margins": self.margins,
            "pointwise_disagreements_2_3": self.pointwise_disagreements,
            "grid_points": self.grid_points,
            "pairs": self.pairs,
            "equivalent": self.equivalent,
            "condition_1": self.condition_1.to_dict(),
        }


def c_second_derivative(f, t: float) -> float:
    """``c''(t)`` for ``c = (f'')^(-1/3)``; ``c'' <= 0`` iff ``f'' f'''' >= (4/3) f'''^2``."""
    c = f.taylor(float(t), 4)
    g, g1, g2 = 2 * c[2], 6 * c[3], 24 * c[4]
    return (4.0 / 3.0 * g1 * g1 - g * g2) * g ** (-7.0 / 3.0) / 3.0


def two_convex_audit(f, interval: Interval, cfg: Optional[SamplerConfig] = None, grid: int = 1000,
                     pairs: Optional[int] = None,
                     cross: Optional[tuple[Interval, Interval]] = None) -> TwoConvexAudit:
    """Evaluate the five equivalent conditions for 2-convexity.

    * (1) sampled Kraus criterion at order 2;
    * (2) ``[[f''/2, f'''/6], [f'''/6, f''''/24]]`` PSD on a grid;
    * (3) ``c = (f'')^(-1/3)`` concave, i.e. ``f'' f'''' - (4/3) f'''^2 >= 0``;
    * (4) ``[t0,t0,t0][t1,t1,t1] >= [t0,t1,t1][t0,t0,t1]`` on sampled pairs;
    * (5) ``[t0,t0,t0][t0,t1,t1] - [t0,t0,t1]^2 >= 0`` on sampled pairs.

    ``cross`` adds pairs with ``t0`` drawn from the first and ``t1`` from the
    second interval.

    Raises
    ------
    HypothesisError
        If ``f'' <= 0`` at a grid point.
    """
    cfg = cfg or SamplerConfig()
    tol = cfg.tolerance
    pts = interval.grid(grid)
    _check_second_derivative(f, pts)
    worst2 = worst3 = math.inf
    fail2 = fail3 = False
    disagree = 0
    for t in pts:
        c = f.taylor(float(t), 4)
        m = np.array([[c[2], c[3]], [c[3], c[4]]])
        fro = float(np.linalg.norm(m))
        lam = float(np.linalg.eigvalsh(m)[0])
        s2 = _band(lam, max(1.0, fro), tol)
        g, g1, g2 = 2 * c[2], 6 * c[3], 24 * c[4]
        q = g * g2 - 4.0 / 3.0 * g1 * g1
        scale3 = max(1.0, abs(g * g2), 4.0 / 3.0 * g1 * g1)
        s3 = _band(q, scale3, tol)
        worst2 = min(worst2, lam / max(1.0, fro))
        worst3 = min(worst3, q / scale3)
        fail2 |= s2 < 0
        fail3 |= s3 < 0
        if (s2 < 0) != (s3 < 0):
            disagree += 1
    npairs = cfg.trials if pairs is None else pairs
    draws = [(interval, interval)] * npairs
    if cross is not None:
        draws += [cross] * npairs
    worst4 = worst5 = math.inf
    fail4 = fail5 = False
    for k, (ia, ib) in enumerate(draws):
        if ia is ib:
            t0, t1 = draw_nodes(interval, 2, cfg, k, stream=1)
        else:
            t0 = draw_nodes(ia, 1, cfg, k, stream=2)[0]
            t1 = draw_nodes(ib, 1, cfg, k, stream=3)[0]
            if abs(t0 - t1) < cfg.min_gap:
                continue
        m4, m5, b4, b5 = _pair_margins(f, t0, t1, tol)
        worst4, worst5 = min(worst4, m4), min(worst5, m5)
        fail4 |= b4 < 0
        fail5 |= b5 < 0
    cond1 = test_n_convex(f, interval, 2, cfg)
    verdicts = {
        "1": cond1.verdict if cond1.verdict != "indeterminate" else "pass",
        "2": "fail" if fail2 else "pass",
        "3": "fail" if fail3 else "pass",
        "4": "fail" if fail4 else "pass",
        "5": "fail" if fail5 else "pass",
    }
    margins = {"1": cond1.evidence["worst_margin"], "2": worst2, "3": worst3, "4": worst4, "5": worst5}
    return TwoConvexAudit(f, interval, verdicts, margins, disagree, len(pts), len(draws), cond1)


def hull(a: Interval, b: Interval) -> Interval:
    if a.upper < b.lower or b.upper < a.lower:
        raise ValueError(f"intervals {a} and {b} do not overlap")
    lo = a if (a.lower, not a.lower_closed) <= (b.lower, not b.lower_closed) else b
    hi = a if (a.upper, a.upper_closed) >= (b.upper, b.upper_closed) else b
    return Interval(lo.lower, hi.upper, lo.lower_closed, hi.upper_closed)


@dataclass
class LocalityReport:
    first: str
    second: str
    union: str
    applicable: bool
    glued: Optional[bool]
    order: int = 2

    @property
    def consistent(self) -> bool:
        return (not self.applicable) or bool(self.glued)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["consistent"] = self.consistent
        return d


def locality_check(f, first: Interval, second: Interval, cfg: Optional[SamplerConfig] = None,
                   grid: int = 1000) -> LocalityReport:
    """Overlap gluing for 2-convexity.

    If the audit passes on both overlapping intervals, it must also pass on
    their union, with extra pairs straddling the overlap.
    """
    cfg = cfg or SamplerConfig()
    union = hull(first, second)
    a = two_convex_audit(f, first, cfg, grid)
    b = two_convex_audit(f, second, cfg, grid)
    verdict = lambda audit: audit.equivalent and audit.verdicts["2"] == "pass"
    applicable = verdict(a) and verdict(b)
    glued = None
    if applicable:
        u = two_convex_audit(f, union, cfg, grid, cross=(first, second))
        glued = verdict(u)
    return LocalityReport(a.verdicts["2"], b.verdicts["2"], "pass" if glued else ("fail" if glued is False else "n/a"),
                          applicable, glued)


def exploratory_locality(f, first: Interval, second: Interval, n: int,
                         cfg: Optional[SamplerConfig] = None) -> dict:
    """Record sampled order-``n`` verdicts on two overlapping intervals and their union.

    No verdict is drawn from the data; for ``n >= 3`` locality is open.
    """
    cfg = cfg or SamplerConfig()
    union = hull(first, second)
    return {
        "order": n,
        "first": test_n_convex(f, first, n, cfg).verdict,
        "second": test_n_convex(f, second, n, cfg).verdict,
        "union": test_n_convex(f, union, n, cfg).verdict,
        "exploratory": True,
    }


# ---------------------------------------------------------------------------
# Determinant propagation and degeneracy checks
# ---------------------------------------------------------------------------

def kraus_pair_determinant(f, t0: float, t: float) -> tuple[float, float]:
    """``[t0,t0,t0][t0,t,t] - [t0,t0,t]^2`` and its magnitude scale."""
    a = divided_difference(f, (t0, t0, t0))
    b = divided_difference(f, (t0, t, t))
    c = divided_difference(f, (t0, t0, t))
    return a * b - c * c, max(1.0, abs(a * b), c * c)


@dataclass
class PropagationReport:
    t0: float
    t1: float
    vanishes_at_t1: bool
    propagated: Optional[bool]
    max_abs_determinant: float
    min_determinant: float
    grid: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.propagated is not False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def vanishing_determinant_propagation_check(f, t0: float, t1: float, grid: int = 64,
                                            tolerance: float = DEFAULT_TOLERANCE) -> PropagationReport:
    """If the 2x2 Kraus determinant vanishes at ``t1`` it must vanish between ``t0`` and ``t1``.

    Raises
    ------
    HypothesisError
        When the determinant is significantly negative between the anchors.
    """
    t0, t1 = float(t0), float(t1)
    if t0 == t1:
        raise ValueError("t1 must differ from t0")
    ts = np.linspace(t0, t1, grid + 1)[1:]
    values, scales = [], []
    for t in ts:
        d, s = kraus_pair_determinant(f, t0, float(t))
        values.append(d)
        scales.append(s)
    bands = [_band(d, s, tolerance) for d, s in zip(values, scales)]
    if min(bands) < 0:
        k = bands.index(-1)
        raise HypothesisError(f"Kraus determinant is negative ({values[k]:.3e}) at t = {ts[k]!r}")
    vanishes = bands[-1] == 0
    propagated = all(b == 0 for b in bands) if vanishes else None
    return PropagationReport(t0, t1, vanishes, propagated,
                             float(max(abs(v) for v in values)), float(min(values)),
                             [float(t) for t in ts])


@dataclass
class DegeneracyReport:
    constant: bool
    affine: bool
    monotone_verdict: Optional[str]
    convex_verdict: Optional[str]
    derivative_positive: Optional[bool]
    second_derivative_positive: Optional[bool]

    @property
    def passed(self) -> bool:
        return self.derivative_positive is not False and self.second_derivative_positive is not False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def degeneracy_checks(f, interval: Interval, monotone: Optional[ClassificationReport] = None,
                      convex: Optional[ClassificationReport] = None, grid: int = 64,
                      cfg: Optional[SamplerConfig] = None) -> DegeneracyReport:
    """Contrapositive audits of the order-2 degeneracy facts.

    A non-constant 2-monotone function must have ``f' > 0`` and a
    non-affine 2-convex function must have ``f'' > 0``; both are checked at
    ``grid`` points. Missing order-2 reports are computed with ``cfg``.
    """
    pts = interval.grid(grid)
    coeffs = [f.taylor(float(t), 2) for t in pts]
    d1 = np.array([c[1] for c in coeffs], dtype=float)
    d2 = np.array([c[2] for c in coeffs], dtype=float)
    values = np.array([c[0] for c in coeffs], dtype=float)
    scale = max(1.0, float(np.max(np.abs(values))))
    constant = bool(np.all(np.abs(d1) <= 1e-12 * scale) and np.all(np.abs(d2) <= 1e-12 * scale))
    affine = bool(np.all(np.abs(d2) <= 1e-12 * scale))
    if constant:
        return DegeneracyReport(True, True, None, None, None, None)
    if monotone is None:
        monotone = test_n_monotone(f, interval, 2, cfg)
    if convex is None:
        convex = test_n_convex(f, interval, 2, cfg)
    dpos = bool(np.all(d1 > 0)) if monotone.passed else None
    ddpos = bool(np.all(d2 > 0)) if (convex.passed and not affine) else None
    return DegeneracyReport(False, affine, monotone.verdict, convex.verdict, dpos, ddpos)


__all__ = [
    "SamplerConfig", "ClassificationReport", "HypothesisError", "draw_nodes",
    "test_n_convex", "test_n_monotone", "classify", "WindowConfig", "local_convexity_window",
    "two_convex_audit", "TwoConvexAudit", "c_second_derivative", "locality_check",
    "exploratory_locality", "vanishing_determinant_propagation_check", "kraus_pair_determinant",
    "degeneracy_checks",
]
