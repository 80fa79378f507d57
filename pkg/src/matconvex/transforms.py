"""Fractional transforms built from divided differences.

For an anchor ``t0``::

    T(t0, f)(t) = [t0, t0, t]_f / ([t0, t0]_f [t0, t]_f)
    S(t0, f)(t) = [t0, t0, t0, t]_f / ([t0, t0, t0]_f [t0, t0, t]_f)
    d_{t0}(t)   = [t0, t]_f

Every ingredient is a divided difference with ``t`` as its last node, and
``d^j/dt^j [x_0, ..., x_m, t] = j! [x_0, ..., x_m, t, ..., t]`` (``t``
repeated ``j + 1`` times). Taylor coefficients of the transforms therefore
come from higher confluent differences followed by a power-series division,
and the transforms are regular at ``t = t0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .classify import HypothesisError, SamplerConfig, test_n_convex, test_n_monotone
from .ddouble import DD
from .divdiff import divided_difference, divided_difference_value
from .funcmodel import DomainError, Interval
from .specmat import DETERMINANT_NOISE_FLOOR, _generic_lu_det, lu_det

KINDS = ("T", "S", "d")
CHECK_POINTS = 64
ROUNDTRIP_EXCLUSION = 1e-4
NEAR_ANCHOR = 0.25


def _series_divide(num: list, den: list) -> list:
    out: list = []
    for j in range(len(num)):
        acc = num[j]
        for i in range(j):
            acc -= out[i] * den[j - i]
        out.append(acc / den[0])
    return out


def _plain(t) -> float:
    return t.hi + t.lo if isinstance(t, DD) else float(t)


@dataclass(frozen=True)
class TransformModel:
    """Evaluator of ``T(t0, f)``, ``S(t0, f)`` or ``d_{t0}`` with exact-order derivatives.

    ``source`` is anything exposing ``taylor(t, k)`` and ``domain`` (a
    :class:`~matconvex.funcmodel.FunctionModel` or another transform).
    Values are doubles, or double-doubles when ``taylor`` is called with a
    double-double point.
    """

    source: object
    anchor: float
    kind: str
    f_t0: float
    fprime_t0: float
    second_t0: float
    sign: float = 1.0

    @property
    def domain(self) -> Interval:
        return self.source.domain

    def _check(self, t: float) -> None:
        if not self.domain.contains(t):
            raise DomainError(f"point {t!r} is outside the domain {self.domain}")

    def taylor(self, t, k: int) -> list:
        # extended-precision callers (double-double nodes) get double-double coefficients
        wide = isinstance(t, DD)
        t = _plain(t)
        self._check(t)
        t0, f = self.anchor, self.source
        # near the anchor every difference below cancels; consumers difference
        # the result again, so the rounding error would be amplified twice
        near = abs(t - t0) <= NEAR_ANCHOR * max(1.0, abs(t0))
        mode = "extended" if wide or near else None
        dd = lambda nodes: divided_difference_value(f, nodes, mode)
        if self.kind == "d":
            out = [dd((t0,) + (t,) * (j + 1)) for j in range(k + 1)]
        elif self.kind == "T":
            num = [dd((t0, t0) + (t,) * (j + 1)) for j in range(k + 1)]
            den = [dd((t0,) + (t,) * (j + 1)) * self.fprime_t0 for j in range(k + 1)]
            out = _series_divide(num, den)
        else:
            num = [dd((t0, t0, t0) + (t,) * (j + 1)) for j in range(k + 1)]
            den = [dd((t0, t0) + (t,) * (j + 1)) * self.second_t0 for j in range(k + 1)]
            out = _series_divide(num, den)
        if not wide:
            out = [float(x) for x in out]
        return [x * self.sign for x in out]

    def __call__(self, t) -> float:
        return float(self.taylor(t, 0)[0])

    def derivative(self, t, k: int) -> float:
        return self.taylor(t, k)[k] * math.factorial(k)

    def negated(self) -> "TransformModel":
        return replace(self, sign=-self.sign)

    def to_spec(self) -> str:
        src = self.source.to_spec() if hasattr(self.source, "to_spec") else repr(self.source)
        lead = "-" if self.sign < 0 else ""
        return f"{lead}{self.kind}[{src}; t0={self.anchor!r}]"


def _grid_of(f, points: int) -> np.ndarray:
    return f.domain.grid(points)


def _anchor_data(f, t0: float) -> tuple[float, float, float]:
    c = f.taylor(t0, 2)
    return float(c[0]), float(c[1]), float(c[2])


def _require_interior(f, t0: float) -> float:
    t0 = float(t0)
    if not f.domain.interior().contains(t0):
        raise DomainError(f"anchor {t0!r} must be interior to {f.domain}")
    return t0


def difference_quotient(f, t0: float) -> TransformModel:
    """``d_{t0}(t) = [t0, t]_f`` with ``d^(j)(t) / j! = [t0, t, ..., t]_f``."""
    t0 = _require_interior(f, t0)
    v, d1, d2 = _anchor_data(f, t0)
    return TransformModel(f, t0, "d", v, d1, d2)


def transform_T(f, t0: float, check_points: int = CHECK_POINTS) -> TransformModel:
    """``T(t0, f)``; requires ``f' > 0`` (checked on a grid).

    >>> from matconvex.funcmodel import exponential
    >>> transform_T(exponential(), 0.0)(0.0)
    0.5
    """
    t0 = _require_interior(f, t0)
    for t in _grid_of(f, check_points):
        if not f.taylor(float(t), 1)[1] > 0:
            raise HypothesisError(f"f' <= 0 at t = {float(t)!r}; T needs an increasing function")
    v, d1, d2 = _anchor_data(f, t0)
    return TransformModel(f, t0, "T", v, d1, d2)


def transform_S(f, t0: float, check_points: int = CHECK_POINTS) -> TransformModel:
    """``S(t0, f)``; requires ``f'' > 0`` (checked on a grid).

    >>> from matconvex.funcmodel import exponential
    >>> round(transform_S(exponential(), 0.0)(0.0), 12)
    0.666666666667
    """
    t0 = _require_interior(f, t0)
    for t in _grid_of(f, check_points):
        if not f.taylor(float(t), 2)[2] > 0:
            raise HypothesisError(f"f'' <= 0 at t = {float(t)!r}; S needs a strictly convex function")
    v, d1, d2 = _anchor_data(f, t0)
    return TransformModel(f, t0, "S", v, d1, d2)


def _one_minus(a: float, b: float, h: float) -> float:
    # 1 - a*b*h with a single rounding
    return float(1.0 - DD(a) * b * h)


def inverse_T(g: Callable[[float], float], t0: float, f_t0: float, fprime_t0: float, t: float) -> float:
    """Recover ``f(t) = f(t0) - 1 / (g(t) - 1 / (f'(t0) (t - t0)))``.

    Evaluated as ``f(t0) + f'(t0) h / (1 - g(t) f'(t0) h)`` with ``h = t - t0``.
    """
    h = float(t) - float(t0)
    if h == 0.0:
        raise ValueError("inverse transform is undefined at the anchor")
    den = _one_minus(float(g(t)), fprime_t0, h)
    if den == 0.0:
        raise ZeroDivisionError("vanishing denominator in inverse_T")
    return f_t0 + fprime_t0 * h / den


def inverse_S(s_eval: Callable[[float], float], t0: float, f_t0: float, fprime_t0: float,
              half_fsecond_t0: float, t: float) -> float:
    """Recover ``f(t) = f(t0) + f'(t0) h - h / (S(t) - 1 / ([t0,t0,t0]_f h))``.

    Evaluated as ``f(t0) + f'(t0) h + a h^2 / (1 - S(t) a h)`` with
    ``a = [t0, t0, t0]_f`` and ``h = t - t0``; the denominator is formed in
    one rounding, so ``S = 0`` gives ``f(t0) + f'(t0) h + a h^2`` exactly.
    """
    h = float(t) - float(t0)
    if h == 0.0:
        raise ValueError("inverse transform is undefined at the anchor")
    a = half_fsecond_t0
    den = _one_minus(float(s_eval(t)), a, h)
    if den == 0.0:
        raise ZeroDivisionError("vanishing denominator in inverse_S")
    return f_t0 + fprime_t0 * h + a * h * h / den


@dataclass
class RoundTrip:
    kind: str
    anchor: float
    max_relative_error: float
    worst_t: float
    points: int

    def to_dict(self) -> dict:
        return dict(kind=self.kind, anchor=self.anchor, max_relative_error=self.max_relative_error,
                    worst_t=self.worst_t, points=self.points)


def roundtrip(f, t0: float, kind: str = "T", grid: int | Sequence[float] = 64,
              exclusion: float = ROUNDTRIP_EXCLUSION) -> RoundTrip:
    """Compare ``f`` with the inverse of its transform on a grid.

    The error at ``t`` is measured against ``max(|f(t)|, |f(t0)| + |f'(t0) h|)``,
    the size of the terms the inverse adds up.
    """
    model = transform_T(f, t0) if kind == "T" else transform_S(f, t0)
    ts = _grid_of(f, grid) if isinstance(grid, int) else np.asarray(grid, dtype=float)
    worst, worst_t, count = 0.0, float("nan"), 0
    for t in ts:
        t = float(t)
        if abs(t - model.anchor) < exclusion * max(1.0, abs(model.anchor)):
            continue
        if kind == "T":
            rec = inverse_T(model, model.anchor, model.f_t0, model.fprime_t0, t)
        else:
            rec = inverse_S(model, model.anchor, model.f_t0, model.fprime_t0, model.second_t0, t)
        ref = float(f(t))
        h = t - model.anchor
        scale = max(abs(ref), abs(model.f_t0) + abs(model.fprime_t0 * h), 1e-300)
        err = abs(rec - ref) / scale
        count += 1
        if err > worst or worst_t != worst_t:
            worst, worst_t = err, t
    return RoundTrip(kind, model.anchor, worst, worst_t, count)


def connection_check(f, t0: float, grid: int | Sequence[float] = 64) -> float:
    """``max |S(t0, f)(t) - T(t0, d_{t0})(t)|`` over the grid.

    Raises
    ------
    HypothesisError
        If ``d_{t0}' = [t0, t, t]_f`` is not positive on the grid.
    """
    s = transform_S(f, t0)
    d = difference_quotient(f, t0)
    ts = _grid_of(f, grid) if isinstance(grid, int) else np.asarray(grid, dtype=float)
    for t in ts:
        if not divided_difference(f, (s.anchor, float(t), float(t))) > 0:
            raise HypothesisError(f"d' <= 0 at t = {float(t)!r}")
    td = transform_T(d, s.anchor, check_points=0)
    return max(abs(s(float(t)) - td(float(t))) for t in ts)


# ---------------------------------------------------------------------------
# Determinant identities
# ---------------------------------------------------------------------------

@dataclass
class SylvesterResult:
    B: np.ndarray
    detA: float
    detB: float
    residual: float

    def to_dict(self) -> dict:
        return dict(B=self.B.tolist(), detA=self.detA, detB=self.detB, residual=self.residual)


def sylvester_reduce(a) -> SylvesterResult:
    """``b_ij = a00 a_ij - a_i0 a_0j`` and the check ``det B = a00^(k-1) det A``.

    The residual is ``|det B - a00^(k-1) det A|`` divided by the larger of
    the two sides (or by the Hadamard bound of ``B`` when both vanish).

    >>> sylvester_reduce(np.eye(3)).detB
    1.0
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
        raise ValueError("need a square matrix of size at least 2")
    k = a.shape[0] - 1
    b = a[0, 0] * a[1:, 1:] - np.outer(a[1:, 0], a[0, 1:])
    det_a = lu_det(a)
    det_b = lu_det(b)
    rhs = a[0, 0] ** (k - 1) * det_a
    hadamard = float(np.prod(np.linalg.norm(b, axis=1)))
    denom = max(abs(det_b), abs(rhs), 1e-300 + 1e-15 * hadamard)
    return SylvesterResult(b, float(det_a), float(det_b), abs(det_b - rhs) / denom)


@dataclass
class SPickIdentity:
    lhs: float
    rhs: float
    residual: float
    direct_lhs: float
    k: int

    def to_dict(self) -> dict:
        return dict(lhs=self.lhs, rhs=self.rhs, residual=self.residual, direct_lhs=self.direct_lhs, k=self.k)


def s_pick_determinant_identity_check(f, t0: float, nodes: Sequence[float],
                                      min_separation: float = 1e-12) -> SPickIdentity:
    """Pick determinant of ``S(t0, f)`` against the bordered Kraus determinant of ``f``.

    ``lhs`` is ``det([t_i, t_j]_S)`` with entries from the closed form in
    ``d = d_{t0}``::

        [t_i, t_j]_S = (a00 [t_i, t_j]_d - [t_i, t0]_d [t_j, t0]_d)
                       / (a00 (d(t_i) - d(t0)) (d(t_j) - d(t0))),   a00 = [t0, t0]_d

    and ``rhs`` is ``det([t0, t_i, t_j]_f)_{i,j=0..k} / (a00 prod (d(t_j) - d(t0))^2)``.
    Both sides are evaluated in extended precision; ``direct_lhs`` is the
    double-precision determinant of the Pick matrix of the ``S`` evaluator.
    """
    t0 = _require_interior(f, t0)
    ts = [float(x) for x in nodes]
    pts = [t0] + ts
    scale = max(1.0, max(abs(x) for x in pts))
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) <= min_separation * scale:
                raise ValueError(f"nodes {pts[i]!r} and {pts[j]!r} coincide")
    k = len(ts)
    ext = "extended"
    d0 = divided_difference_value(f, (t0, t0), ext)
    a00 = divided_difference_value(f, (t0, t0, t0), ext)
    d = [divided_difference_value(f, (t0, x), ext) for x in ts]
    delta = [di - d0 for di in d]

    def dq(i: int, j: int):
        # [t_i, t_j]_d from values of d, or its derivative on the diagonal
        if i == j:
            return divided_difference_value(f, (t0, ts[i], ts[i]), ext)
        return (d[i] - d[j]) / (DD(ts[i]) - ts[j])

    border = [(d[i] - d0) / (DD(ts[i]) - t0) for i in range(k)]
    lemma = [[(a00 * dq(i, j) - border[i] * border[j]) / (a00 * delta[i] * delta[j]) for j in range(k)]
             for i in range(k)]
    lhs = _generic_lu_det(lemma)
    kraus = [[divided_difference_value(f, (t0, pts[i], pts[j]), ext) for j in range(k + 1)] for i in range(k + 1)]
    denom = a00
    for x in delta:
        denom = denom * x * x
    if float(denom) == 0.0:
        raise ZeroDivisionError("denominator underflow in the S-Pick identity")
    rhs = _generic_lu_det(kraus) / denom
    hadamard = math.prod(math.sqrt(sum(float(x) ** 2 for x in row)) for row in kraus) / abs(float(denom))
    diff = abs(float(lhs - rhs))
    floor = DETERMINANT_NOISE_FLOOR * hadamard
    residual = 0.0 if diff == 0.0 else diff / max(abs(float(lhs)), abs(float(rhs)), floor)
    s = transform_S(f, t0, check_points=0)
    direct = np.array([[divided_difference(s, (ts[i], ts[j])) for j in range(k)] for i in range(k)])
    return SPickIdentity(float(lhs), float(rhs), residual, float(np.linalg.det(direct)), k)


# ---------------------------------------------------------------------------
# Order audit of the S transform
# ---------------------------------------------------------------------------

def audit_anchors(interval: Interval, count: int, seed: int) -> list[float]:
    """``count - 3`` seeded uniform anchors, the midpoint, and two anchors 1% from the ends."""
    lo, hi = interval.sampling_window()
    w = hi - lo
    rng = np.random.default_rng([seed, 0x5A])
    uniform = [float(x) for x in rng.uniform(lo + 1e-3 * w, hi - 1e-3 * w, max(0, count - 3))]
    return [0.5 * (lo + hi), lo + 0.01 * w, hi - 0.01 * w] + uniform


@dataclass
class TheoremAudit:
    function: str
    interval: str
    order: int
    f_in_K_next: str
    S_in_P_n_for_all_t0: str
    anchors_checked: int
    criterion_certificate: Optional[dict]
    s_certificate: Optional[dict]

    @property
    def consistent(self) -> bool:
        return (self.f_in_K_next == "pass") == (self.S_in_P_n_for_all_t0 == "pass")

    def to_dict(self) -> dict:
        return {
            "function": self.function,
            "interval": self.interval,
            "order": self.order,
            "f_in_K_next": self.f_in_K_next,
            "S_in_P_n_for_all_t0": self.S_in_P_n_for_all_t0,
            "consistent": self.consistent,
            "anchors_checked": self.anchors_checked,
            "criterion_certificate": self.criterion_certificate,
            "s_certificate": self.s_certificate,
            "order_one": self.order == 1,
        }


def theorem_roundtrip_audit(f, interval: Interval, n: int, cfg: Optional[SamplerConfig] = None,
                            anchors: int = 50) -> TheoremAudit:
    """Check that ``f`` in ``K_{n+1}`` agrees with ``S(t0, f)`` in ``P_n`` for all anchors.

    The convexity side samples the order ``n + 1`` Kraus criterion; the
    transform side samples the order ``n`` Pick criterion of ``S(t0, f)`` at
    each anchor and stops at the first failing anchor.
    """
    cfg = cfg or SamplerConfig()
    if n < 1:
        raise ValueError("order n must be at least 1")
    for t in interval.grid(CHECK_POINTS):
        if not f.taylor(float(t), 2)[2] > 0:
            raise HypothesisError(f"f'' <= 0 at t = {float(t)!r}")
    crit = test_n_convex(f, interval, n + 1, cfg)
    verdict_s, cert, checked = "pass", None, 0
    for t0 in audit_anchors(interval, anchors, cfg.seed):
        s = TransformModel(f, t0, "S", *_anchor_data(f, t0))
        rep = test_n_monotone(s, interval, n, cfg)
        checked += 1
        if rep.verdict == "fail":
            verdict_s = "fail"
            cert = dict(anchor=t0, **rep.counterexample)
            break
    from .classify import function_label

    return TheoremAudit(function_label(f), interval.to_spec(), n,
                        "fail" if crit.verdict == "fail" else "pass", verdict_s, checked,
                        crit.counterexample, cert)


__all__ = [
    "TransformModel", "transform_T", "transform_S", "difference_quotient", "inverse_T", "inverse_S",
    "roundtrip", "RoundTrip", "connection_check", "sylvester_reduce", "SylvesterResult",
    "s_pick_determinant_identity_check", "SPickIdentity", "theorem_roundtrip_audit", "TheoremAudit",
    "audit_anchors",
]
