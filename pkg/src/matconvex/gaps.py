"""Explicit gap polynomials between consecutive matrix-convexity classes.

The base polynomials are ``p(t) = sum_k b_k t^k`` with ``b_k = (-1)^(k-1)/k``
(concave kind) or ``b_k = 1/k`` (convex kind), ``k = 1..m``. At the origin
``K_n(p; 0) = (b_{i+j})`` and ``M_n(p; 0) = (b_{i+j-1})`` are Hankel
matrices of the moments ``b_k`` of ``dt`` on ``[-1, 0]`` or ``[0, 1]``, so
``M_n`` is positive definite and ``K_n`` is negative (positive) definite.
Continuity then gives a window ``(-alpha, alpha)`` on which the signs
persist, and an affine rescaling moves that window onto any finite interval.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .funcmodel import (
    FunctionModel,
    Interval,
    compose_affine,
    compose_mobius,
    parse_interval,
)
from .specmat import DEFAULT_TOLERANCE, derivative_matrix_Kn, derivative_matrix_Mn

KINDS = ("concave", "convex")
ALPHA_GRID = 256
ALPHA_RESOLUTION = 1e-3
ALPHA_SHRINK = 0.9
ALPHA_START = 0.125
ALPHA_CAP = 1e6
HALFLINE_MARGIN = 1e-6
HALFLINE_MAP = (1.0, 0.0, 1.0, 1.0)  # t -> t / (1 + t)


def gap_coefficients(m: int, kind: str) -> list[Fraction]:
    """Exact ``b_0..b_m`` with ``b_0 = 0``.

    >>> [str(b) for b in gap_coefficients(4, "concave")]
    ['0', '1', '-1/2', '1/3', '-1/4']
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if m < 1:
        raise ValueError("degree must be at least 1")
    sign = (lambda k: (-1) ** (k - 1)) if kind == "concave" else (lambda k: 1)
    return [Fraction(0)] + [Fraction(sign(k), k) for k in range(1, m + 1)]


def hankel_exact(coefficients: Sequence[Fraction], n: int, offset: int) -> list[list[Fraction]]:
    """``(b_{i+j+offset})_{i,j=1..n}`` in rational arithmetic (zero past the degree)."""
    b = list(coefficients)
    get = lambda k: b[k] if k < len(b) else Fraction(0)
    return [[get(i + j + offset) for j in range(1, n + 1)] for i in range(1, n + 1)]


def equilibrated_definite(a: np.ndarray, sign: int, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Definiteness of ``sign * a`` after symmetric diagonal scaling to unit diagonal.

    The congruence ``D a D`` preserves definiteness, and removes the
    ``(alpha / c)^(i+j)`` scaling that rescaled gap polynomials carry.
    """
    a = sign * np.asarray(a, dtype=float)
    d = np.diag(a)
    if not np.all(d > 0):
        return False
    w = 1.0 / np.sqrt(d)
    return bool(np.linalg.eigvalsh(a * np.outer(w, w))[0] > tol)


def _definite_at(p: FunctionModel, t: float, n: int, kind: str, tol: float) -> bool:
    if not equilibrated_definite(derivative_matrix_Mn(p, t, n, tol).matrix, +1, tol):
        return False
    return equilibrated_definite(derivative_matrix_Kn(p, t, n, tol).matrix, -1 if kind == "concave" else +1, tol)


def _certified(p: FunctionModel, alpha: float, n: int, kind: str, tol: float) -> bool:
    return all(_definite_at(p, float(t), n, kind, tol) for t in np.linspace(-alpha, alpha, ALPHA_GRID))


def find_alpha(p: FunctionModel, n: int, kind: str, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """Largest ``alpha`` with grid-certified definiteness on ``[-alpha, alpha]``.

    ``M_n(p; t)`` must be positive definite and ``K_n(p; t)`` negative
    (concave kind) or positive (convex kind) definite at 256 equispaced
    points. The search doubles from ``1/8`` and then bisects to relative
    resolution ``1e-3``. The raw value is returned; callers apply a safety
    shrink before use.

    Raises
    ------
    ValueError
        If the definiteness already fails at ``t = 0``.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if not _definite_at(p, 0.0, n, kind, tolerance):
        raise ValueError("derivative matrices are not definite at 0; coefficients do not define a gap polynomial")
    lo = ALPHA_START
    while not _certified(p, lo, n, kind, tolerance):
        lo *= 0.5
        if lo < 1e-12:
            raise ValueError("no certified window around 0")
    hi = None
    while lo < ALPHA_CAP:
        if _certified(p, 2 * lo, n, kind, tolerance):
            lo *= 2
        else:
            hi = 2 * lo
            break
    if hi is None:
        return lo
    while hi - lo > ALPHA_RESOLUTION * lo:
        mid = 0.5 * (lo + hi)
        if _certified(p, mid, n, kind, tolerance):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class GapPolynomial:
    """Rescaled gap polynomial ``f(t) = p(alpha (t - t0) / c)`` on ``certified_interval``."""

    base_coefficients: tuple
    degree: int
    kind: str
    target_order: int
    alpha_raw: float
    alpha: float
    center: float
    half_width: float
    certified_interval: Interval
    model: FunctionModel

    @property
    def scaling(self) -> float:
        return self.alpha / self.half_width

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "target_order": self.target_order,
            "degree": self.degree,
            "coefficients": [str(b) for b in self.base_coefficients[1:]],
            "alpha_raw": self.alpha_raw,
            "alpha": self.alpha,
            "center": self.center,
            "half_width": self.half_width,
            "certified_interval": self.certified_interval.to_spec(),
            "model": self.model.to_spec(),
        }


def base_polynomial(m: int, kind: str) -> FunctionModel:
    return FunctionModel("polynomial", tuple(float(b) for b in gap_coefficients(m, kind)))


def build_gap_polynomial(n: int, m: int, interval: Interval | str | None, kind: str = "concave",
                         tolerance: float = DEFAULT_TOLERANCE) -> GapPolynomial:
    """Gap polynomial of degree ``m >= 2n`` certified at order ``n`` on ``interval``.

    The certified window ``(-alpha, alpha)`` of the base polynomial is shrunk
    by 10% and mapped affinely onto ``interval = (t0 - c, t0 + c)``. With
    ``interval=None`` the window itself is used, so the model is ``p`` unscaled.
    Sampled checks with an absolute tolerance floor see the violations of
    order ``n + 1`` best there, since rescaling shrinks every divided
    difference of order ``k`` by ``(alpha / c)^k``.

    Examples
    --------
    >>> g = build_gap_polynomial(1, 2, "(0,2)")
    >>> [str(b) for b in g.base_coefficients]
    ['0', '1', '-1/2']
    """
    if isinstance(interval, str):
        interval = parse_interval(interval)
    if interval is not None and not interval.is_finite:
        raise ValueError(f"gap polynomials need a finite interval, got {interval}")
    if n < 1:
        raise ValueError("order n must be at least 1")
    if m < 2 * n:
        raise ValueError(f"degree m = {m} must be at least 2n = {2 * n}")
    coeffs = gap_coefficients(m, kind)
    p = base_polynomial(m, kind)
    alpha_raw = find_alpha(p, n, kind, tolerance)
    alpha = ALPHA_SHRINK * alpha_raw
    if interval is None:
        interval = Interval(-alpha, alpha, False, False)
    t0 = interval.midpoint
    c = 0.5 * interval.width
    scale = alpha / c
    pre = (scale, -scale * t0, 0.0, 1.0)
    model = FunctionModel("polynomial", p.parameters, pre, None, interval)
    return GapPolynomial(tuple(coeffs), m, kind, n, alpha_raw, alpha, t0, c, interval, model)


def certify(gap: GapPolynomial, points: int = 64, tolerance: float = DEFAULT_TOLERANCE) -> bool:
    """Recheck the definiteness invariant of ``gap.model`` at ``points`` grid points."""
    return all(_definite_at(gap.model, float(t), gap.target_order, gap.kind, tolerance)
               for t in gap.certified_interval.grid(points))


@dataclass(frozen=True)
class ExclusionMinor:
    m: int
    n: int
    row_indices: tuple
    minor_matrix: tuple
    determinant: Fraction

    @property
    def expected(self) -> Fraction:
        return -self.minor_matrix[0][1] ** 2

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "row_indices": list(self.row_indices),
            "minor_matrix": [[str(x) for x in row] for row in self.minor_matrix],
            "determinant": str(self.determinant),
        }


def exclusion_rows(m: int) -> tuple[int, int]:
    """1-based rows of ``K_n`` isolating the top coefficient of a degree-``m`` polynomial."""
    l, odd = divmod(m, 2)
    return (l, l + 1) if odd else (l - 1, l + 1)


def degree_exclusion_minor(m: int, n: int, coefficients: Sequence) -> ExclusionMinor:
    """Principal 2x2 minor of ``K_n(p; 0)`` with determinant ``-b_m^2``.

    ``coefficients`` are ``b_0..b_m`` (Taylor coefficients at the centre);
    they are converted to exact rationals.

    >>> r = degree_exclusion_minor(3, 2, [0, 1, Fraction(-1, 2), Fraction(1, 3)])
    >>> r.row_indices, str(r.determinant)
    ((1, 2), '-1/9')
    """
    if n < 2:
        raise ValueError("order n must be at least 2")
    if not 3 <= m <= 2 * n - 1:
        raise ValueError(f"degree m must lie in 3..{2 * n - 1}, got {m}")
    b = [Fraction(x) for x in coefficients]
    if len(b) < m + 1 or b[m] == 0:
        raise ValueError(f"polynomial must have exact degree {m}")
    if any(x != 0 for x in b[m + 1:]):
        raise ValueError(f"polynomial has degree above {m}")
    k = hankel_exact(b[: m + 1], n, 0)
    i, j = exclusion_rows(m)
    minor = ((k[i - 1][i - 1], k[i - 1][j - 1]), (k[j - 1][i - 1], k[j - 1][j - 1]))
    det = minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0]
    return ExclusionMinor(m, n, (i, j), minor, det)


def exclusion_determinant_at(f: FunctionModel, t: float, n: int) -> float:
    """Determinant of the ``(n-1, n+1)`` minor of ``K_{n+1}(f; t)`` (degree-``2n`` exclusion)."""
    c = f.taylor(float(t), 2 * n + 2)
    i, j = n - 1, n + 1
    return float(c[2 * i] * c[2 * j] - c[i + j] ** 2)


def halfline_shift(f: FunctionModel, interval: Interval, points: int = 4096) -> float:
    """Constant making ``f`` at least ``1e-6`` on a grid of ``interval``."""
    ts = np.linspace(interval.lower, interval.upper, points)
    ts = [float(t) for t in ts if interval.contains(float(t))]
    low = min(float(f(t)) for t in ts)
    return -low + HALFLINE_MARGIN


def build_halfline_gap(n: int, tolerance: float = DEFAULT_TOLERANCE) -> tuple[FunctionModel, GapPolynomial]:
    """``g_n(t) = f_n(t / (1 + t)) + shift`` on ``[0, inf)``.

    ``f_n`` is the degree-``2n`` concave-kind gap polynomial certified on
    ``[0, 1)``, shifted to be non-negative.
    """
    if n < 1:
        raise ValueError("order n must be at least 1")
    unit = Interval(0.0, 1.0, True, False)
    gap = build_gap_polynomial(n, 2 * n, unit, "concave", tolerance)
    shifted = compose_affine(gap.model, 1.0, halfline_shift(gap.model, unit))
    g = compose_mobius(shifted, HALFLINE_MAP, Interval(0.0, math.inf, True, False))
    return g, gap


__all__ = [
    "gap_coefficients", "hankel_exact", "find_alpha", "GapPolynomial", "build_gap_polynomial",
    "certify", "ExclusionMinor", "degree_exclusion_minor", "exclusion_rows",
    "exclusion_determinant_at", "build_halfline_gap", "base_polynomial", "equilibrated_definite",
]
