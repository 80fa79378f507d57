"""Smooth real functions on intervals with exact derivatives of every order.

A :class:`FunctionModel` is a closed-form family (polynomial, exponential,
logarithm, reciprocal, power, affine) optionally precomposed with a Möbius
map ``t -> (a t + b) / (c t + d)`` and postcomposed with an affine map
``v -> scale * v + shift``. Derivatives come from truncated Taylor series
arithmetic, so they are exact up to rounding for every order.

All evaluation goes through :meth:`FunctionModel.taylor`, which is generic
in the number type: Python floats, numpy arrays (vectorised evaluation) and
:class:`~matconvex.ddouble.DD` double-double scalars all work.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .ddouble import DD, dd_exp, dd_log

FAMILIES = ("polynomial", "exponential", "logarithm", "reciprocal", "power", "affine")


class DomainError(ValueError):
    """A point lies outside the domain of a function model."""


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------

def _fmt_endpoint(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float
    lower_closed: bool = False
    upper_closed: bool = False

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise ValueError(f"invalid interval: need lower < upper, got {lo}, {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        # infinite endpoints are always open
        if math.isinf(lo):
            object.__setattr__(self, "lower_closed", False)
        if math.isinf(hi):
            object.__setattr__(self, "upper_closed", False)

    @classmethod
    def open(cls, lower: float, upper: float) -> "Interval":
        return cls(lower, upper, False, False)

    @classmethod
    def closed(cls, lower: float, upper: float) -> "Interval":
        return cls(lower, upper, True, True)

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(-math.inf, math.inf)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.lower) and math.isfinite(self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        if not self.is_finite:
            raise ValueError(f"interval {self} has no midpoint")
        return 0.5 * (self.lower + self.upper)

    def contains(self, t) -> bool:
        """Exact membership test; arrays pass only if every entry is inside."""
        if isinstance(t, DD):
            t = t.hi
        t = np.asarray(t, dtype=float)
        lo_ok = (t >= self.lower) if self.lower_closed else (t > self.lower)
        hi_ok = (t <= self.upper) if self.upper_closed else (t < self.upper)
        return bool(np.all(lo_ok & hi_ok))

    def __contains__(self, t) -> bool:
        return self.contains(t)

    def is_subset_of(self, other: "Interval") -> bool:
        if self.lower < other.lower:
            return False
        if self.lower == other.lower and self.lower_closed and not other.lower_closed:
            return False
        if self.upper > other.upper:
            return False
        if self.upper == other.upper and self.upper_closed and not other.upper_closed:
            return False
        return True

    def interior(self) -> "Interval":
        return Interval(self.lower, self.upper, False, False)

    def intersect(self, other: "Interval") -> "Interval":
        if self.lower > other.lower or (self.lower == other.lower and not self.lower_closed):
            lo, lc = self.lower, self.lower_closed
        else:
            lo, lc = other.lower, other.lower_closed
        if self.upper < other.upper or (self.upper == other.upper and not self.upper_closed):
            hi, hc = self.upper, self.upper_closed
        else:
            hi, hc = other.upper, other.upper_closed
        return Interval(lo, hi, lc, hc)

    def sampling_window(self, span: float = 100.0) -> tuple[float, float]:
        """Finite window used when an infinite interval has to be sampled."""
        lo, hi = self.lower, self.upper
        if math.isinf(lo) and math.isinf(hi):
            return -span / 2, span / 2
        if math.isinf(lo):
            return hi - span, hi
        if math.isinf(hi):
            return lo, lo + span
        return lo, hi

    def grid(self, num: int, span: float = 100.0) -> np.ndarray:
        """``num`` equispaced points strictly inside the (window of the) interval."""
        lo, hi = self.sampling_window(span)
        return np.linspace(lo, hi, num + 2)[1:-1]

    def to_spec(self) -> str:
        left = "[" if self.lower_closed else "("
        right = "]" if self.upper_closed else ")"
        return f"{left}{_fmt_endpoint(self.lower)},{_fmt_endpoint(self.upper)}{right}"

    def __str__(self) -> str:
        return self.to_spec()


_INTERVAL_RE = re.compile(r"^\s*([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])\s*$")


def _parse_number(text: str) -> float:
    text = text.strip().lower()
    if text in ("inf", "+inf", "infinity", "oo"):
        return math.inf
    if text in ("-inf", "-infinity", "-oo"):
        return -math.inf
    return float(text)


def parse_interval(spec: str) -> Interval:
    """Parse ``"(l,u)"``, ``"[l,u]"``, ``"[l,inf)"`` and mixed forms."""
    m = _INTERVAL_RE.match(spec)
    if not m:
        raise ValueError(f"cannot parse interval {spec!r}")
    left, lo, hi, right = m.groups()
    try:
        lo_v, hi_v = _parse_number(lo), _parse_number(hi)
    except ValueError as exc:
        raise ValueError(f"cannot parse interval {spec!r}: {exc}") from None
    return Interval(lo_v, hi_v, left == "[", right == "]")


# ---------------------------------------------------------------------------
# Möbius maps
# ---------------------------------------------------------------------------

Mobius = tuple  # (a, b, c, d)

IDENTITY_MAP = (1.0, 0.0, 0.0, 1.0)


def _check_map(m: Sequence[float]) -> tuple[float, float, float, float]:
    if len(m) != 4:
        raise ValueError("a Möbius map needs four coefficients (a, b, c, d)")
    a, b, c, d = (float(x) for x in m)
    if a * d - b * c == 0.0:
        raise ValueError(f"degenerate Möbius map {m}: ad - bc = 0")
    return a, b, c, d


def mobius_apply(m: Sequence[float], t: float) -> float:
    a, b, c, d = m
    if math.isinf(t):
        if c == 0.0:
            return math.copysign(math.inf, t * a / d)
        return a / c
    return (a * t + b) / (c * t + d)


def mobius_compose(outer: Sequence[float], inner: Sequence[float]) -> tuple[float, float, float, float]:
    """Matrix product: ``outer(inner(t))``."""
    a1, b1, c1, d1 = outer
    a2, b2, c2, d2 = inner
    return (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def mobius_inverse(m: Sequence[float]) -> tuple[float, float, float, float]:
    a, b, c, d = m
    return (d, -b, -c, a)


def mobius_image(m: Sequence[float], interval: Interval) -> Interval:
    """Image of an interval under a Möbius map whose pole lies outside it."""
    a, b, c, d = _check_map(m)
    if c != 0.0:
        pole = -d / c
        if interval.lower <= pole <= interval.upper:
            raise DomainError(f"pole {pole} of Möbius map {m} lies in {interval}")
    lo = mobius_apply((a, b, c, d), interval.lower)
    hi = mobius_apply((a, b, c, d), interval.upper)
    lc, hc = interval.lower_closed, interval.upper_closed
    if lo > hi:
        lo, hi, lc, hc = hi, lo, hc, lc
    return Interval(lo, hi, lc and math.isfinite(lo), hc and math.isfinite(hi))


# ---------------------------------------------------------------------------
# Type-generic elementary functions
# ---------------------------------------------------------------------------

def _exp(u):
    if isinstance(u, DD):
        return dd_exp(u)
    if isinstance(u, np.ndarray):
        return np.exp(u)
    return math.exp(u)


def _log(u):
    if isinstance(u, DD):
        return dd_log(u)
    if isinstance(u, np.ndarray):
        return np.log(u)
    return math.log(u)


def _zero_like(u):
    return u * 0.0


def _one_like(u):
    return u * 0.0 + 1.0


def _generalized_binomial(p: float, j: int) -> float:
    out = 1.0
    for i in range(j):
        out *= (p - i) / (i + 1)
    return out


def _family_taylor(family: str, params: tuple, u, k: int) -> list:
    """Taylor coefficients ``f^(j)(u) / j!`` for ``j = 0..k``."""
    if family == "polynomial":
        c = [_zero_like(u) + b for b in params]
        m = len(c) - 1
        out = []
        for i in range(k + 1):
            if i > m:
                out.append(_zero_like(u))
                continue
            for j in range(m - 1, i - 1, -1):
                c[j] = c[j] + u * c[j + 1]
            out.append(c[i])
        return out
    if family == "exponential":
        e = _exp(u)
        out = [e]
        fact = 1.0
        for j in range(1, k + 1):
            fact *= j
            out.append(e / fact)
        return out
    if family == "logarithm":
        out = [_log(u)]
        inv = 1.0 / u
        pw = _one_like(u)
        for j in range(1, k + 1):
            pw = pw * inv
            out.append(pw * ((-1.0) ** (j - 1) / j))
        return out
    if family == "reciprocal":
        inv = 1.0 / u
        out = []
        pw = inv
        for j in range(k + 1):
            out.append(pw * ((-1.0) ** j))
            pw = pw * inv
        return out
    if family == "power":
        p = float(params[0])
        if p.is_integer() and p >= 0:
            coeffs = [0.0] * int(p) + [1.0]
            return _family_taylor("polynomial", tuple(coeffs), u, k)
        base = _exp(_log(u) * p)
        inv = 1.0 / u
        out = []
        pw = _one_like(u)
        for j in range(k + 1):
            out.append(base * pw * _generalized_binomial(p, j))
            pw = pw * inv
        return out
    if family == "affine":
        slope, intercept = params
        out = [u * slope + intercept, _zero_like(u) + slope]
        out += [_zero_like(u) for _ in range(k - 1)]
        return out[: k + 1]
    raise ValueError(f"unknown family {family!r}")


def _mobius_series(m, t, k: int) -> list:
    """Taylor coefficients of ``h -> m(t + h)``."""
    a, b, c, d = m
    if c == 0.0:
        out = [(t * a + b) / d, _zero_like(t) + a / d]
        out += [_zero_like(t) for _ in range(k - 1)]
        return out[: k + 1]
    w = t * c + d
    det = a * d - b * c
    out = [(t * a + b) / w]
    inv_w = 1.0 / w
    pw = inv_w * inv_w * det
    for j in range(1, k + 1):
        out.append(pw)
        pw = pw * inv_w * (-c)
    return out


def _compose_series(outer: list, inner_tail: list, k: int) -> list:
    """Coefficients of ``sum_i outer[i] * delta^i`` with ``delta = sum_j inner_tail[j-1] h^j``."""
    result = [outer[0]] + [_zero_like(outer[0]) for _ in range(k)]
    if k == 0:
        return result
    delta = [_zero_like(outer[0])] + list(inner_tail[:k])
    power = list(delta)
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            result[j] = result[j] + outer[i] * power[j]
        if i < k:
            nxt = [_zero_like(outer[0]) for _ in range(k + 1)]
            for p in range(i, k + 1):
                if isinstance(power[p], float) and power[p] == 0.0:
                    continue
                for q in range(1, k + 1 - p):
                    nxt[p + q] = nxt[p + q] + power[p] * delta[q]
            power = nxt
    return result


# ---------------------------------------------------------------------------
# Function models
# ---------------------------------------------------------------------------

def natural_domain(family: str, params: Sequence[float]) -> Interval:
    if family in ("polynomial", "exponential", "affine"):
        return Interval.real_line()
    if family in ("logarithm", "reciprocal"):
        return Interval(0.0, math.inf)
    if family == "power":
        p = float(params[0])
        if p.is_integer() and p >= 0:
            return Interval.real_line()
        return Interval(0.0, math.inf)
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class FunctionModel:
    """``t -> scale * family(pre_map(t)) + shift`` restricted to ``domain``."""

    family: str
    parameters: tuple = ()
    pre_map: Optional[tuple] = None
    post_affine: Optional[tuple] = None
    domain: Interval = field(default_factory=Interval.real_line)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        params = tuple(float(p) for p in self.parameters)
        if self.family == "polynomial" and not params:
            params = (0.0,)
        if self.family == "power" and len(params) != 1:
            raise ValueError("power family takes exactly one exponent")
        if self.family == "affine" and len(params) != 2:
            raise ValueError("affine family takes (slope, intercept)")
        object.__setattr__(self, "parameters", params)
        if self.pre_map is not None:
            pm = _check_map(self.pre_map)
            object.__setattr__(self, "pre_map", None if pm == IDENTITY_MAP else pm)
        if self.post_affine is not None:
            s, c = (float(x) for x in self.post_affine)
            object.__setattr__(self, "post_affine", None if (s, c) == (1.0, 0.0) else (s, c))
        inner = natural_domain(self.family, params)
        image = self.domain if self.pre_map is None else mobius_image(self.pre_map, self.domain)
        if not image.is_subset_of(inner):
            raise DomainError(
                f"domain {self.domain} maps to {image}, outside the {self.family} domain {inner}"
            )

    # -- evaluation --------------------------------------------------------
    def _check(self, t) -> None:
        if not self.domain.contains(t):
            bad = t
            if isinstance(t, np.ndarray):
                arr = np.asarray(t, dtype=float)
                mask = ~np.array([self.domain.contains(x) for x in arr.ravel()])
                bad = arr.ravel()[mask][0]
            raise DomainError(f"point {float(bad) if not isinstance(bad, DD) else bad.hi!r} "
                              f"is outside the domain {self.domain}")

    def taylor(self, t, k: int) -> list:
        """Taylor coefficients ``f^(j)(t) / j!`` for ``j = 0..k``."""
        if k < 0:
            raise ValueError("derivative order must be non-negative")
        self._check(t)
        if isinstance(t, (int, np.integer)):
            t = float(t)
        elif isinstance(t, (list, tuple)):
            t = np.asarray(t, dtype=float)
        if self.pre_map is None:
            coeffs = _family_taylor(self.family, self.parameters, t, k)
        else:
            m = _mobius_series(self.pre_map, t, k)
            inner = _family_taylor(self.family, self.parameters, m[0], k)
            if self.pre_map[2] == 0.0:
                slope = m[1] if k >= 1 else None
                coeffs = [inner[0]]
                pw = slope
                for j in range(1, k + 1):
                    coeffs.append(inner[j] * pw)
                    pw = pw * slope
            else:
                coeffs = _compose_series(inner, m[1:], k)
        if self.post_affine is not None:
            s, c = self.post_affine
            coeffs = [x * s for x in coeffs]
            coeffs[0] = coeffs[0] + c
        return coeffs

    def __call__(self, t):
        return self.taylor(t, 0)[0]

    def derivative(self, t, k: int):
        return self.taylor(t, k)[k] * float(math.factorial(k))

    # -- construction helpers ---------------------------------------------
    def with_domain(self, domain: Interval) -> "FunctionModel":
        return replace(self, domain=domain)

    def negated(self) -> "FunctionModel":
        return compose_affine(self, -1.0, 0.0)

    # -- serialisation -----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "parameters": list(self.parameters),
            "pre_map": list(self.pre_map) if self.pre_map is not None else None,
            "post_affine": list(self.post_affine) if self.post_affine is not None else None,
            "domain": self.domain.to_spec(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FunctionModel":
        return cls(
            family=data["family"],
            parameters=tuple(data.get("parameters", ())),
            pre_map=tuple(data["pre_map"]) if data.get("pre_map") is not None else None,
            post_affine=tuple(data["post_affine"]) if data.get("post_affine") is not None else None,
            domain=parse_interval(data["domain"]),
        )

    def to_spec(self) -> str:
        base = {
            "polynomial": lambda: "poly:" + ",".join(repr(p) for p in self.parameters),
            "exponential": lambda: "exp",
            "logarithm": lambda: "log",
            "reciprocal": lambda: "recip",
            "power": lambda: f"pow:{self.parameters[0]!r}",
            "affine": lambda: f"lin:{self.parameters[0]!r},{self.parameters[1]!r}",
        }[self.family]()
        if self.pre_map is not None:
            base = "mobius({})@{}".format(",".join(repr(x) for x in self.pre_map), base)
        if self.post_affine is not None:
            base = "affine({})@{}".format(",".join(repr(x) for x in self.post_affine), base)
        return base


def evaluate(f: FunctionModel, t):
    """Value ``f(t)``; raises :class:`DomainError` outside the domain."""
    return f(t)


def eval_derivative(f: FunctionModel, t, k: int):
    """Exact ``k``-th derivative of ``f`` at ``t`` (``k = 0`` is the value)."""
    return f.derivative(t, k)


def compose_mobius(f: FunctionModel, mobius: Sequence[float], new_domain: Interval) -> FunctionModel:
    """Model of ``t -> f((a t + b) / (c t + d))`` on ``new_domain``."""
    m = _check_map(mobius)
    image = mobius_image(m, new_domain)
    if not image.is_subset_of(f.domain):
        raise DomainError(f"Möbius image {image} of {new_domain} escapes the domain {f.domain}")
    pre = m if f.pre_map is None else mobius_compose(f.pre_map, m)
    return FunctionModel(f.family, f.parameters, pre, f.post_affine, new_domain)


def compose_affine(f: FunctionModel, scale: float, shift: float) -> FunctionModel:
    """Model of ``t -> scale * f(t) + shift``."""
    s0, c0 = f.post_affine if f.post_affine is not None else (1.0, 0.0)
    return FunctionModel(f.family, f.parameters, f.pre_map, (scale * s0, scale * c0 + shift), f.domain)


# ---------------------------------------------------------------------------
# Mini-language
# ---------------------------------------------------------------------------

_WRAP_RE = re.compile(r"^\s*(mobius|affine)\s*\(([^)]*)\)\s*@\s*(.+)$", re.IGNORECASE)


def _numbers(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    return [float(x) for x in text.split(",")]


def _parse_base(spec: str) -> FunctionModel:
    head, _, rest = spec.strip().partition(":")
    head = head.strip().lower()
    if head in ("poly", "polynomial"):
        coeffs = _numbers(rest)
        if not coeffs:
            raise ValueError("poly: needs at least one coefficient")
        return FunctionModel("polynomial", tuple(coeffs))
    if rest.strip() and head in ("exp", "log", "recip"):
        raise ValueError(f"{head} takes no parameters")
    if head == "exp":
        return FunctionModel("exponential")
    if head == "log":
        return FunctionModel("logarithm", domain=Interval(0.0, math.inf))
    if head == "recip":
        return FunctionModel("reciprocal", domain=Interval(0.0, math.inf))
    if head in ("pow", "power"):
        (p,) = _numbers(rest)
        return FunctionModel("power", (p,), domain=natural_domain("power", (p,)))
    if head in ("lin", "linear"):
        slope, intercept = _numbers(rest)
        return FunctionModel("affine", (slope, intercept))
    raise ValueError(f"unknown function spec {spec!r}")


def _parse(spec: str) -> FunctionModel:
    m = _WRAP_RE.match(spec)
    if not m:
        return _parse_base(spec)
    kind, args, inner_spec = m.groups()
    inner = _parse(inner_spec)
    nums = _numbers(args)
    if kind.lower() == "affine":
        if len(nums) != 2:
            raise ValueError("affine(s,c) takes two numbers")
        return compose_affine(inner, nums[0], nums[1])
    mob = _check_map(nums)
    # widest interval on which the pullback is defined: preimage of the inner domain
    inv = mobius_inverse(mob)
    try:
        pre_domain = mobius_image(inv, inner.domain)
    except DomainError:
        raise ValueError(
            f"mobius{tuple(nums)} has no interval preimage of {inner.domain}; give an explicit interval"
        ) from None
    return compose_mobius(inner, mob, pre_domain)


def parse_function(spec: str, interval: Optional[Interval | str] = None) -> FunctionModel:
    """Parse the function mini-language, optionally restricting to ``interval``.

    >>> parse_function("poly:0,1,-0.5")(2.0)
    0.0
    >>> parse_function("affine(-1,0)@log", "(0.1,10)").to_spec()
    'affine(-1.0,0.0)@log'
    """
    if isinstance(interval, str):
        interval = parse_interval(interval)
    if interval is None:
        return _parse(spec)
    # parse against natural domains, then restrict; the model checks containment
    m = _WRAP_RE.match(spec)
    if m and m.group(1).lower() == "mobius":
        inner = _parse(m.group(3))
        return compose_mobius(inner, _check_map(_numbers(m.group(2))), interval)
    if m:
        inner = parse_function(m.group(3), interval)
        s, c = _numbers(m.group(2))
        return compose_affine(inner, s, c)
    return _parse_base(spec).with_domain(interval)


# ---------------------------------------------------------------------------
# Reference catalog
# ---------------------------------------------------------------------------

def polynomial(coefficients: Sequence[float], domain: Interval | None = None) -> FunctionModel:
    return FunctionModel("polynomial", tuple(coefficients), domain=domain or Interval.real_line())


def exponential(domain: Interval | None = None) -> FunctionModel:
    return FunctionModel("exponential", domain=domain or Interval.real_line())


def reciprocal(domain: Interval | None = None) -> FunctionModel:
    return FunctionModel("reciprocal", domain=domain or Interval(0.0, math.inf))


def logarithm(domain: Interval | None = None) -> FunctionModel:
    return FunctionModel("logarithm", domain=domain or Interval(0.0, math.inf))


def neg_log(domain: Interval | None = None) -> FunctionModel:
    return compose_affine(logarithm(domain), -1.0, 0.0)


def power(p: float, domain: Interval | None = None) -> FunctionModel:
    return FunctionModel("power", (p,), domain=domain or natural_domain("power", (p,)))


def affine(slope: float, intercept: float = 0.0, domain: Interval | None = None) -> FunctionModel:
    return FunctionModel("affine", (slope, intercept), domain=domain or Interval.real_line())


def catalog() -> dict[str, FunctionModel]:
    """Reference functions with known classification.

    ``square`` is n-convex everywhere for every n, ``reciprocal`` and
    ``neg_log`` are operator convex on the positive half-line, ``cube`` and
    ``quartic`` are convex but not 2-convex on the positive half-line, and
    ``exp`` is convex but nowhere 2-convex. ``p4``/``g4`` are the unscaled
    degree-4 gap polynomials with coefficients ``(-1)^(k-1)/k`` and ``1/k``.
    """
    return {
        "square": polynomial((0.0, 0.0, 1.0)),
        "cube": polynomial((0.0, 0.0, 0.0, 1.0)),
        "quartic": polynomial((0.0, 0.0, 0.0, 0.0, 1.0)),
        "exp": exponential(),
        "neg_log": neg_log(),
        "reciprocal": reciprocal(),
        "p4": polynomial((0.0, 1.0, -1 / 2, 1 / 3, -1 / 4)),
        "g4": polynomial((0.0, 1.0, 1 / 2, 1 / 3, 1 / 4)),
    }
