"""Divided differences with repeated nodes.

The engine runs the classical Newton recurrence on the sorted, coalesced
node list. Entries over a block of coincident nodes are seeded with Taylor
coefficients ``f^(k)(x) / k!``. Nodes closer than the merge threshold are
coalesced first, because the recurrence carries no correct digits there.

Precision modes
---------------
``"double"``
    plain float recurrence.
``"extended"``
    the recurrence, the function values and the node gaps are carried in
    double-double arithmetic.
``"auto"`` (default)
    extended when the order is at least 5, or when the smallest relative
    node gap ``g`` satisfies ``g**order < 1e-3``.

Any object with a ``taylor(x, k)`` method returning ``[f(x), f'(x), ...,
f^(k)(x)/k!]`` and a ``domain`` attribute can be differenced, not only
:class:`~matconvex.funcmodel.FunctionModel`.
"""
from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .ddouble import DD
from .funcmodel import Interval

PRECISIONS = ("double", "extended", "auto")
MERGE_RTOL = 1e-7
MAX_QUADRATURE_ORDER = 6

_precision: contextvars.ContextVar[str] = contextvars.ContextVar("matconvex_precision", default="auto")


def get_precision() -> str:
    return _precision.get()


def set_precision(mode: str) -> None:
    if mode not in PRECISIONS:
        raise ValueError(f"precision must be one of {PRECISIONS}, got {mode!r}")
    _precision.set(mode)


@contextlib.contextmanager
def precision(mode: str):
    """Temporarily switch the precision mode of the engine."""
    if mode not in PRECISIONS:
        raise ValueError(f"precision must be one of {PRECISIONS}, got {mode!r}")
    token = _precision.set(mode)
    try:
        yield
    finally:
        _precision.reset(token)


def merge_threshold(x: float) -> float:
    return MERGE_RTOL * max(1.0, abs(x))


@dataclass(frozen=True)
class NodeSet:
    """Ordered multiset of nodes, optionally tied to an interval."""

    nodes: tuple
    interval: Optional[Interval] = None

    def __post_init__(self):
        nodes = tuple(float(x) for x in self.nodes)
        if not nodes:
            raise ValueError("a node set needs at least one node")
        if any(not math.isfinite(x) for x in nodes):
            raise ValueError(f"non-finite node in {nodes}")
        object.__setattr__(self, "nodes", nodes)
        if self.interval is not None:
            for x in nodes:
                if not self.interval.contains(x):
                    raise ValueError(f"node {x} lies outside {self.interval}")

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    @property
    def order(self) -> int:
        return len(self.nodes) - 1

    def canonical(self) -> list[tuple[float, int]]:
        """Sorted ``(node, multiplicity)`` pairs after coalescing."""
        return coalesce(self.nodes)


def _as_nodes(nodes) -> tuple:
    if isinstance(nodes, NodeSet):
        return nodes.nodes
    return tuple(float(x) for x in nodes)


def coalesce(nodes: Iterable[float]) -> list[tuple[float, int]]:
    xs = sorted(float(x) for x in nodes)
    groups: list[list] = []
    for x in xs:
        if groups and x - groups[-1][0] <= merge_threshold(groups[-1][0]):
            groups[-1][1] += 1
        else:
            groups.append([x, 1])
    return [(x, m) for x, m in groups]


def _wants_extended(mode: str, order: int, groups: list[tuple[float, int]]) -> bool:
    if mode == "extended":
        return True
    if mode == "double" or order < 2:
        return False
    if order >= 5:
        return True
    if len(groups) < 2:
        return False
    gaps = [
        (groups[i + 1][0] - groups[i][0]) / max(1.0, abs(groups[i][0]), abs(groups[i + 1][0]))
        for i in range(len(groups) - 1)
    ]
    return min(gaps) ** order < 1e-3


def _newton(f, groups: list[tuple[float, int]], extended: bool, keep_table: bool = False):
    z: list[float] = []
    seeds: list[list] = []
    for x, m in groups:
        coeffs = f.taylor(DD(x) if extended else x, m - 1)
        for _ in range(m):
            z.append(x)
            seeds.append(coeffs)
    col = [s[0] for s in seeds]
    table = [list(col)] if keep_table else None
    n = len(z)
    for j in range(1, n):
        nxt = []
        for i in range(n - j):
            if z[i + j] == z[i]:
                nxt.append(seeds[i][j])
            else:
                gap = (DD(z[i + j]) - z[i]) if extended else (z[i + j] - z[i])
                nxt.append((col[i + 1] - col[i]) / gap)
        col = nxt
        if keep_table:
            table.append(list(col))
    return col[0], z, table


def divided_difference_value(f, nodes, mode: Optional[str] = None):
    """Top divided difference in the working number type (float or DD)."""
    groups = coalesce(_as_nodes(nodes))
    order = sum(m for _, m in groups) - 1
    extended = _wants_extended(mode or get_precision(), order, groups)
    value, _, _ = _newton(f, groups, extended)
    return value


def divided_difference(f, nodes, mode: Optional[str] = None) -> float:
    """``[x_0, ..., x_n]_f`` for nodes with arbitrary repetitions.

    The result does not depend on the node order. ``mode`` overrides the
    engine precision for this call.

    >>> from matconvex.funcmodel import polynomial
    >>> divided_difference(polynomial([0, 0, 1]), [0.0, 1.0, 2.0])
    1.0
    """
    return float(divided_difference_value(f, nodes, mode))


@dataclass(frozen=True)
class DDTable:
    """Triangular table: ``columns[j][i]`` is ``[z_i, ..., z_{i+j}]``."""

    nodes: tuple
    columns: tuple
    extended: bool

    @property
    def top(self) -> float:
        return self.columns[-1][0]

    def entry(self, i: int, j: int) -> float:
        return self.columns[j][i]

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "extended_precision": self.extended,
            "columns": [list(c) for c in self.columns],
            "value": self.top,
        }


def dd_table(f, nodes, mode: Optional[str] = None) -> DDTable:
    groups = coalesce(_as_nodes(nodes))
    order = sum(m for _, m in groups) - 1
    extended = _wants_extended(mode or get_precision(), order, groups)
    _, z, table = _newton(f, groups, extended, keep_table=True)
    cols = tuple(tuple(float(v) for v in c) for c in table)
    return DDTable(tuple(z), cols, extended)


# ---------------------------------------------------------------------------
# Hermite representation
# ---------------------------------------------------------------------------

def _gauss01(q: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(q)
    return 0.5 * (x + 1.0), 0.5 * w


def hermite_simplex_quadrature(f, nodes, rule_order: int = 16) -> float:
    """Iterated integral of ``f^(n)`` over the standard simplex.

    Evaluates the Hermite representation of ``[x_0, ..., x_n]_f`` with a
    Gauss-Legendre rule of ``rule_order`` points on each simplex level. The
    simplex ``0 <= t_n <= ... <= t_1 <= 1`` is parametrised by collapsed
    coordinates ``t_k = u_1 u_2 ... u_k`` so every level is a tensor rule on
    ``[0, 1]``.
    """
    x = np.asarray(_as_nodes(nodes), dtype=float)
    n = len(x) - 1
    if rule_order < 2:
        raise ValueError("rule_order must be at least 2")
    if n > MAX_QUADRATURE_ORDER:
        raise ValueError(f"quadrature depth {n} exceeds the bound {MAX_QUADRATURE_ORDER}")
    if n == 0:
        return float(f.taylor(float(x[0]), 0)[0])
    u, w = _gauss01(rule_order)
    fact = float(math.factorial(n))

    if n > 1:
        grids = [g.ravel() for g in np.meshgrid(*([u] * (n - 1)), indexing="ij")]
        wgrid = np.ones(grids[0].size)
        for wg in np.meshgrid(*([w] * (n - 1)), indexing="ij"):
            wgrid = wgrid * wg.ravel()

    def inner(u1: float, w1: float) -> float:
        if n == 1:
            ts = [np.array([u1])]
            weight = np.array([w1])
        else:
            ts = [np.full(grids[0].size, u1)]
            weight = w1 * wgrid
            for g in grids:
                weight = weight * ts[-1]
                ts.append(ts[-1] * g)
        point = (1.0 - ts[0]) * x[0]
        for k in range(1, n):
            point = point + (ts[k - 1] - ts[k]) * x[k]
        point = point + ts[-1] * x[n]
        vals = np.asarray(f.taylor(point, n)[n], dtype=float) * fact
        return math.fsum(vals * weight)

    return math.fsum(inner(u1, w1) for u1, w1 in zip(u, w))


def reciprocal_closed_form(nodes) -> float:
    """``[x_0, ..., x_n]`` of ``1/t``, equal to ``(-1)^n / (x_0 ... x_n)``."""
    xs = _as_nodes(nodes)
    if any(x <= 0.0 for x in xs):
        raise ValueError(f"reciprocal closed form needs positive nodes, got {xs}")
    n = len(xs) - 1
    prod = 1.0
    for x in xs:
        prod /= x
    return prod if n % 2 == 0 else -prod


# ---------------------------------------------------------------------------
# Geometric-mean inequality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeometricMeanCheck:
    lhs: float
    rhs: float
    satisfied: bool
    direction: str  # "convex", "concave" or "affine" (shape of c = f^(n)^(-1/(n+1)))
    margin: float

    def to_dict(self) -> dict:
        return dict(lhs=self.lhs, rhs=self.rhs, satisfied=self.satisfied,
                    direction=self.direction, margin=self.margin)


def _curvature_direction(f, n: int, points: Sequence[float]) -> str:
    # sign of c'' for c = g^(-1/(n+1)), g = f^(n):  sign(((n+2)/(n+1)) g'^2 - g g'')
    ratio = (n + 2) / (n + 1)
    pos = neg = False
    for t in points:
        tc = f.taylor(float(t), n + 2)
        g = tc[n] * math.factorial(n)
        g1 = tc[n + 1] * math.factorial(n + 1)
        g2 = tc[n + 2] * math.factorial(n + 2)
        if not g > 0.0:
            raise ValueError(f"f^({n}) is not strictly positive at {t} (value {g})")
        expr = ratio * g1 * g1 - g * g2
        band = 1e-12 * (ratio * g1 * g1 + abs(g * g2))
        if expr > band:
            pos = True
        elif expr < -band:
            neg = True
    if pos and neg:
        raise ValueError("direction indeterminate: c changes between convex and concave")
    if pos:
        return "convex"
    if neg:
        return "concave"
    return "affine"


def geometric_mean_bound_check(f, nodes, direction: Optional[str] = None,
                               tolerance: float = 1e-12) -> GeometricMeanCheck:
    """Compare ``[x_0..x_n]_f`` with the geometric mean of confluent differences.

    When ``c = (f^(n))^(-1/(n+1))`` is convex the divided difference
    dominates ``prod_i [x_i, ..., x_i]_f^(1/(n+1))``; when ``c`` is concave
    the inequality reverses. ``direction`` is determined by sampling ``c''``
    over the node hull unless supplied.
    """
    xs = _as_nodes(nodes)
    n = len(xs) - 1
    lo, hi = min(xs), max(xs)
    sample = list(np.linspace(lo, hi, 64)) if hi > lo else [lo]
    sample += list(xs)
    detected = _curvature_direction(f, n, sample)
    if direction is None:
        direction = detected
    elif direction not in ("convex", "concave", "affine"):
        raise ValueError(f"unknown direction {direction!r}")
    lhs = divided_difference(f, xs)
    logs = [math.log(float(f.taylor(x, n)[n])) for x in xs]
    rhs = math.exp(math.fsum(logs) / (n + 1))
    slack = tolerance * max(1.0, abs(rhs))
    diff = lhs - rhs
    if direction == "convex":
        ok, margin = diff >= -slack, diff
    elif direction == "concave":
        ok, margin = diff <= slack, -diff
    else:
        ok, margin = abs(diff) <= slack, -abs(diff)
    return GeometricMeanCheck(lhs, rhs, bool(ok), direction, margin)
