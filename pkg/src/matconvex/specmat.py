"""Criterion matrices: Pick, Kraus, confluent and derivative (Hankel) matrices.

Every matrix is assembled entry by entry for ``i <= j`` and mirrored, so it
is exactly symmetric. Definiteness comes from a full symmetric
eigendecomposition, with the verdict rule

* ``tau = tolerance * max(1, ||A||_F)``
* ``positive_definite`` if ``lambda_min > tau``
* ``positive_semidefinite`` if ``-tau <= lambda_min <= tau``
  (``indeterminate`` instead when ``strict=True``)
* ``indefinite`` if ``lambda_min < -tau``
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .ddouble import DD
from .divdiff import divided_difference, divided_difference_value, get_precision, merge_threshold

DEFAULT_TOLERANCE = 1e-9
VERDICTS = ("positive_definite", "positive_semidefinite", "indefinite", "indeterminate")
MIN_FACTORIZATION_GAP = 1e-6
# Kraus blocks of low-degree polynomials are exactly singular; in extended
# precision both sides then come out as noise below ~1e-30 of the Hadamard bound.
DETERMINANT_NOISE_FLOOR = 1e-22


def _verdict(eigenvalues: np.ndarray, fro: float, tolerance: float, strict: bool) -> str:
    tau = tolerance * max(1.0, fro)
    lam = float(eigenvalues[0])
    if lam > tau:
        return "positive_definite"
    if lam < -tau:
        return "indefinite"
    return "indeterminate" if strict else "positive_semidefinite"


def psd_verdict(matrix, tolerance: float = DEFAULT_TOLERANCE, strict: bool = False) -> str:
    """Tolerance-qualified definiteness verdict of a symmetric matrix."""
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    eig = np.linalg.eigvalsh(a) if a.size else np.zeros(0)
    if not eig.size:
        return "positive_semidefinite"
    return _verdict(eig, float(np.linalg.norm(a)), tolerance, strict)


@dataclass(frozen=True)
class SymmetricMatrixReport:
    kind: str
    matrix: np.ndarray
    eigenvalues: tuple
    min_eigenvalue: float
    frobenius_norm: float
    verdict: str
    tolerance: float
    nodes: tuple = ()
    s: Optional[float] = None

    @property
    def scale(self) -> float:
        return max(1.0, self.frobenius_norm)

    @property
    def is_psd(self) -> bool:
        return self.verdict in ("positive_definite", "positive_semidefinite", "indeterminate")

    @property
    def normalized_min_eigenvalue(self) -> float:
        return self.min_eigenvalue / self.scale

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "nodes": list(self.nodes),
            "s": self.s,
            "entries": self.matrix.tolist(),
            "eigenvalues": list(self.eigenvalues),
            "min_eigenvalue": self.min_eigenvalue,
            "frobenius_norm": self.frobenius_norm,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
        }


def matrix_report(kind: str, matrix, tolerance: float = DEFAULT_TOLERANCE, strict: bool = False,
                  nodes: Sequence[float] = (), s: Optional[float] = None) -> SymmetricMatrixReport:
    a = np.asarray(matrix, dtype=float)
    if not np.array_equal(a, a.T):
        raise ValueError(f"{kind} matrix is not symmetric")
    eig = np.linalg.eigvalsh(a)
    fro = float(np.linalg.norm(a))
    return SymmetricMatrixReport(
        kind=kind,
        matrix=a,
        eigenvalues=tuple(float(x) for x in eig),
        min_eigenvalue=float(eig[0]),
        frobenius_norm=fro,
        verdict=_verdict(eig, fro, tolerance, strict),
        tolerance=tolerance,
        nodes=tuple(float(x) for x in nodes),
        s=None if s is None else float(s),
    )


def _symmetric(n: int, entry) -> np.ndarray:
    a = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            a[i, j] = a[j, i] = entry(i, j)
    return a


def _distinct(nodes: Sequence[float]) -> list[float]:
    out: list[float] = []
    for x in nodes:
        x = float(x)
        if not any(abs(x - y) <= merge_threshold(y) for y in out):
            out.append(x)
    return out


def pick_matrix(f, nodes, tolerance: float = DEFAULT_TOLERANCE, strict: bool = False) -> SymmetricMatrixReport:
    """Löwner matrix ``([t_i, t_j]_f)`` on the distinct nodes (first-appearance order)."""
    ts = _distinct(nodes)
    if get_precision() == "extended":
        a = _symmetric(len(ts), lambda i, j: divided_difference(f, (ts[i], ts[j])))
    else:
        # first differences are never promoted to extended precision, so one
        # Taylor pair per node reproduces divided_difference exactly
        c = [f.taylor(x, 1) for x in ts]
        a = _symmetric(len(ts), lambda i, j: float(c[i][1]) if i == j
                       else float((c[j][0] - c[i][0]) / (ts[j] - ts[i])) if ts[i] < ts[j]
                       else float((c[i][0] - c[j][0]) / (ts[i] - ts[j])))
    return matrix_report("pick", a, tolerance, strict, ts)


def kraus_matrix(f, nodes, s: float, tolerance: float = DEFAULT_TOLERANCE,
                 strict: bool = False) -> SymmetricMatrixReport:
    """Kraus matrix ``H(s) = ([t_i, s, t_j]_f)``."""
    ts = [float(x) for x in nodes]
    a = _symmetric(len(ts), lambda i, j: divided_difference(f, (ts[i], s, ts[j])))
    return matrix_report("kraus", a, tolerance, strict, ts, s)


# ---------------------------------------------------------------------------
# Determinants
# ---------------------------------------------------------------------------

def _generic_lu_det(rows):
    a = [list(r) for r in rows]
    n = len(a)
    det = a[0][0] * 0.0 + 1.0 if n else 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(float(a[i][k])))
        if float(a[p][k]) == 0.0:
            return a[k][k] * 0.0
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det = det * a[k][k]
        for i in range(k + 1, n):
            factor = a[i][k] / a[k][k]
            for j in range(k + 1, n):
                a[i][j] = a[i][j] - factor * a[k][j]
    return det


def lu_det(matrix):
    """Determinant via partial-pivoted LU on a copy.

    Float input goes through LAPACK; lists of double-double entries use the
    same algorithm in extended arithmetic.
    """
    if isinstance(matrix, np.ndarray) and matrix.dtype != object:
        if matrix.shape[0] == 0:
            return 1.0
        with warnings.catch_warnings():
            # an exactly singular block is a legitimate zero determinant here
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(matrix.copy(), check_finite=True)
        sign = -1.0 if np.count_nonzero(piv != np.arange(len(piv))) % 2 else 1.0
        return float(sign * np.prod(np.diag(lu)))
    return _generic_lu_det(matrix)


def leading_determinants(f, nodes, s: float, mode: Optional[str] = None) -> list[float]:
    """``D_1(s), ..., D_n(s)``: leading principal minors of the Kraus matrix."""
    ts = [float(x) for x in nodes]
    n = len(ts)
    if mode == "extended":
        h = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                h[i][j] = h[j][i] = divided_difference_value(f, (ts[i], s, ts[j]), "extended")
        return [float(_generic_lu_det([row[:r] for row in h[:r]])) for r in range(1, n + 1)]
    h = _symmetric(n, lambda i, j: divided_difference(f, (ts[i], s, ts[j]), mode))
    return [lu_det(h[:r, :r]) for r in range(1, n + 1)]


@dataclass(frozen=True)
class FactorizationRow:
    r: int
    D_r: float
    det_Mr: float
    product_of_squares: float
    residual: float
    resolved: bool = True

    def to_dict(self) -> dict:
        return dict(r=self.r, D_r=self.D_r, det_Mr=self.det_Mr, resolved=self.resolved,
                    product_of_squares=self.product_of_squares, residual=self.residual)


def confluent_matrix(f, nodes, s: float, mode: Optional[str] = None):
    """``M_n`` with ``m_ij = [t_1, ..., t_i, s, t_1, ..., t_j]_f`` (working number type)."""
    ts = [float(x) for x in nodes]
    n = len(ts)
    m = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = divided_difference_value(f, ts[: i + 1] + [s] + ts[: j + 1], mode)
    return m


def confluent_factorization_check(f, nodes, s: float, mode: str = "extended") -> list[FactorizationRow]:
    """Check ``D_r(s) = det M_r * prod_{k<r} prod_{l<=r-k} (t_{k+l} - t_l)^2`` for every ``r``.

    Both sides are computed independently: ``D_r`` from the Kraus matrix of
    second-order differences, the right side from the high-order confluent
    matrix. ``mode`` selects the engine precision (extended by default).

    The residual is ``|D_r - rhs| / max(|D_r|, |rhs|, 1e-22 * hadamard)``
    where ``hadamard`` bounds ``|D_r|``; the floor only matters when the
    Kraus block is singular and both sides are rounding noise. Rows where
    both sides fall under the floor are flagged ``resolved=False``.
    """
    ts = [float(x) for x in nodes]
    n = len(ts)
    scale = max(1.0, max(abs(x) for x in ts + [s]))
    for a in range(n):
        for b in range(a + 1, n):
            if abs(ts[a] - ts[b]) < MIN_FACTORIZATION_GAP * scale:
                raise ValueError(
                    f"nodes {ts[a]} and {ts[b]} are closer than {MIN_FACTORIZATION_GAP}*scale; "
                    "the factorization check needs distinct nodes"
                )
    ext = mode == "extended"
    h = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            h[i][j] = h[j][i] = divided_difference_value(f, (ts[i], s, ts[j]), mode)
    m = confluent_matrix(f, ts, s, mode)
    rows = []
    for r in range(1, n + 1):
        d_r = _generic_lu_det([row[:r] for row in h[:r]])
        det_m = _generic_lu_det([row[:r] for row in m[:r]])
        prod = DD(1.0) if ext else 1.0
        for k in range(1, r):
            for l in range(1, r - k + 1):
                gap = (DD(ts[k + l - 1]) - ts[l - 1]) if ext else ts[k + l - 1] - ts[l - 1]
                prod = prod * gap * gap
        rhs = det_m * prod
        diff = abs(float(d_r - rhs))
        hadamard = math.prod(math.sqrt(sum(float(x) ** 2 for x in row[:r])) for row in h[:r])
        floor = DETERMINANT_NOISE_FLOOR * hadamard
        big = max(abs(float(d_r)), abs(float(rhs)))
        residual = 0.0 if diff == 0.0 else diff / max(big, floor)
        rows.append(FactorizationRow(r, float(d_r), float(det_m), float(prod), residual, big > floor))
    return rows


# ---------------------------------------------------------------------------
# Derivative matrices
# ---------------------------------------------------------------------------

def derivative_matrix_Kn(f, t: float, n: int, tolerance: float = DEFAULT_TOLERANCE,
                         strict: bool = False) -> SymmetricMatrixReport:
    """``K_n(f; t) = (f^(i+j)(t) / (i+j)!)_{i,j=1..n}``."""
    if n < 1:
        raise ValueError("order n must be at least 1")
    c = f.taylor(float(t), 2 * n)
    a = _symmetric(n, lambda i, j: float(c[i + j + 2]))
    return matrix_report("K_n", a, tolerance, strict, (t,))


def derivative_matrix_Mn(f, t: float, n: int, tolerance: float = DEFAULT_TOLERANCE,
                         strict: bool = False) -> SymmetricMatrixReport:
    """``M_n(f; t) = (f^(i+j-1)(t) / (i+j-1)!)_{i,j=1..n}``."""
    if n < 1:
        raise ValueError("order n must be at least 1")
    c = f.taylor(float(t), 2 * n - 1)
    a = _symmetric(n, lambda i, j: float(c[i + j + 1]))
    return matrix_report("M_n", a, tolerance, strict, (t,))


def is_definite(report: SymmetricMatrixReport, sign: int = 1) -> bool:
    """Strict definiteness with the report's tolerance; ``sign=-1`` asks for negative definite."""
    eig = np.asarray(report.eigenvalues)
    tau = report.tolerance * report.scale
    if sign > 0:
        return bool(eig[0] > tau)
    return bool(eig[-1] < -tau)

