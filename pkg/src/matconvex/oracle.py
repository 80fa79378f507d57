"""Definition-level oracle on random Hermitian matrices.

``f(A)`` is formed from the eigendecomposition of ``A``. The defining
inequalities are tested on random pairs: a negative minimum eigenvalue of

* ``lam f(A) + (1 - lam) f(B) - f(lam A + (1 - lam) B)`` (convexity), or
* ``f(A + P) - f(A)`` with ``P >= 0`` (monotonicity)

is a certificate that ``f`` is not matrix convex / monotone of that order.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .funcmodel import DomainError, Interval

PROPERTIES = ("convexity", "concavity", "monotonicity")
SPECTRUM_MARGIN = 0.01
WITNESS_THRESHOLD = 1e-6
CHUNK = 256


@dataclass(frozen=True)
class HermitianSample:
    dimension: int
    matrix: np.ndarray
    spectrum: tuple
    interval: Interval

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "matrix": encode_complex(self.matrix),
            "spectrum": list(self.spectrum),
            "interval": self.interval.to_spec(),
        }


def encode_complex(a: np.ndarray) -> list:
    """Row-major ``[re, im]`` pairs."""
    a = np.asarray(a, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def decode_complex(rows: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def _shrunk_window(interval: Interval) -> tuple[float, float]:
    lo, hi = interval.sampling_window()
    pad = SPECTRUM_MARGIN * (hi - lo)
    return lo + pad, hi - pad


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a complex Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def sample_hermitian(n: int, interval: Interval, seed=None, rng: Optional[np.random.Generator] = None
                     ) -> HermitianSample:
    """Random Hermitian ``n x n`` matrix with spectrum uniform in ``interval`` shrunk by 1%.

    ``seed`` may be an integer or a sequence (as accepted by
    :func:`numpy.random.default_rng`); pass ``rng`` to continue a stream.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    rng = rng if rng is not None else np.random.default_rng(seed)
    lo, hi = _shrunk_window(interval)
    if not lo < hi:
        raise ValueError(f"interval {interval} has empty interior")
    spec = np.sort(rng.uniform(lo, hi, n))
    u = haar_unitary(n, rng)
    a = hermitian_part((u * spec) @ u.conj().T)
    return HermitianSample(n, a, tuple(float(x) for x in spec), interval)


def _as_matrix(a) -> np.ndarray:
    return a.matrix if isinstance(a, HermitianSample) else np.asarray(a)


def _values(f, xs: np.ndarray) -> np.ndarray:
    return np.array([float(f(float(x))) for x in xs])


def matrix_apply(f, a) -> np.ndarray:
    """``f(A) = U diag(f(lambda)) U*`` for Hermitian ``A``.

    Raises
    ------
    DomainError
        If an eigenvalue of ``A`` lies outside the domain of ``f``.

    Examples
    --------
    >>> from matconvex.funcmodel import polynomial
    >>> matrix_apply(polynomial([0, 0, 1]), np.diag([1.0, 2.0])).real
    array([[1., 0.],
           [0., 4.]])
    """
    m = _as_matrix(a)
    w, u = np.linalg.eigh(m)
    domain = getattr(f, "domain", None)
    if domain is not None and not domain.contains(w):
        raise DomainError(f"spectrum {w.tolist()} escapes the domain {domain}")
    return hermitian_part((u * _values(f, w)) @ u.conj().T)


def min_eig(a: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(hermitian_part(a))[0])


def convexity_deficit(f, a, b, lam: float) -> float:
    """``lambda_min(lam f(A) + (1 - lam) f(B) - f(lam A + (1 - lam) B))``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0, 1]")
    a, b = _as_matrix(a), _as_matrix(b)
    mix = hermitian_part(lam * a + (1.0 - lam) * b)
    return min_eig(lam * matrix_apply(f, a) + (1.0 - lam) * matrix_apply(f, b) - matrix_apply(f, mix))


def fit_perturbation(a, p, interval: Interval) -> np.ndarray:
    """Scale ``P >= 0`` so that the spectrum of ``A + P`` stays in the shrunk interval."""
    a, p = _as_matrix(a), _as_matrix(p)
    _, hi = _shrunk_window(interval)
    top = float(np.linalg.eigvalsh(a)[-1])
    room = hi - top
    pmax = float(np.linalg.eigvalsh(p)[-1])
    if room <= 0:
        raise DomainError("no room above the spectrum of A inside the interval")
    if pmax <= room:
        return p
    s = room / pmax
    # Weyl: lambda_max(A + sP) <= lambda_max(A) + s lambda_max(P)
    return p * s


def monotonicity_deficit(f, a, p, interval: Optional[Interval] = None) -> float:
    """``lambda_min(f(A + P) - f(A))`` with ``P`` rescaled to fit ``interval``."""
    a, p = _as_matrix(a), _as_matrix(p)
    if min_eig(p) < -1e-12 * max(1.0, float(np.linalg.norm(p))):
        raise ValueError("P must be positive semidefinite")
    if interval is not None:
        p = fit_perturbation(a, p, interval)
    return min_eig(matrix_apply(f, hermitian_part(a + p)) - matrix_apply(f, a))


# ---------------------------------------------------------------------------
# Witness search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessPair:
    A: HermitianSample
    B: HermitianSample
    lam: Optional[float]
    deficit_min_eigenvalue: float
    property: str
    seed_trace: tuple
    scale: float = 1.0

    def to_dict(self) -> dict:
        return {
            "A": self.A.to_dict(),
            "B": self.B.to_dict(),
            "lambda": self.lam,
            "deficit_min_eigenvalue": self.deficit_min_eigenvalue,
            "property": self.property,
            "seed_trace": list(self.seed_trace),
            "scale": self.scale,
        }


@dataclass(frozen=True)
class WitnessOutcome:
    witness: Optional[WitnessPair]
    trials_run: int
    worst_deficit: float
    worst_normalized: float
    threshold: float

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "witness": self.witness.to_dict() if self.witness else None,
            "trials_run": self.trials_run,
            "worst_deficit": self.worst_deficit,
            "worst_normalized": self.worst_normalized,
            "threshold": self.threshold,
        }


def _signed(f, prop: str):
    return f.negated() if prop == "concavity" else f


def _trial(f, interval: Interval, n: int, prop: str, seed: int, trial: int):
    """One seeded trial: returns ``(deficit, scale, A, B, lam)``."""
    rng = np.random.default_rng([seed, trial])
    a = sample_hermitian(n, interval, rng=rng)
    g = _signed(f, prop)
    if prop == "monotonicity":
        z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
        rank = int(rng.integers(1, n + 1))
        g_cols = z[:, :rank]
        p = hermitian_part(g_cols @ g_cols.conj().T)
        lo, hi = _shrunk_window(interval)
        p = p * (rng.uniform(0.0, 1.0) * (hi - lo) / max(float(np.linalg.eigvalsh(p)[-1]), 1e-300))
        p = fit_perturbation(a, p, interval)
        bm = hermitian_part(a.matrix + p)
        fa, fb = matrix_apply(g, a), matrix_apply(g, bm)
        deficit = min_eig(fb - fa)
        lam = None
    else:
        b0 = sample_hermitian(n, interval, rng=rng)
        bm = b0.matrix
        lam = float(rng.uniform(0.0, 1.0))
        fa, fb = matrix_apply(g, a), matrix_apply(g, bm)
        mix = matrix_apply(g, hermitian_part(lam * a.matrix + (1.0 - lam) * bm))
        deficit = min_eig(lam * fa + (1.0 - lam) * fb - mix)
    scale = max(1.0, float(np.linalg.norm(fa, 2)), float(np.linalg.norm(fb, 2)))
    return deficit, scale, a, bm, lam


def _as_sample(m: np.ndarray, interval: Interval) -> HermitianSample:
    w = np.linalg.eigvalsh(m)
    return HermitianSample(m.shape[0], m, tuple(float(x) for x in w), interval)


def _chunk(payload):
    f, interval, n, prop, seed, ks = payload
    return [(k,) + _trial(f, interval, n, prop, seed, k)[:2] for k in ks]


def witness_search(f, interval: Interval, n: int, prop: str = "convexity", trials: int = 10_000,
                   seed: int = 0, threshold: float = WITNESS_THRESHOLD, jobs: int = 1) -> WitnessOutcome:
    """Random search for a violation of the defining matrix inequality.

    Trial ``k`` draws from ``default_rng([seed, k])``. Trials run in blocks
    of 256; the search stops after the first block containing a deficit
    ``<= -threshold * scale`` and returns the lowest such trial index, so the
    outcome does not depend on ``jobs``.
    """
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; expected one of {PROPERTIES}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    worst, worst_norm, run = math.inf, math.inf, 0
    hit = None
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for start in range(0, trials, CHUNK * max(1, jobs)):
            stop = min(trials, start + CHUNK * max(1, jobs))
            blocks = [list(range(b, min(stop, b + CHUNK))) for b in range(start, stop, CHUNK)]
            payloads = [(f, interval, n, prop, seed, ks) for ks in blocks]
            parts = list(pool.map(_chunk, payloads)) if pool else [_chunk(p) for p in payloads]
            # blocks are consumed in order and blocks after the first hit are
            # discarded, so the statistics match a serial run
            for part in parts:
                for k, deficit, scale in part:
                    run += 1
                    worst = min(worst, deficit)
                    worst_norm = min(worst_norm, deficit / scale)
                    if deficit <= -threshold * scale and (hit is None or k < hit):
                        hit = k
                if hit is not None:
                    break
            if hit is not None:
                break
    finally:
        if pool:
            pool.shutdown()
    witness = replay(f, interval, n, prop, seed, hit) if hit is not None else None
    return WitnessOutcome(witness, run, worst, worst_norm, threshold)


def replay(f, interval: Interval, n: int, prop: str, seed: int, trial: int) -> WitnessPair:
    """Rebuild the witness of trial ``trial`` from its seed trace."""
    deficit, scale, a, bm, lam = _trial(f, interval, n, prop, seed, trial)
    return WitnessPair(a, _as_sample(bm, interval), lam, deficit, prop, (seed, trial), scale)


def recompute_deficit(f, w: WitnessPair) -> float:
    """Deficit of a stored witness, recomputed from its matrices."""
    g = _signed(f, w.property)
    if w.property == "monotonicity":
        return min_eig(matrix_apply(g, w.B.matrix) - matrix_apply(g, w.A.matrix))
    return convexity_deficit(g, w.A.matrix, w.B.matrix, w.lam)


# ---------------------------------------------------------------------------
# Criterion versus definition
# ---------------------------------------------------------------------------

@dataclass
class CrossValidation:
    function: str
    interval: str
    order: int
    property: str
    criterion_verdict: str
    oracle_verdict: str
    criterion: dict
    oracle: dict

    @property
    def agree(self) -> bool:
        return (self.criterion_verdict == "fail") == (self.oracle_verdict == "fail")

    def to_dict(self) -> dict:
        return {
            "function": self.function,
            "interval": self.interval,
            "order": self.order,
            "property": self.property,
            "criterion_verdict": self.criterion_verdict,
            "oracle_verdict": self.oracle_verdict,
            "agree": self.agree,
            "criterion": self.criterion,
            "oracle": self.oracle,
        }


_ORACLE_PROPERTY = {"convex": "convexity", "concave": "concavity", "monotone": "monotonicity"}


def cross_validate(f, interval: Interval, n: int, prop: str = "convex", cfg=None,
                   oracle_trials: int = 2000) -> CrossValidation:
    """Compare the sampled matrix criterion with a witness search at dimension ``n``."""
    from .classify import SamplerConfig, classify, function_label

    cfg = cfg or SamplerConfig()
    crit = classify(f, interval, n, prop, cfg)
    out = witness_search(f, interval, n, _ORACLE_PROPERTY[prop], oracle_trials, cfg.seed, jobs=cfg.jobs)
    crit_verdict = "fail" if crit.verdict == "fail" else "pass"
    return CrossValidation(function_label(f), interval.to_spec(), n, prop, crit_verdict,
                           "fail" if out.found else "pass", crit.to_dict(), out.to_dict())


__all__ = [
    "HermitianSample", "WitnessPair", "WitnessOutcome", "CrossValidation", "sample_hermitian",
    "haar_unitary", "matrix_apply", "convexity_deficit", "monotonicity_deficit", "fit_perturbation",
    "witness_search", "replay", "recompute_deficit", "cross_validate", "encode_complex", "decode_complex",
]
