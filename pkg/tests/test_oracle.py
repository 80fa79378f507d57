import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matconvex.classify import SamplerConfig
from matconvex.funcmodel import DomainError, Interval, affine, catalog, compose_affine, exponential, polynomial, reciprocal
from matconvex.gaps import build_gap_polynomial
from matconvex.oracle import (
    convexity_deficit,
    cross_validate,
    decode_complex,
    encode_complex,
    haar_unitary,
    matrix_apply,
    monotonicity_deficit,
    recompute_deficit,
    replay,
    sample_hermitian,
    witness_search,
)

SQUARE = polynomial([0, 0, 1])
CUBE = polynomial([0, 0, 0, 1])
IDENTITY = affine(1.0, 0.0)


# -- functional calculus ------------------------------------------------------------

def test_matrix_apply_examples():
    a = sample_hermitian(3, Interval(-2, 2), seed=1)
    np.testing.assert_allclose(matrix_apply(IDENTITY, a), a.matrix, atol=1e-14)
    np.testing.assert_allclose(matrix_apply(SQUARE, np.diag([1.0, 2.0])), np.diag([1.0, 4.0]), atol=1e-15)
    for theta in (0.3, 1.0, 2.5):
        m = matrix_apply(exponential(), np.array([[0, theta], [theta, 0]]))
        c, s = math.cosh(theta), math.sinh(theta)
        np.testing.assert_allclose(m, [[c, s], [s, c]], rtol=1e-14)


def test_matrix_apply_refuses_domain_escape():
    with pytest.raises(DomainError):
        matrix_apply(reciprocal(), np.diag([-1.0, 1.0]))


@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 5), a=st.floats(-3, 3), b=st.floats(-3, 3))
@settings(max_examples=50, deadline=None)
def test_matrix_apply_commutes_with_affine_maps(seed, n, a, b):
    x = sample_hermitian(n, Interval(-1, 1), seed=seed)
    lhs = matrix_apply(compose_affine(exponential(), a, b), x)
    rhs = a * matrix_apply(exponential(), x) + b * np.eye(n)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12 * max(1.0, abs(a) * math.e + abs(b)))


# -- sampling ----------------------------------------------------------------------

def test_sample_hermitian_examples():
    s = sample_hermitian(1, Interval(0, 1), seed=5)
    assert s.matrix.shape == (1, 1) and 0 < s.matrix[0, 0].real < 1
    s = sample_hermitian(3, Interval(0.1, 10), seed=5)
    assert np.abs(s.matrix - s.matrix.conj().T).max() <= 1e-14
    w = np.linalg.eigvalsh(s.matrix)
    assert 0.1 < w.min() and w.max() < 10
    np.testing.assert_allclose(w, s.spectrum, atol=1e-13)
    assert np.array_equal(sample_hermitian(3, Interval(0.1, 10), seed=5).matrix, s.matrix)


def test_haar_unitary_is_unitary():
    u = haar_unitary(4, np.random.default_rng(0))
    np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-14)


def test_complex_encoding_round_trip():
    s = sample_hermitian(3, Interval(-1, 1), seed=2)
    assert np.array_equal(decode_complex(encode_complex(s.matrix)), s.matrix)


# -- deficits ----------------------------------------------------------------------

@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 4), lam=st.floats(0, 1))
@settings(max_examples=100, deadline=None)
def test_square_deficit_is_the_algebraic_identity(seed, n, lam):
    rng = np.random.default_rng(seed)
    a = sample_hermitian(n, Interval(-3, 3), rng=rng).matrix
    b = sample_hermitian(n, Interval(-3, 3), rng=rng).matrix
    d = convexity_deficit(SQUARE, a, b, lam)
    expected = lam * (1 - lam) * np.linalg.eigvalsh((a - b) @ (a - b))[0]
    assert d >= -1e-12 and d == pytest.approx(expected, abs=1e-11)


def test_reciprocal_deficits_at_dimension_three():
    rng = np.random.default_rng(31)
    i = Interval(0.1, 10)
    for _ in range(200):
        a, b = sample_hermitian(3, i, rng=rng), sample_hermitian(3, i, rng=rng)
        assert convexity_deficit(reciprocal(), a, b, float(rng.uniform())) >= -1e-8


def test_monotonicity_deficit_examples():
    rng = np.random.default_rng(4)
    i = Interval(-2, 2)
    for _ in range(20):
        a = sample_hermitian(2, i, rng=rng)
        z = rng.normal(size=(2, 2))
        p = 0.1 * z @ z.T
        assert monotonicity_deficit(IDENTITY, a, p) == pytest.approx(np.linalg.eigvalsh(p)[0], abs=1e-13)
    with pytest.raises(ValueError):
        monotonicity_deficit(IDENTITY, np.eye(2), -np.eye(2))


def test_gap_polynomial_is_two_monotone_by_definition():
    gap = build_gap_polynomial(2, 4, None, "concave")
    out = witness_search(gap.model, gap.certified_interval, 2, "monotonicity", trials=200, seed=3,
                         threshold=1e-8)
    assert not out.found and out.worst_normalized >= -1e-8


# -- witness search -----------------------------------------------------------------

def test_square_has_no_convexity_witness():
    for n in (1, 2, 3):
        assert not witness_search(SQUARE, Interval(-2, 2), n, trials=500, seed=1).found


def test_cube_convexity_witness():
    out = witness_search(CUBE, Interval(0.1, 3), 2, trials=10_000, seed=0)
    assert out.found
    w = out.witness
    assert w.deficit_min_eigenvalue <= -1e-6 * w.scale
    assert recompute_deficit(CUBE, w) == pytest.approx(w.deficit_min_eigenvalue, abs=1e-10)


def test_square_monotonicity_witness_on_mixed_signs():
    out = witness_search(SQUARE, Interval(-2, 2), 2, "monotonicity", trials=10_000, seed=0)
    assert out.found and out.witness.lam is None


def test_reciprocal_has_no_witness_at_dimension_four():
    out = witness_search(reciprocal(), Interval(0.1, 10), 4, trials=10_000, seed=2)
    assert not out.found and out.trials_run == 10_000


def test_witness_replays_from_seed_trace():
    out = witness_search(CUBE, Interval(0.1, 3), 2, trials=2000, seed=5)
    w = out.witness
    again = replay(CUBE, Interval(0.1, 3), 2, "convexity", *w.seed_trace)
    assert np.array_equal(again.A.matrix, w.A.matrix) and again.lam == w.lam
    assert abs(recompute_deficit(CUBE, again) - w.deficit_min_eigenvalue) <= 1e-10


def test_search_is_deterministic_and_independent_of_jobs():
    a = witness_search(CUBE, Interval(0.1, 3), 3, trials=1000, seed=9)
    b = witness_search(CUBE, Interval(0.1, 3), 3, trials=1000, seed=9)
    c = witness_search(CUBE, Interval(0.1, 3), 3, trials=1000, seed=9, jobs=2)
    assert a.to_dict() == b.to_dict() == c.to_dict()


def test_search_rejects_bad_arguments():
    with pytest.raises(ValueError):
        witness_search(CUBE, Interval(0, 1), 2, "wobbliness")
    with pytest.raises(ValueError):
        witness_search(CUBE, Interval(0, 1), 2, trials=0)


# -- cross validation -----------------------------------------------------------------

@pytest.mark.parametrize("f,interval,n", [
    (reciprocal(), Interval(0.1, 10), 3),
    (CUBE, Interval(0.1, 10), 2),
    (SQUARE, Interval(-3, 3), 4),
])
def test_cross_validation_examples(f, interval, n):
    r = cross_validate(f, interval, n, "convex", SamplerConfig(trials=200, seed=1), oracle_trials=2000)
    assert r.agree


def test_cross_validation_cube_both_fail_with_certificates():
    r = cross_validate(CUBE, Interval(0.1, 10), 2, "convex", SamplerConfig(trials=200, seed=1))
    assert r.criterion_verdict == r.oracle_verdict == "fail"
    assert r.criterion["counterexample"] is not None and r.oracle["witness"] is not None
