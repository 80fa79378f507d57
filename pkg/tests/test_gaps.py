from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matconvex.classify import SamplerConfig, classify
from matconvex.funcmodel import Interval
from matconvex.gaps import (
    base_polynomial,
    build_gap_polynomial,
    build_halfline_gap,
    certify,
    degree_exclusion_minor,
    equilibrated_definite,
    exclusion_determinant_at,
    find_alpha,
    gap_coefficients,
    hankel_exact,
)
from matconvex.specmat import derivative_matrix_Kn, derivative_matrix_Mn

CFG = SamplerConfig(trials=200, seed=8)

# regression constants of the grid-certified window search (raw, before the 10% shrink)
ALPHA_RAW = {
    (1, 2): 0.9990234375,
    (2, 4): 0.03179931640625,
    (3, 6): 0.0016937255859375,
}


def test_coefficients_are_exact_rationals():
    assert gap_coefficients(4, "concave") == [0, 1, Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 4)]
    assert gap_coefficients(4, "convex") == [0, 1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)]
    with pytest.raises(ValueError):
        gap_coefficients(4, "sideways")


def test_concave_n2_example():
    g = build_gap_polynomial(2, 4, Interval(-1, 1), "concave")
    assert [str(b) for b in g.base_coefficients[1:]] == ["1", "-1/2", "1/3", "-1/4"]
    p = base_polynomial(4, "concave")
    np.testing.assert_allclose(derivative_matrix_Kn(p, 0, 2).matrix, [[-0.5, 1 / 3], [1 / 3, -0.25]], rtol=1e-15)
    assert max(derivative_matrix_Kn(p, 0, 2).eigenvalues) < 0
    assert derivative_matrix_Mn(p, 0, 2).verdict == "positive_definite"


def test_convex_n2_example():
    g = build_gap_polynomial(2, 4, Interval(-1, 1), "convex")
    assert [str(b) for b in g.base_coefficients[1:]] == ["1", "1/2", "1/3", "1/4"]
    assert certify(g)


def test_scalar_case_on_zero_two():
    g = build_gap_polynomial(1, 2, "(0,2)", "concave")
    for t in np.linspace(0.01, 1.99, 50):
        c = g.model.taylor(float(t), 2)
        assert c[1] > 0 and c[2] < 0


@pytest.mark.parametrize("n,m", sorted(ALPHA_RAW))
@pytest.mark.parametrize("kind", ["concave", "convex"])
def test_alpha_regression(n, m, kind):
    assert find_alpha(base_polynomial(m, kind), n, kind) == ALPHA_RAW[(n, m)]


def test_alpha_for_scalar_case_reaches_one():
    assert find_alpha(base_polynomial(2, "concave"), 1, "concave") >= 1 - 1e-3


def test_alpha_refuses_corrupted_coefficients():
    from matconvex.funcmodel import polynomial
    with pytest.raises(ValueError):
        find_alpha(polynomial([0, 1, 0.5, 1 / 3, 1 / 4]), 2, "concave")


def test_constructor_errors():
    with pytest.raises(ValueError):
        build_gap_polynomial(2, 3, Interval(-1, 1))
    with pytest.raises(ValueError):
        build_gap_polynomial(2, 4, "[0,inf)")


def test_model_domain_and_scaling():
    g = build_gap_polynomial(2, 4, "(2,6)")
    assert g.model.domain == Interval(2, 6)
    assert g.scaling == pytest.approx(g.alpha / 2)
    # the centre maps to 0, where the Taylor coefficients are b_k scaled by (alpha/c)^k
    c = g.model.taylor(4.0, 4)
    for k in range(1, 5):
        assert c[k] == pytest.approx(float(g.base_coefficients[k]) * g.scaling ** k, rel=1e-14)


def test_natural_window_has_unit_scaling():
    g = build_gap_polynomial(2, 4, None)
    assert g.scaling == 1.0 and g.certified_interval == Interval(-g.alpha, g.alpha)


@pytest.mark.parametrize("m", [4, 5, 6, 8])
@pytest.mark.parametrize("kind", ["concave", "convex"])
def test_derivative_matrices_at_zero_are_coefficient_hankels(m, kind):
    b = gap_coefficients(m, kind)
    p = base_polynomial(m, kind)
    for n in (1, 2, 3):
        k = derivative_matrix_Kn(p, 0, n).matrix
        mm = derivative_matrix_Mn(p, 0, n).matrix
        assert k.tolist() == [[float(x) for x in row] for row in hankel_exact(b, n, 0)]
        assert mm.tolist() == [[float(x) for x in row] for row in hankel_exact(b, n, -1)]


def test_exclusion_minor_examples():
    b = [0, 1, Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 4), Fraction(1, 5)]
    r = degree_exclusion_minor(3, 2, b[:4])
    assert r.row_indices == (1, 2) and r.minor_matrix == ((b[2], b[3]), (b[3], 0))
    assert r.determinant == -b[3] ** 2
    r = degree_exclusion_minor(4, 3, b[:5])
    assert r.row_indices == (1, 3) and r.minor_matrix == ((b[2], b[4]), (b[4], 0))
    assert r.determinant == -b[4] ** 2
    r = degree_exclusion_minor(5, 3, b)
    assert r.row_indices == (2, 3) and r.determinant == -b[5] ** 2


def test_exclusion_minor_errors():
    with pytest.raises(ValueError):
        degree_exclusion_minor(2, 2, [0, 1, 1])
    with pytest.raises(ValueError):
        degree_exclusion_minor(4, 2, [0, 1, 1, 1, 1])
    with pytest.raises(ValueError):
        degree_exclusion_minor(3, 2, [0, 1, 1, 0])


@given(m=st.integers(3, 9), data=st.data())
@settings(max_examples=100, deadline=None)
def test_exclusion_determinant_is_minus_top_coefficient_squared(m, data):
    n = data.draw(st.integers((m + 2) // 2, 6))
    coeffs = data.draw(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=20),
                                min_size=m + 1, max_size=m + 1))
    if coeffs[m] == 0:
        coeffs[m] = Fraction(1, 7)
    r = degree_exclusion_minor(m, n, coeffs)
    assert r.determinant == -Fraction(coeffs[m]) ** 2 == r.expected


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("kind", ["concave", "convex"])
def test_gap_certification(n, kind):
    g = build_gap_polynomial(n, 2 * n, Interval(-1, 1), kind)
    assert certify(g)
    assert classify(g.model, g.certified_interval, n, "monotone", CFG).verdict == "pass"
    assert classify(g.model, g.certified_interval, n, kind, CFG).verdict == "pass"
    b2n = float(g.base_coefficients[2 * n])
    for t in g.certified_interval.grid(64):
        d = exclusion_determinant_at(g.model, float(t), n)
        assert d == pytest.approx(-(b2n * g.scaling ** (2 * n)) ** 2, rel=1e-8)
        assert d < 0


def test_halfline_scalar_case_is_concave():
    g, _ = build_halfline_gap(1)
    assert g(0.0) >= 0
    for t in np.geomspace(1e-3, 1e4, 200):
        assert g.taylor(float(t), 2)[2] < 0


def test_halfline_n2_orders():
    g, _ = build_halfline_gap(2)
    i = Interval(0, 50)
    assert classify(g, i, 2, "concave", CFG).verdict == "pass"
    # the order-3 violation is of size ~(alpha)^k; a tighter band resolves it
    tight = SamplerConfig(trials=500, seed=0, node_strategy="endpoint_biased", tolerance=1e-11)
    assert classify(g, i, 2, "monotone", tight).verdict == "pass"
    assert classify(g, i, 3, "monotone", tight).verdict == "fail"
    # pointwise: M_3(g; t) is indefinite once the scale of its entries is equilibrated
    for t in (0.0, 0.5, 1.0, 10.0):
        assert derivative_matrix_Mn(g, t, 3).min_eigenvalue < 0
        assert not equilibrated_definite(derivative_matrix_Mn(g, t, 3).matrix, +1)
    assert derivative_matrix_Mn(g, 0.0, 3).verdict == "indefinite"


def test_halfline_is_nonnegative():
    g, _ = build_halfline_gap(2)
    assert g(0.0) >= 0
    ts = np.concatenate([[0.0], np.geomspace(1e-6, 1e6, 4000)])
    assert min(float(g(float(t))) for t in ts) >= 0
