import math
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matconvex.ddouble import DD
from matconvex.funcmodel import (
    DomainError,
    FunctionModel,
    Interval,
    affine,
    catalog,
    compose_affine,
    compose_mobius,
    eval_derivative,
    exponential,
    logarithm,
    mobius_image,
    mobius_inverse,
    neg_log,
    parse_function,
    parse_interval,
    polynomial,
    power,
    reciprocal,
)

P4 = polynomial([0, 1, -0.5, 1 / 3, -0.25])


# -- intervals ---------------------------------------------------------------

def test_interval_parsing_and_membership():
    i = parse_interval("[0,1)")
    assert i.contains(0.0) and not i.contains(1.0)
    assert parse_interval("[0,inf)").upper == math.inf
    assert not parse_interval("(0,inf]").upper_closed  # infinite ends are open
    with pytest.raises(ValueError):
        parse_interval("(1,0)")
    with pytest.raises(ValueError):
        parse_interval("0,1")


def test_interval_spec_round_trip():
    for spec in ["(0.1,10)", "[-1,1]", "[0,inf)", "(-inf,inf)"]:
        assert parse_interval(parse_interval(spec).to_spec()) == parse_interval(spec)


# -- evaluation examples -----------------------------------------------------

def test_eval_examples():
    assert exponential()(0.0) == 1.0
    assert reciprocal()(2.0) == 0.5
    assert P4(1.0) == pytest.approx(7 / 12, rel=1e-15)


def test_derivative_examples():
    assert eval_derivative(exponential(), 0.0, 5) == 1.0
    assert eval_derivative(reciprocal(), 1.0, 3) == -6.0
    assert eval_derivative(P4, 0.0, 4) == -6.0


def test_domain_violation_names_point():
    with pytest.raises(DomainError, match="-1.0"):
        reciprocal()(-1.0)
    with pytest.raises(DomainError):
        logarithm().derivative(0.0, 1)


# -- composition -------------------------------------------------------------

def test_identity_mobius_is_noop():
    f = exponential()
    g = compose_mobius(f, (1, 0, 0, 1), Interval.real_line())
    assert g == f


def test_mobius_shift_of_reciprocal():
    # closed at 0 so the derivative there is in range; the image [1, inf) stays inside (0, inf)
    g = compose_mobius(reciprocal(), (1, 1, 0, 1), parse_interval("[0,inf)"))
    assert g(1.0) == 0.5
    assert g.derivative(0.0, 1) == pytest.approx(-1.0, rel=1e-15)


def test_halfline_map_composition():
    f = polynomial([0, 1, -0.5], parse_interval("[0,1)"))
    g = compose_mobius(f, (1, 0, 1, 1), parse_interval("[0,inf)"))
    for t in [0.0, 0.5, 3.0, 1e6]:
        h = t / (1 + t)
        assert g(t) == pytest.approx(h - h * h / 2, rel=1e-14)


def test_mobius_image_escape_is_refused():
    with pytest.raises(DomainError):
        compose_mobius(logarithm(), (1, -1, 0, 1), parse_interval("(0,2)"))
    with pytest.raises(ValueError):
        compose_mobius(exponential(), (1, 2, 2, 4), Interval.real_line())


def test_affine_post_map():
    f = compose_affine(exponential(), 3.0, -1.0)
    assert f(0.0) == 2.0
    assert f.derivative(0.0, 2) == 3.0


# -- mini-language and serialisation ------------------------------------------

@pytest.mark.parametrize("spec", [
    "poly:0,1,-0.5", "exp", "log", "recip", "pow:1.5", "lin:2,1",
    "mobius(1,1,0,1)@recip", "affine(-1,0)@log",
])
def test_parse_to_spec_round_trip(spec):
    f = parse_function(spec)
    g = parse_function(f.to_spec())
    assert g == f


def test_parse_with_interval_restricts_domain():
    f = parse_function("recip", "(0.1,10)")
    assert f.domain == parse_interval("(0.1,10)")
    with pytest.raises(DomainError):
        parse_function("log", "(-1,1)")


@pytest.mark.parametrize("spec", ["", "sin", "poly:", "pow:1,2", "mobius(1,2)@exp", "exp:3"])
def test_parse_rejects_garbage(spec):
    with pytest.raises(ValueError):
        parse_function(spec)


def test_json_object_round_trip():
    f = compose_mobius(compose_affine(logarithm(), -2.0, 1.0), (1, 0, 1, 1), parse_interval("(0,inf)"))
    d = f.to_dict()
    assert set(d) == {"family", "parameters", "pre_map", "post_affine", "domain"}
    assert FunctionModel.from_dict(d) == f


def test_catalog_contents():
    c = catalog()
    assert {"square", "cube", "quartic", "exp", "neg_log", "reciprocal", "p4", "g4"} <= set(c)
    assert c["neg_log"](1.0) == 0.0 and c["neg_log"].derivative(2.0, 2) == pytest.approx(0.25)


# -- invariants ----------------------------------------------------------------

FD_CASES = [
    (exponential(), (-3.0, 3.0)),
    (logarithm(), (0.2, 5.0)),
    (reciprocal(), (0.2, 5.0)),
    (power(1.5), (0.2, 5.0)),
    (power(-0.5), (0.2, 5.0)),
    (affine(2.0, 1.0), (-3.0, 3.0)),
    (P4, (-2.0, 2.0)),
    (neg_log(), (0.2, 5.0)),
    (compose_mobius(reciprocal(), (1, 1, 0, 1), parse_interval("(0,inf)")), (0.0, 5.0)),
    (compose_mobius(logarithm(), (1, 0, 1, 1), parse_interval("(0,inf)")), (0.2, 5.0)),
]
DD_EPS = 2.0 ** -104


def _central_difference(f, t: float, k: int) -> float:
    # k-th symmetric difference at the usual optimum h ~ eps^(1/(k+2)), rounded to a
    # power of two; evaluated in double-double so rounding stays below truncation
    h = 2.0 ** round(math.log2(DD_EPS ** (1.0 / (k + 2)) * max(1.0, abs(t))))
    acc = DD(0.0)
    for j in range(k + 1):
        acc = acc + f(DD(t) + (j - k / 2) * h) * ((-1) ** (k - j) * math.comb(k, j))
    return float(acc) / h ** k


@pytest.mark.parametrize("case", range(len(FD_CASES)))
@given(u=st.floats(0.05, 0.95), k=st.integers(0, 6))
@settings(max_examples=25, deadline=None)
def test_derivatives_match_finite_differences(case, u, k):
    f, (lo, hi) = FD_CASES[case]
    t = lo + u * (hi - lo)
    exact = f.derivative(t, k)
    fd = _central_difference(f, t, k)
    assert abs(fd - exact) <= 1e-5 * max(abs(exact), 1e-300) or abs(exact) < 1e-12


@given(a=st.floats(0.5, 3), b=st.floats(-1, 1), c=st.floats(0.0, 0.2), t=st.floats(0.1, 4.9))
@settings(max_examples=100, deadline=None)
def test_mobius_then_inverse_reproduces_values(a, b, c, t):
    m = (a, b, c, 1.0)
    f = exponential()
    g = compose_mobius(f, m, parse_interval("[0,5]"))
    # pull back over a slightly smaller window so rounding of the image stays inside
    back = compose_mobius(g, mobius_inverse(m), mobius_image(m, parse_interval("[0.05,4.95]")))
    u = (a * t + b) / (c * t + 1.0)
    assert back(u) == pytest.approx(f(u), rel=1e-12)


@given(coeffs=st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=50), min_size=1, max_size=9))
@settings(max_examples=100, deadline=None)
def test_polynomial_derivative_at_zero_is_factorial_times_coefficient(coeffs):
    # the stored coefficient comes back bit-exact, so k! b_k is exact up to the final product
    f = polynomial([float(c) for c in coeffs])
    taylor = f.taylor(0.0, len(coeffs) - 1)
    for k, b in enumerate(coeffs):
        assert taylor[k] == float(b)
        assert f.derivative(0.0, k) == math.factorial(k) * float(b)


def test_vectorised_taylor_matches_scalar():
    ts = np.array([0.3, 1.0, 2.5])
    f = compose_affine(reciprocal(), 2.0, 1.0)
    vec = f.taylor(ts, 3)
    for i, t in enumerate(ts):
        assert np.allclose([c[i] for c in vec], f.taylor(float(t), 3), rtol=1e-15)
