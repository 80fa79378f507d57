import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matconvex.divdiff import (
    coalesce,
    dd_table,
    divided_difference,
    geometric_mean_bound_check,
    hermite_simplex_quadrature,
    precision,
    reciprocal_closed_form,
)
from matconvex.funcmodel import (
    DomainError,
    exponential,
    logarithm,
    neg_log,
    parse_interval,
    polynomial,
    power,
    reciprocal,
)

E = math.e
SQUARE = polynomial([0, 0, 1])
CUBE = polynomial([0, 0, 0, 1])


# -- examples ------------------------------------------------------------------

def test_divided_difference_examples():
    assert divided_difference(SQUARE, (0, 1, 2)) == pytest.approx(1.0, abs=1e-15)
    assert divided_difference(reciprocal(), (1, 2)) == -0.5
    assert divided_difference(CUBE, (1, 1, 1)) == 3.0
    assert divided_difference(exponential(), (0, 0)) == 1.0


def test_quadrature_examples():
    assert hermite_simplex_quadrature(SQUARE, (0, 1, 2), 2) == pytest.approx(1.0, abs=1e-12)
    assert hermite_simplex_quadrature(exponential(), (0, 1), 16) == pytest.approx(E - 1, abs=1e-10)
    assert hermite_simplex_quadrature(reciprocal(), (1, 2, 3), 16) == pytest.approx(1 / 6, abs=1e-8)


def test_quadrature_refuses_bad_requests():
    with pytest.raises(ValueError):
        hermite_simplex_quadrature(exponential(), (0, 1), 1)
    with pytest.raises(ValueError):
        hermite_simplex_quadrature(exponential(), tuple(range(8)), 4)


def test_reciprocal_closed_form_examples():
    assert reciprocal_closed_form((1,)) == 1.0
    assert reciprocal_closed_form((1, 2)) == -0.5
    assert reciprocal_closed_form((1, 2, 4)) == 0.125
    assert divided_difference(reciprocal(), (1, 2, 4)) == pytest.approx(0.125, rel=1e-15)
    with pytest.raises(ValueError):
        reciprocal_closed_form((1, 0))


def test_geometric_mean_examples():
    r = geometric_mean_bound_check(exponential(), (0, 1))
    assert r.lhs == pytest.approx(E - 1, rel=1e-14)
    assert r.rhs == pytest.approx(math.exp(0.5), rel=1e-14)
    assert r.satisfied
    r = geometric_mean_bound_check(exponential(), (0, 1, 2))
    assert r.lhs == pytest.approx((E * E - 2 * E + 1) / 2, rel=1e-14)
    assert r.rhs == pytest.approx(E / 2, rel=1e-14)
    assert r.satisfied
    r = geometric_mean_bound_check(exponential(), (0.7, 0.7, 0.7))
    assert r.lhs == pytest.approx(r.rhs, rel=1e-15) and r.satisfied


def test_geometric_mean_refuses_nonpositive_derivative():
    with pytest.raises(ValueError):
        geometric_mean_bound_check(polynomial([0, 1, -1]), (0, 1, 2))


def test_domain_errors():
    with pytest.raises(DomainError):
        divided_difference(logarithm(), (-1.0, 1.0))


def test_table_single_node_entries_are_scaled_derivatives():
    tab = dd_table(exponential(), (0.3, 0.3, 0.3, 0.3))
    for k in range(4):
        assert tab.entry(0, k) == pytest.approx(math.exp(0.3) / math.factorial(k), rel=1e-15)
    assert tab.to_dict()["value"] == tab.top


def test_near_coincident_nodes_coalesce():
    assert coalesce((1.0, 1.0 + 1e-9, 2.0)) == [(1.0, 2), (2.0, 1)]
    assert divided_difference(exponential(), (1.0, 1.0 + 1e-9)) == pytest.approx(E, rel=1e-8)


def test_extended_precision_agrees_with_double_at_low_order():
    nodes = (0.1, 0.4, 0.5, 0.9)
    with precision("double"):
        a = divided_difference(exponential(), nodes)
    with precision("extended"):
        b = divided_difference(exponential(), nodes)
    assert a == pytest.approx(b, rel=1e-12)


# -- invariants ------------------------------------------------------------------

FAMILIES = [
    (exponential(), (-2.0, 2.0)),
    (reciprocal(), (0.5, 4.0)),
    (neg_log(), (0.5, 4.0)),
    (power(1.5), (0.5, 4.0)),
    (polynomial([0.3, -1, 0.5, 2, -0.7, 0.1]), (-2.0, 2.0)),
]
unit = st.floats(0.0, 1.0)


@pytest.mark.parametrize("case", range(len(FAMILIES)))
@given(us=st.lists(unit, min_size=1, max_size=7), seed=st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_permutation_symmetry(case, us, seed):
    f, (lo, hi) = FAMILIES[case]
    nodes = [lo + u * (hi - lo) for u in us]
    perm = list(np.random.default_rng(seed).permutation(nodes))
    a, b = divided_difference(f, nodes), divided_difference(f, perm)
    assert abs(a - b) <= 1e-10 * max(abs(a), abs(b), 1e-300)


@given(ks=st.lists(st.integers(0, 40), min_size=2, max_size=5),
       coeffs=st.lists(st.floats(-1, 1), min_size=1, max_size=9), use_exp=st.booleans())
@settings(max_examples=60, deadline=None)
def test_recurrence_matches_quadrature(ks, coeffs, use_exp):
    # nodes on a 0.05 grid: repeats are exact confluences, distinct nodes stay well separated
    f = exponential() if use_exp else polynomial(coeffs)
    nodes = [-1 + 0.05 * k for k in ks]
    a = divided_difference(f, nodes)
    q = hermite_simplex_quadrature(f, nodes)
    # scale by the largest |f^(n)|/n! on the hull so cancellation to ~0 is judged fairly
    n = len(nodes) - 1
    peak = max(abs(f.taylor(float(x), n)[n]) for x in np.linspace(min(nodes), max(nodes), 33))
    floor = 1e-12 * max([1.0] + [abs(c) for c in coeffs])
    assert abs(a - q) <= 1e-6 * max(abs(a), peak) + floor


@given(us=st.lists(st.floats(0.5, 4.0), min_size=1, max_size=7))
@settings(max_examples=100, deadline=None)
def test_reciprocal_closed_form_matches_recurrence(us):
    a = divided_difference(reciprocal(), us)
    assert a == pytest.approx(reciprocal_closed_form(us), rel=1e-10)


@given(us=st.lists(st.floats(-3, 3), min_size=1, max_size=7))
@settings(max_examples=100, deadline=None)
def test_positive_derivative_gives_positive_difference(us):
    assert divided_difference(exponential(), us) > 0.0
    assert divided_difference(reciprocal(), [abs(u) + 0.1 for u in us]) * (-1) ** (len(us) - 1) > 0.0


def test_geometric_mean_for_exp_on_seeded_tuples():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(1, 6))
        r = geometric_mean_bound_check(exponential(), rng.uniform(-3, 3, n + 1))
        assert r.direction == "convex"
        assert r.lhs - r.rhs >= -1e-12 * max(1.0, r.rhs)
