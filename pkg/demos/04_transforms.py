"""
Fractional transforms
=====================

``S(t0, f)`` turns a strictly convex ``f`` into a new function whose
monotonicity order tracks the convexity order of ``f``. This script
evaluates the transforms, inverts them, and runs the order audit.
"""
from matconvex.classify import SamplerConfig
from matconvex.funcmodel import Interval, exponential, reciprocal
from matconvex.gaps import build_gap_polynomial
from matconvex.transforms import (
    connection_check,
    roundtrip,
    sylvester_reduce,
    theorem_roundtrip_audit,
    transform_S,
    transform_T,
)

# %%
# ``S`` of ``1/t`` is the constant ``-t0^2``; at the anchor both transforms
# use fully confluent differences.
s = transform_S(reciprocal(), 2.0)
print("S(2, 1/t) at 0.5, 2, 7:", [s(t) for t in (0.5, 2.0, 7.0)])
print("T(0, exp)(0) =", transform_T(exponential(), 0.0)(0.0))

# %%
# Inverses and the link ``S(t0, f) = T(t0, d)`` with ``d(t) = [t0, t]_f``.
f = exponential().with_domain(Interval(-1, 1))
for kind in ("T", "S"):
    print(kind, "round trip error", roundtrip(f, 0.2, kind).max_relative_error)
print("connection", connection_check(f, 0.2))
print("Sylvester residual (identity)", sylvester_reduce([[2, 1, 0], [1, 2, 1], [0, 1, 2]]).residual)

# %%
# The audit compares order n+1 convexity of f with order n monotonicity of
# S(t0, f) over 50 anchors.
cfg = SamplerConfig(trials=100, seed=1)
gap = build_gap_polynomial(2, 4, None, "convex")
for label, g, interval in [
    ("1/t", reciprocal(), Interval(0.1, 10)),
    ("gap", gap.model, gap.certified_interval),
    ("exp", exponential(), Interval(-1, 1)),
]:
    a = theorem_roundtrip_audit(g, interval, 2, cfg)
    print(f"{label}: f in K_3 {a.f_in_K_next}, S in P_2 {a.S_in_P_n_for_all_t0}, consistent {a.consistent}")
