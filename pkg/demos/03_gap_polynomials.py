"""
Polynomials that separate consecutive orders
============================================

Truncated logarithm-type series with coefficients ``(-1)^(k-1)/k`` are
2-monotone and 2-concave near the origin, yet a principal 2x2 minor of
the order-3 derivative matrix has determinant ``-b_4^2 < 0`` everywhere.
"""
from matconvex.classify import SamplerConfig, classify
from matconvex.gaps import (
    build_gap_polynomial,
    build_halfline_gap,
    certify,
    degree_exclusion_minor,
    exclusion_determinant_at,
)

# %%
# Build and certify at order 2 on ``(-1, 1)``.
gap = build_gap_polynomial(2, 4, "(-1,1)", "concave")
print("coefficients", [str(b) for b in gap.base_coefficients[1:]])
print("window alpha", gap.alpha_raw, "-> shrunk", gap.alpha, "certified", certify(gap))

cfg = SamplerConfig(trials=200, seed=3)
for prop in ("monotone", "concave"):
    print(prop, "order 2:", classify(gap.model, gap.certified_interval, 2, prop, cfg).label)

# %%
# The exclusion minor of ``K_3``, exactly at the centre and in floating
# point along the interval, where it carries the factor ``(alpha / c)^8``.
minor = degree_exclusion_minor(4, 3, gap.base_coefficients)
print("rows", minor.row_indices, "det", minor.determinant)
for t in (-0.9, 0.0, 0.9):
    print(f"order-3 minor at {t:+.1f}: {exclusion_determinant_at(gap.model, t, 2):.3e}")

# %%
# Transported to the half-line by ``t / (1 + t)`` after a non-negativity shift.
g, _ = build_halfline_gap(2)
print("g(0) =", g(0.0), " g(1e6) =", g(1e6))
