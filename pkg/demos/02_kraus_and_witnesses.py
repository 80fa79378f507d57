"""
Kraus matrices and explicit witnesses
=====================================

``1/t`` is operator convex on the positive half-line, ``t^3`` is not even
2-convex there. The sampled Kraus criterion and the Hermitian-pair oracle
reach the same conclusion, and the failure comes with a certificate.
"""
import numpy as np

from matconvex.classify import SamplerConfig, classify
from matconvex.funcmodel import Interval, polynomial, reciprocal
from matconvex.oracle import cross_validate, recompute_deficit, witness_search
from matconvex.specmat import kraus_matrix

cube = polynomial([0, 0, 0, 1])
interval = Interval(0.1, 10)
cfg = SamplerConfig(trials=200, seed=7)

# %%
# For ``t^3`` every second divided difference is the sum of its nodes, so
# the 2x2 Kraus determinant is ``-(t1 - t2)^2``.
h = kraus_matrix(cube, (1.0, 3.0), 1.0)
print(h.matrix, "det", np.linalg.det(h.matrix), h.verdict)

# %%
# Sampled criteria at orders 2 and 3.
for f, name in [(reciprocal(), "1/t"), (cube, "t^3")]:
    for n in (2, 3):
        rep = classify(f, interval, n, "convex", cfg)
        print(f"{name:4s} order {n}: {rep.label}")

# %%
# The definition itself: search for Hermitian A, B and a weight with a
# negative convexity deficit.
out = witness_search(cube, Interval(0.1, 3), 2, "convexity", trials=2000, seed=0)
w = out.witness
print("witness at trial", w.seed_trace, "deficit", w.deficit_min_eigenvalue)
print("recomputed", recompute_deficit(cube, w))

# %%
# Criterion and oracle agree.
for f, n in [(reciprocal(), 3), (cube, 2)]:
    r = cross_validate(f, interval, n, "convex", cfg)
    print(r.function, n, r.criterion_verdict, r.oracle_verdict, "agree" if r.agree else "DISAGREE")
