"""Average-distortion embeddings of snowflakes.

Three constructions: the self-embedding of an omega-snowflake of a
normed space back into the same space (exact p-moment equality, Holder
constant below an explicit parametric bound); the distance-to-mean line
embedding; and the Hilbertian realization of snowflakes of lp
configurations by double centering.  The exponent-transfer pipeline
composes them.
"""

import numpy as np

from metricgap import (
    PointConfig,
    distance_matrix,
    eta,
    hilbert_realize_snowflake,
    line_embed,
    lp_host,
    snowflake_self_embed,
    transfer_snowflake,
)

rng = np.random.default_rng(7)

print("=== snowflake self-embedding: measured vs bound ===")
print(f"{'p':>4} {'omega':>6} {'measured L':>11} {'bound':>9}")
for p in (1.0, 2.0, 3.0):
    for omega in (0.25, 0.5, 0.75):
        cfg = PointConfig(lp_host(np.inf, 12), rng.standard_normal((40, 12)))
        _, s = snowflake_self_embed(cfg, None, p, omega)
        bound = 2 ** ((1 - omega) * (1 + 1 / (p * omega))) / eta(p, omega)
        print(f"{p:4.1f} {omega:6.2f} {s.holder_constant:11.5f} {bound:9.5f}")
print("(p, omega) = (2, 1/2) stays below 2*sqrt(2) = 2.82843")

print()
print("=== line embedding of an asymmetric 3-point space ===")
from metricgap import FiniteMetricSpace

m = FiniteMetricSpace([[0, 1, 10], [1, 0, 9], [10, 9, 0]])
emb, s = line_embed(m, None, 1)
print("image points:", np.round(emb.image.points.ravel(), 4))
print(f"measured average distortion: {s.certified_avg_distortion:.5f}")

sym = FiniteMetricSpace([[0, 2], [2, 0]])
_, s = line_embed(sym, None, 2)
print(f"two symmetric points collapse: degenerate = {s.degenerate}")

print()
print("=== Hilbert realization of the half-snowflake of the l1 square ===")
square = PointConfig(lp_host(1, 2), [[0, 0], [1, 0], [0, 1], [1, 1]])
pts, residual = hilbert_realize_snowflake(square)
d = pts.host.pairwise(pts.points)
print("realized distances (unit square):")
print(np.round(d, 6))
print(f"PSD residual: {residual:.2e}")

print()
print("=== exponent transfer: half-snowflake at quadratic average ===")
pts = rng.standard_normal((12, 5))
m = distance_matrix(PointConfig(lp_host(np.inf, 5), pts))
emb, s = transfer_snowflake(m, None, 1, 2, 0.5)
print(f"measured q-average distortion: {s.certified_avg_distortion:.5f}")
print(f"advisory closed-form value   : {s.notes['advisory_distortion']:.5f}")
