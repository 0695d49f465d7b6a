"""Boosting Rayleigh quotients across moments by recentering.

A zero of the field F(x) = sum_i pi_i f_omega^{-1}(f_omega(x) - x_i)
turns a configuration x into centered vectors y whose p-th-moment
Rayleigh data dominates the q-th-moment data of x (omega = p/q).  The
zero exists by a degree argument; here it is found by a damped
fixed-point iteration with backtracking and multi-start, and every
promised inequality is verified on the output.
"""

import numpy as np

from metricgap import (
    PointConfig,
    boost_config,
    distance_matrix,
    extrapolation_witness_check,
    graph_kernel,
    hypercube,
    lp_host,
    rayleigh_ratio,
)

print("=== an antipodal pair: the solver lands on the symmetric zero ===")
v = np.array([0.6, -0.8])
cfg = PointConfig(lp_host(2, 2), np.vstack([v, -v]))
res = boost_config(None, cfg, 1, 2, seed=0)
print(f"center = {res.center}, residual = {res.residual:.2e}")
print(f"boosted points:\n{res.y.points}")
dy = lp_host(2, 2).pairwise(res.y.points)[0, 1]
print(f"||y1 - y2|| = {dy:.12f} meets the lower sandwich 2^(1-q/p)*||x1-x2||^(q/p) = {0.5 * 2.0**2:.12f}")

print()
print("=== cube vertices in l1^3, boosting moment 3 down to 1 ===")
pts = np.array([[(u >> b) & 1 for b in range(3)] for u in range(8)], float)
cfg = PointConfig(lp_host(1, 3), pts)
k = graph_kernel(hypercube(3))
res = boost_config(k.pi, cfg, 1, 3, kernels=(k,), seed=0)
chk = res.checks["boost"][0]
print(f"solver start: {res.checks['solver_start']}, iterations: {res.iterations}")
print(f"(p/2q) R_q(x)^(1/q) = {chk['lhs']:.6f} <= R_p(y)^(1/p) = {chk['rhs']:.6f}")

rq = rayleigh_ratio(k, distance_matrix(cfg), 3)
rp = rayleigh_ratio(k, distance_matrix(res.y), 1)
print(f"raw ratios: R_3(x) = {rq.ratio:.6f}, R_1(y) = {rp.ratio:.6f}")

print()
print("=== witness form of the extrapolation inequality on fuzz ===")
rng = np.random.default_rng(3)
for trial in range(5):
    n = int(rng.integers(3, 8))
    w = rng.uniform(0.2, 1, n)
    w /= w.sum()
    a = rng.uniform(0.1, 1, (n, n))
    a = 0.5 * (a + a.T)
    kern_a = a / a.sum(1, keepdims=True)
    from metricgap import StochasticKernel

    kern = StochasticKernel(kern_a, a.sum(1) / a.sum())
    cfg = PointConfig(lp_host(2, 3), rng.standard_normal((n, 3)))
    chk = extrapolation_witness_check(kern, cfg, 1, 2, seed=trial)
    print(f"trial {trial}: lhs {chk.lhs:.6f} <= rhs {chk.rhs:.6f}  ({'ok' if chk.passed else 'FAILED'})")
