"""The fractional normalization map and its sharp Holder envelope.

x -> x / ||x||^(1-omega) raises every norm to the power omega.  It is
omega-Holder with constant exactly 2^(1-omega) (antipodal pairs are
tight), and from below its displacement is controlled by the parametric
constant eta(p, omega), tight on collinear pairs at the minimizing
norm ratio.  The landscape of eta has three regimes; in the middle one
the minimizing ratio sigma can be as small as exp(-c/omega).
"""

import numpy as np

from metricgap import eta, eta_minimizer, holder_sandwich_check, lp_host, psi_omega

print("=== eta across its three regimes ===")
print(f"{'p':>5} {'omega':>6} {'eta':>12}  regime")
for p, omega in [(0.5, 0.3), (1.0, 0.4), (1.0, 0.8), (1.5, 0.2), (2.0, 0.1), (2.0, 0.5), (4.0, 0.7)]:
    if p * omega >= 1:
        regime = "closed form (p*omega >= 1)"
    elif p <= 1:
        regime = "closed form (p <= 1, min with the limit)"
    else:
        regime = "numeric minimum"
    print(f"{p:5.2f} {omega:6.2f} {eta(p, omega):12.9f}  {regime}")

print()
print("=== where the middle-regime minimum hides ===")
for p, omega in [(2.0, 0.1), (1.5, 0.2), (3.0, 0.15)]:
    val, sigma = eta_minimizer(p, omega)
    print(f"p={p}, omega={omega}: eta = {val:.9f} at sigma* = {sigma:.3e}")

print()
print("=== the envelope on random pairs ===")
rng = np.random.default_rng(0)
host = lp_host(2, 6)
p, omega = 1.5, 0.4
for _ in range(5):
    x = rng.standard_normal(6) * rng.uniform(0.1, 5)
    y = rng.standard_normal(6) * rng.uniform(0.1, 5)
    rep = holder_sandwich_check(host, x, y, p, omega)
    print(f"lower {rep.lower:9.5f} <= value {rep.value:9.5f} <= upper {rep.upper:9.5f}"
          f"   ({'ok' if rep.passed else 'VIOLATED'})")

print()
print("=== tightness witnesses ===")
x = np.array([1.0, 0, 0, 0, 0, 0])
rep = holder_sandwich_check(host, x, -x, 2, 0.5)
print(f"antipodal pair, omega=1/2: value {rep.value:.9f} = upper {rep.upper:.9f}")
val, sigma = eta_minimizer(p, omega)
y = rng.standard_normal(6)
rep = holder_sandwich_check(host, sigma * y, y, p, omega)
print(f"collinear pair at sigma*: lower slack {rep.lower_slack:.2e} (near equality)")

print()
print("=== the displacement envelope psi peaks at rho = 1/2 ===")
for rho in (0.0, 0.25, 0.5, 0.75, 1.0, 2.0, 10.0):
    print(f"  psi_0.5({rho:5.2f}) = {psi_omega(rho, 0.5):.6f}")
