"""The fractional normalization map x -> x / ||x||^(1-omega) and its
sharp two-sided Holder envelope.

The map compresses norms to their omega-th power while moving points as
little as the geometry allows: it is omega-Holder with the sharp global
constant 2^(1-omega), and from below its displacement is controlled by
the parametric constant eta(p, omega), sharp on collinear pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .metrics import NormedHost

ETA_GRID_NODES = 1 << 12
ETA_SIGMA_TOL = 1e-10
_ETA_GRID = None


def _check_params(p: float, omega: float) -> None:
    if not (p > 0):
        raise ValidationError("p must be positive")
    if not (0.0 < omega < 1.0):
        raise ValidationError("omega must lie in (0, 1)")


def _eta_objective(sigma, p: float, omega: float):
    """The collinear-pair ratio whose infimum over sigma in [0, 1)
    defines eta(p, omega).  Vectorized; sigma = 0 gives 1.

    Written with expm1/log1p: the naive (1 - sigma^omega)/(1 - sigma)
    cancels catastrophically near sigma = 1 and would fake a dip below
    the true limit omega * 2^((1-omega)/(p*omega)).
    """
    sigma = np.asarray(sigma, dtype=float)
    out = np.ones_like(sigma)
    pos = sigma > 0.0
    t = sigma[pos] - 1.0
    ls = np.log1p(t)
    ratio = np.expm1(omega * ls) / t
    out[pos] = ratio * np.exp(
        ((1.0 - omega) / (p * omega)) * np.log1p(np.exp(p * omega * ls))
    )
    return out


def _eta_objective_u(u, p: float, omega: float):
    """The same objective parameterized by u = sigma^omega.

    The interior minimum can sit at sigma ~ exp(-c/omega), far below
    float range for small omega, but always at moderate u; in this
    coordinate the scan is exhaustive.  u = 0 gives 1; sigma^(1/omega)
    underflowing to zero is harmless under expm1.
    """
    u = np.asarray(u, dtype=float)
    out = np.ones_like(u)
    pos = u > 0.0
    v = u[pos]
    lu = np.log1p(v - 1.0)
    denom = -np.expm1(lu / omega)  # 1 - sigma
    out[pos] = (
        (1.0 - v)
        / denom
        * np.exp(((1.0 - omega) / (p * omega)) * np.log1p(np.exp(p * lu)))
    )
    return out


def _eta_objective_u_scalar(u: float, p: float, omega: float) -> float:
    if u <= 0.0:
        return 1.0
    lu = math.log(u)
    denom = -math.expm1(lu / omega)
    return (
        (1.0 - u)
        / denom
        * math.exp(((1.0 - omega) / (p * omega)) * math.log1p(math.exp(p * lu)))
    )


def _golden_min(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _eta_numeric(p: float, omega: float) -> tuple[float, float]:
    """Grid scan plus golden-section refinement of the collinear-pair
    objective, carried out in the coordinate u = sigma^omega.

    The 2^12 grid nodes are split three ways: linear on [0, 1),
    log-spaced toward 0, and log-spaced toward 1 (the minimizing sigma
    can be as small as exp(-c/omega), but its u is always moderate).
    The best bracket is refined by golden section in u, in log(u), and
    in log(1 - u), each to tolerance 1e-10.  Returns (minimum value,
    minimizing sigma, possibly underflowing to 0); the sigma -> 1 limit
    omega * 2^((1-omega)/(p*omega)) competes as an endpoint candidate.
    """
    global _ETA_GRID
    if _ETA_GRID is None:
        third = ETA_GRID_NODES // 3
        _ETA_GRID = np.unique(
            np.concatenate(
                [
                    np.linspace(0.0, 1.0, third, endpoint=False),
                    np.geomspace(1e-15, 0.5, third),
                    1.0 - np.geomspace(1e-14, 0.5, third),
                ]
            )
        )
    grid = _ETA_GRID
    vals = _eta_objective_u(grid, p, omega)
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = min(grid[min(i + 1, len(grid) - 1)], 1.0 - 1e-15)

    def f(u):
        return _eta_objective_u_scalar(u, p, omega)

    candidates = [
        (float(vals[i]), float(grid[i])),
        (1.0, 0.0),
        (omega * 2.0 ** ((1.0 - omega) / (p * omega)), 1.0),
    ]
    if hi > lo:
        candidates.append(_golden_min(f, lo, hi, ETA_SIGMA_TOL)[::-1])
        if lo > 0.0:
            t, val = _golden_min(
                lambda s: f(math.exp(s)), math.log(lo), math.log(hi), ETA_SIGMA_TOL
            )
            candidates.append((val, math.exp(t)))
        if hi < 1.0:
            t, val = _golden_min(
                lambda s: f(1.0 - math.exp(s)),
                math.log(1.0 - hi),
                math.log(1.0 - lo),
                ETA_SIGMA_TOL,
            )
            candidates.append((val, 1.0 - math.exp(t)))
    best_val, best_u = min(candidates)
    return best_val, best_u ** (1.0 / omega)


@lru_cache(maxsize=1024)
def eta(p: float, omega: float) -> float:
    """The sharp lower Holder constant of the fractional normalization map,
    i.e. the infimum of the collinear-pair objective over sigma in [0, 1).

    Closed forms: omega * 2^((1-omega)/(p*omega)) when p*omega >= 1
    (objective decreasing, infimum at the sigma -> 1 limit), and
    min(1, omega * 2^((1-omega)/(p*omega))) when p <= 1.  Beware: for
    p <= 1 the objective is NOT monotone once omega > 1/2-ish and its
    sigma -> 1 limit drops below the value 1 at sigma = 0; returning 1
    there would break the lower Holder envelope on near-collinear pairs
    (explicit counterexamples live in the test suite).  In the
    remaining band 1 < p < 1/omega the objective can dip in the
    interior of [0, 1) -- at sigma as small as exp(-c/omega) -- and is
    minimized numerically (4096-node mixed grid plus golden-section to
    1e-10).
    """
    _check_params(p, omega)
    if p * omega >= 1.0:
        return omega * 2.0 ** ((1.0 - omega) / (p * omega))
    if p <= 1.0:
        return min(1.0, omega * 2.0 ** ((1.0 - omega) / (p * omega)))
    return _eta_numeric(p, omega)[0]


def eta_minimizer(p: float, omega: float) -> tuple[float, float]:
    """eta(p, omega) together with a minimizing sigma of its objective."""
    _check_params(p, omega)
    if p * omega >= 1.0:
        return omega * 2.0 ** ((1.0 - omega) / (p * omega)), 1.0
    if p <= 1.0:
        limit = omega * 2.0 ** ((1.0 - omega) / (p * omega))
        return (limit, 1.0) if limit < 1.0 else (1.0, 0.0)
    return _eta_numeric(p, omega)


def f_omega(host: NormedHost, x, omega: float) -> np.ndarray:
    """x / ||x||^(1-omega), with 0 mapped to 0; norms become ||x||^omega."""
    if not (0.0 < omega <= 1.0):
        raise ValidationError("omega must lie in (0, 1]")
    x = np.asarray(x, dtype=float)
    r = host.norm(x)
    if r == 0.0:
        return np.zeros_like(x)
    if omega == 1.0:
        return x.copy()
    return x / r ** (1.0 - omega)


def f_omega_inverse(host: NormedHost, z, omega: float) -> np.ndarray:
    """Inverse of the fractional normalization: z * ||z||^(1/omega - 1)."""
    if not (0.0 < omega <= 1.0):
        raise ValidationError("omega must lie in (0, 1]")
    z = np.asarray(z, dtype=float)
    r = host.norm(z)
    if r == 0.0:
        return np.zeros_like(z)
    return z * r ** (1.0 / omega - 1.0)


def f_omega_rows(host: NormedHost, mat: np.ndarray, omega: float) -> np.ndarray:
    """Row-wise fractional normalization of an (n, dim) array."""
    mat = np.asarray(mat, dtype=float)
    r = host.norm_rows(mat)
    out = np.zeros_like(mat)
    pos = r > 0.0
    if omega == 1.0:
        return mat.copy()
    out[pos] = mat[pos] / (r[pos] ** (1.0 - omega))[:, None]
    return out


def f_omega_inverse_rows(host: NormedHost, mat: np.ndarray, omega: float) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    r = host.norm_rows(mat)
    out = np.zeros_like(mat)
    pos = r > 0.0
    out[pos] = mat[pos] * (r[pos] ** (1.0 / omega - 1.0))[:, None]
    return out


def psi_omega(rho: float, omega: float) -> float:
    """Displacement envelope of the fractional normalization as a function
    of rho = ||x|| / ||x - y||.

    Three pieces; continuous, increasing on [0, 1/2], decreasing after,
    with maximum 2^(1-omega) at rho = 1/2.
    """
    if not (0.0 < omega < 1.0):
        raise ValidationError("omega must lie in (0, 1)")
    if rho < 0:
        raise ValidationError("rho must be nonnegative")
    if rho <= 0.5:
        return (1.0 - rho) ** omega + rho**omega
    if rho <= 1.0:
        return rho ** (omega - 1.0)
    return rho**omega - (rho - 1.0) / (1.0 + rho) ** (1.0 - omega)


@dataclass
class SandwichReport:
    """Two-sided Holder check for one pair: lower <= value <= upper."""

    passed: bool
    lower: float
    value: float
    upper: float

    @property
    def lower_slack(self) -> float:
        return self.value - self.lower

    @property
    def upper_slack(self) -> float:
        return self.upper - self.value

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "lower": self.lower,
            "value": self.value,
            "upper": self.upper,
            "lower_slack": self.lower_slack,
            "upper_slack": self.upper_slack,
        }


def holder_sandwich_check(
    host: NormedHost, x, y, p: float, omega: float, rel_tol: float = 1e-10
) -> SandwichReport:
    """Verify the sharp two-sided envelope of the fractional normalization
    on one pair:

        eta(p,w) ||x-y|| / (||x||^{pw} + ||y||^{pw})^{(1-w)/(pw)}
            <= ||f_w(x) - f_w(y)|| <= 2^{1-w} ||x-y||^w.

    The left side reads 0 when x = y = 0.
    """
    _check_params(p, omega)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rx, ry = host.norm(x), host.norm(y)
    dxy = host.norm(x - y)
    value = host.norm(f_omega(host, x, omega) - f_omega(host, y, omega))
    upper = 2.0 ** (1.0 - omega) * dxy**omega
    if rx == 0.0 and ry == 0.0:
        lower = 0.0
    else:
        lower = (
            eta(p, omega)
            * dxy
            / (rx ** (p * omega) + ry ** (p * omega)) ** ((1.0 - omega) / (p * omega))
        )
    scale = max(upper, lower, value, 1e-300)
    passed = value >= lower - rel_tol * scale and value <= upper + rel_tol * scale
    return SandwichReport(passed, lower, value, upper)
