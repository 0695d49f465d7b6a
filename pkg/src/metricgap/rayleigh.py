"""Nonlinear Rayleigh quotients and certified lower bounds on nonlinear
spectral gaps.

The gap of a kernel A relative to a metric raised to the power p is a
supremum over point configurations and is not computable exactly in
general; everything here therefore produces either the ratio realized
by one explicit configuration (a certified lower bound) or a seeded
heuristic search over configurations.  Ratios with vanishing edge
energy are 0 by convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .kernels import StochasticKernel, second_eigenvector, spectrum, power
from .metrics import FiniteMetricSpace, NormedHost, PointConfig


@dataclass
class RayleighReport:
    """One configuration's Rayleigh data: pair-average of d^p against the
    edge (pi * A)-average, and their ratio."""

    numerator: float
    denominator: float
    ratio: float
    p: float

    def to_json_dict(self) -> dict:
        return {
            "numerator": self.numerator,
            "denominator": self.denominator,
            "ratio": self.ratio,
            "p": self.p,
        }


@dataclass
class InequalityCheck:
    """A verified inequality: lhs <= rhs, with slack and context."""

    passed: bool
    lhs: float
    rhs: float
    detail: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "detail": self.detail,
        }


def _ratio_report(num: float, den: float, p: float) -> RayleighReport:
    ratio = num / den if den > 0.0 else 0.0
    return RayleighReport(num, den, ratio, p)


def rayleigh_ratio(k: StochasticKernel, m: FiniteMetricSpace, p: float) -> RayleighReport:
    """Certified lower bound on the nonlinear gap of k relative to d^p,
    realized by the configuration behind m."""
    if k.n != m.n:
        raise ValidationError("kernel size %d != metric size %d" % (k.n, m.n))
    if p < 1:
        raise ValidationError("exponent p must be >= 1")
    dp = m.d**p
    num = float((np.outer(k.pi, k.pi) * dp).sum())
    den = float(((k.pi[:, None] * k.a) * dp).sum())
    return _ratio_report(num, den, p)


def gamma_euclidean_exact(k: StochasticKernel) -> float:
    """The nonlinear gap for squared Euclidean distances equals the
    reciprocal linear gap 1/(1 - lambda2) exactly."""
    lam2 = spectrum(k).lambda2
    if lam2 >= 1.0 - 1e-12:
        return math.inf
    return 1.0 / (1.0 - lam2)


def _cross_distances(x: PointConfig, y: PointConfig) -> np.ndarray:
    if x.host is not y.host and x.host.to_json_dict() != y.host.to_json_dict():
        raise ValidationError("configurations must share one host")
    if x.n != y.n:
        raise ValidationError("configurations must have equal length")
    diff = x.points[:, None, :] - y.points[None, :, :]
    return x.host.norm_rows(diff.reshape(-1, x.host.dim)).reshape(x.n, y.n)


def absolute_rayleigh(
    k: StochasticKernel,
    x,
    y=None,
    *,
    p: float,
) -> RayleighReport:
    """Two-configuration Rayleigh ratio that lower-bounds the absolute
    nonlinear gap (the variant penalizing eigenvalues near -1).

    Accepts either two equal-length configurations in one host, or a
    single metric on 2n labels whose first n points are x and last n
    are y.
    """
    if p <= 0:
        raise ValidationError("exponent p must be positive")
    if y is None:
        if not isinstance(x, FiniteMetricSpace):
            raise ValidationError("single-argument form needs a metric over 2n labels")
        if x.n != 2 * k.n:
            raise ValidationError("paired metric must have exactly 2n points")
        cross = x.d[: k.n, k.n :]
    else:
        cross = _cross_distances(x, y)
        if k.n != cross.shape[0]:
            raise ValidationError("kernel size does not match configurations")
    dp = cross**p
    num = float((np.outer(k.pi, k.pi) * dp).sum())
    den = float(((k.pi[:, None] * k.a) * dp).sum())
    return _ratio_report(num, den, p)


def markov_type_ratio(
    k: StochasticKernel, m: FiniteMetricSpace, p: float, s: int
) -> float:
    """Ratio comparing s-step and 1-step walk displacement moments; a
    lower bound on the Markov type p constant.  Zero edge energy gives 0.
    """
    if k.n != m.n:
        raise ValidationError("kernel size %d != metric size %d" % (k.n, m.n))
    if p < 1:
        raise ValidationError("exponent p must be >= 1")
    dp = m.d**p
    ks = power(k, s)
    num = float(((k.pi[:, None] * ks.a) * dp).sum())
    den = float(((k.pi[:, None] * k.a) * dp).sum())
    if den <= 0.0:
        return 0.0
    return (num / (s * den)) ** (1.0 / p)


def scalar_extrapolation_check(
    k: StochasticKernel, s_vec, beta: float
) -> InequalityCheck:
    """Verify the scalar moment-extrapolation inequality: the pair-average
    of |s_i - s_j|^beta is at most (beta / sqrt(gap))^beta times the edge
    average, for beta >= 2."""
    if beta < 2:
        raise ValidationError("extrapolation exponent must satisfy beta >= 2")
    s_vec = np.asarray(s_vec, dtype=float)
    if s_vec.shape != (k.n,):
        raise ValidationError("need one scalar per kernel state")
    gap = spectrum(k).gap
    diff = np.abs(s_vec[:, None] - s_vec[None, :]) ** beta
    lhs = float((np.outer(k.pi, k.pi) * diff).sum())
    edge = float(((k.pi[:, None] * k.a) * diff).sum())
    if gap <= 1e-12:
        return InequalityCheck(True, lhs, math.inf, {"gap": gap, "vacuous": True})
    rhs = (beta / math.sqrt(gap)) ** beta * edge
    tol = 1e-12 * max(lhs, rhs, 1.0)
    return InequalityCheck(lhs <= rhs + tol, lhs, rhs, {"gap": gap, "beta": beta})


def _extrapolation_branch(p: float, q: float, gap: float) -> tuple[str, float, float]:
    """Explicit constant and right-hand moment for the mixed-exponent
    extrapolation inequality, by parameter branch."""
    root = math.sqrt(gap) if gap > 0 else 0.0
    if root == 0.0:
        return ("degenerate", math.inf, max(p, q))
    if q >= p >= 2:
        return ("q>=p>=2", 2.0 * q / root, q)
    if p <= 2 and q >= p:
        return ("p<=2<=q", (2.0 * q / (p * root)) ** (2.0 / p), q)
    if p >= q and p >= 2:
        return ("p>=q,p>=2", p / root, p)
    # q <= p <= 2: pass through the Hilbertian realization of the p/2-snowflake
    return ("q<=p<=2", (2.0 / root) ** (2.0 / p), p)


def vector_extrapolation_bound(
    k: StochasticKernel, config: PointConfig, q: float, p: float | None = None
) -> InequalityCheck:
    """Check the mixed-exponent moment comparison for a configuration in
    an lp host: the q-th pair moment of distances against the
    max(p, q)-th edge moment, with the explicit per-branch constant.
    """
    host = config.host
    if host.kind != "lp" or np.isinf(host.p):
        raise ValidationError("configuration must live in a finite-exponent lp host")
    if p is None:
        p = float(host.p)
    elif abs(p - host.p) > 1e-12:
        raise ValidationError("p must match the host exponent")
    if q < 1 or p < 1:
        raise ValidationError("exponents must be >= 1")
    if k.n != config.n:
        raise ValidationError("kernel size does not match configuration")
    gap = spectrum(k).gap
    branch, const, rhs_moment = _extrapolation_branch(p, q, gap)
    d = host.pairwise(config.points)
    lhs = float((np.outer(k.pi, k.pi) * d**q).sum()) ** (1.0 / q)
    edge = float(((k.pi[:, None] * k.a) * d**rhs_moment).sum()) ** (1.0 / rhs_moment)
    rhs = const * edge
    detail = {
        "branch": branch,
        "constant": const,
        "lhs_moment": q,
        "rhs_moment": rhs_moment,
        "gap": gap,
    }
    if math.isinf(rhs):
        return InequalityCheck(True, lhs, rhs, {**detail, "vacuous": True})
    tol = 1e-10 * max(lhs, rhs, 1.0)
    return InequalityCheck(lhs <= rhs + tol, lhs, rhs, detail)


def _config_sums(
    host: NormedHost, pts: np.ndarray, p: float, w2: np.ndarray, wa: np.ndarray
) -> tuple[float, float, np.ndarray]:
    d = host.pairwise(pts)
    dp = d**p
    return float((w2 * dp).sum()), float((wa * dp).sum()), dp


def gamma_lower_bound_search(
    k: StochasticKernel,
    host: NormedHost,
    p: float,
    budget: int = 20,
    seed: int = 0,
) -> tuple[RayleighReport, PointConfig]:
    """Heuristic maximization of the Rayleigh ratio over configurations.

    Warm-started with the second eigenvector replicated across host
    coordinates, plus seeded Gaussian configurations, each refined by
    per-point coordinate descent for `budget` sweeps.  Deterministic
    given the seed; the returned ratio is always a valid lower bound.
    """
    if budget < 1:
        raise ValidationError("budget must be >= 1")
    if p < 1:
        raise ValidationError("exponent p must be >= 1")
    rng = np.random.default_rng(seed)
    n, dim = k.n, host.dim
    w2 = np.outer(k.pi, k.pi)
    wa = k.pi[:, None] * k.a
    sym_w2 = 0.5 * (w2 + w2.T)
    sym_wa = 0.5 * (wa + wa.T)

    starts = []
    if n > 1:
        u = second_eigenvector(k)
        starts.append(np.repeat(u[:, None], dim, axis=1))
    starts.extend(rng.standard_normal((n, dim)) for _ in range(4))

    def ratio_of(num, den):
        return num / den if den > 0 else 0.0

    best_ratio = -1.0
    best_pts = starts[0].copy()
    best_report = None
    for pts in starts:
        pts = pts.astype(float).copy()
        num, den, dp = _config_sums(host, pts, p, w2, wa)
        cur = ratio_of(num, den)
        step = 0.5 * max(1.0, float(np.abs(pts).max()))
        for _ in range(budget):
            improved = False
            for i in range(n):
                for c in range(dim):
                    for delta in (step, -step):
                        cand = pts[i].copy()
                        cand[c] += delta
                        row = host.norm_rows(cand[None, :] - pts)
                        row[i] = 0.0
                        row_p = row**p
                        dnum = 2.0 * float((sym_w2[i] * (row_p - dp[i])).sum())
                        dden = 2.0 * float((sym_wa[i] * (row_p - dp[i])).sum())
                        new = ratio_of(num + dnum, den + dden)
                        if new > cur + 1e-15:
                            pts[i] = cand
                            num += dnum
                            den += dden
                            dp[i] = row_p
                            dp[:, i] = row_p
                            cur = new
                            improved = True
            if not improved:
                step *= 0.5
                if step < 1e-9:
                    break
        if cur > best_ratio:
            best_ratio = cur
            best_pts = pts.copy()
            best_report = RayleighReport(num, den, cur, p)
    if best_report is None:
        best_report = RayleighReport(0.0, 0.0, 0.0, p)
    return best_report, PointConfig(host, best_pts)
