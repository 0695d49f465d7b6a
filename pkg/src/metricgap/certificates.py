"""Dimension lower-bound certificates and average-distortion lower
bounds with explicit constants.

A certificate packages one inequality instance: the constant-free
exponent computed from spectral and Rayleigh data, the user-supplied
parametric constant K (the theory's universal constant, never pinned
numerically), the resulting bound, and a provenance table from which
the bound is recomputable exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .embeddings import EmbeddingMap, DistortionSummary, holder_constant_of, measure_distortion
from .errors import ValidationError
from .graphs import Graph, bfs_metric, hypercube
from .kernels import StochasticKernel, graph_kernel, spectrum
from .metrics import PointConfig, distance_matrix
from .rayleigh import InequalityCheck, rayleigh_ratio, _extrapolation_branch

CSV_COLUMNS = ("kind", "n", "gap", "ratio", "exponent", "K", "bound")


@dataclass
class Certificate:
    kind: str
    exponent: float
    parametric_constant: float
    bound: float
    provenance: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "exponent": self.exponent,
            "parametric_constant": self.parametric_constant,
            "bound": self.bound,
            "provenance": self.provenance,
        }

    def to_csv_row(self) -> str:
        vals = (
            self.kind,
            self.provenance.get("n", ""),
            self.provenance.get("gap", ""),
            self.provenance.get("ratio", ""),
            self.exponent,
            self.parametric_constant,
            self.bound,
        )
        return ",".join(str(v) for v in vals)

    @staticmethod
    def csv_header() -> str:
        return ",".join(CSV_COLUMNS)


def holder_constant(f: EmbeddingMap, omega: float = 1.0) -> float:
    """Sup-pair Holder constant of an embedding over its support."""
    return holder_constant_of(f, omega)


def avg_distortion(f: EmbeddingMap, p: float, omega: float = 1.0) -> DistortionSummary:
    """Measured p-average distortion of an embedding of the
    omega-snowflake of its domain."""
    return measure_distortion(f, p, omega)


def dim_certificate(
    config: PointConfig, kernel: StochasticKernel, p: float, constant: float = 1.0
) -> Certificate:
    """Dimension lower bound exp(E / (K p)) forced by one configuration,
    where E = gap * (Rayleigh ratio)^(1/p).

    The exponent E is the constant-free deliverable; K parameterizes
    the theory's universal constant and defaults to 1.
    """
    if constant <= 0:
        raise ValidationError("parametric constant must be positive")
    m = distance_matrix(config)
    report = rayleigh_ratio(kernel, m, p)
    gap = spectrum(kernel).gap
    exponent = gap * report.ratio ** (1.0 / p)
    bound = math.exp(exponent / (constant * p))
    return Certificate(
        "dim_lower",
        exponent,
        constant,
        bound,
        provenance={
            "n": kernel.n,
            "p": p,
            "gap": gap,
            "lambda2": 1.0 - gap,
            "numerator": report.numerator,
            "denominator": report.denominator,
            "ratio": report.ratio,
        },
    )


def expander_avg_lower(g: Graph, omega: float, q: int = 2) -> Certificate:
    """Fully explicit lower bound on the quadratic average distortion of
    any Hilbertian embedding of the omega-snowflake of a regular graph:

        D >= sqrt(gap) * (mean of d^(2 omega))^(1/2).

    No universal constants enter.  The same bound holds if the
    Lipschitz hypothesis is weakened to an edge-energy (discrete
    Sobolev) bound; the provenance records that the certificate is
    valid under the weaker hypothesis.
    """
    if q != 2:
        raise ValidationError("the explicit certificate is quadratic (q = 2)")
    if not (0.0 < omega <= 1.0):
        raise ValidationError("omega must lie in (0, 1]")
    kernel = graph_kernel(g)
    gap = spectrum(kernel).gap
    metric, diam = bfs_metric(g)
    moment = float((metric.d ** (2.0 * omega)).sum()) / g.n**2
    bound = math.sqrt(gap) * math.sqrt(moment)
    return Certificate(
        "avg_distortion_lower",
        omega,
        1.0,
        bound,
        provenance={
            "n": g.n,
            "gap": gap,
            "ratio": moment,
            "omega": omega,
            "q": 2,
            "diameter": diam,
            "mean_snowflaked_square": moment,
            "sobolev_hypothesis_sufficient": True,
        },
    )


def general_target_lower(g: Graph, omega: float, p: float, q: float) -> Certificate:
    """Advisory lower bound on the q-average distortion of embeddings of
    the omega-snowflake of a regular graph into lp, assembled from the
    explicit mixed-exponent extrapolation constants.

    Two routes are evaluated: the plain kernel, and the lazy-power
    kernel with s = ceil(1/gap) which trades a gap power for the factor
    s^omega (entries of the s-step lazy walk only connect vertices
    within distance s).  The larger certified value is reported, with
    the chain constant in the provenance; the statement-level constant
    in the theory is only asymptotic, so the certificate is advisory.
    """
    if not (0.0 < omega <= 1.0):
        raise ValidationError("omega must lie in (0, 1]")
    if p < 1 or q < 1:
        raise ValidationError("exponents must be >= 1")
    kernel = graph_kernel(g)
    gap = spectrum(kernel).gap
    if gap <= 1e-12:
        raise ValidationError("graph walk has no spectral gap")
    metric, diam = bfs_metric(g)
    moment = (float((metric.d ** (q * omega)).sum()) / g.n**2) ** (1.0 / q)

    branch, const_plain, _ = _extrapolation_branch(p, q, gap)
    plain = moment / const_plain

    s = math.ceil(1.0 / gap)
    lam2 = 1.0 - gap
    lam2_lazy_s = ((1.0 + lam2) / 2.0) ** s
    gap_lazy = 1.0 - lam2_lazy_s
    _, const_lazy, _ = _extrapolation_branch(p, q, gap_lazy)
    lazy_route = moment / (const_lazy * s**omega)

    route = "plain" if plain >= lazy_route else "lazy-power"
    bound = max(plain, lazy_route)
    return Certificate(
        "avg_distortion_lower",
        omega,
        1.0,
        bound,
        provenance={
            "n": g.n,
            "gap": gap,
            "ratio": moment,
            "advisory": True,
            "branch": branch,
            "route": route,
            "plain_value": plain,
            "lazy_value": lazy_route,
            "s": s,
            "lazy_power_gap": gap_lazy,
            "chain_constant": const_plain if route == "plain" else const_lazy,
            "p": p,
            "q": q,
            "omega": omega,
            "diameter": diam,
        },
    )


def _require_cube(emb: EmbeddingMap) -> int:
    n = emb.n
    k = n.bit_length() - 1
    if 1 << k != n:
        raise ValidationError("domain size must be a power of two")
    idx = np.arange(n)
    xor = idx[:, None] ^ idx[None, :]
    hamming = np.array([bin(v).count("1") for v in range(n)])[xor]
    if np.abs(emb.domain.d - hamming).max() > 1e-9:
        raise ValidationError(
            "domain must be the Hamming cube in canonical vertex order"
        )
    return k


def enflo_cube_check(emb: EmbeddingMap) -> InequalityCheck:
    """Diagonal-versus-edge inequality for Hilbert-valued maps on the
    k-cube: the sum of squared antipodal displacements never exceeds the
    sum of squared edge displacements.  Linear maps saturate it."""
    k = _require_cube(emb)
    host = emb.image.host
    if host.kind != "lp" or host.p != 2.0:
        raise ValidationError("the check needs a Euclidean image host")
    pts = emb.image.points
    n = emb.n
    full = n - 1
    diag = pts[np.arange(n) ^ full] - pts
    lhs = float((diag * diag).sum())
    rhs = 0.0
    for b in range(k):
        e = pts[np.arange(n) ^ (1 << b)] - pts
        rhs += float((e * e).sum())
    tol = 1e-9 * max(lhs, rhs, 1.0)
    return InequalityCheck(lhs <= rhs + tol, lhs, rhs, {"k": k})


def _cube_moment(k: int, s: float) -> float:
    """Exact uniform moment of the Hamming distance: distances are
    binomially distributed."""
    total = 0.0
    for j in range(k + 1):
        total += math.comb(k, j) * float(j) ** s
    return total / 2.0**k


def enflo_lower(k: int, eps: float) -> Certificate:
    """Certified lower bound (k/2)^eps on the quadratic average
    distortion of Hilbertian embeddings of the (1/2 + eps)-snowflake of
    the k-cube, with exact binomial moments in the provenance.

    The (sharp) value k^eps is recorded as advisory only; the certified
    value follows from the explicit spectral bound via the mean
    distance k/2 and Jensen.
    """
    if not (0.0 < eps <= 0.5):
        raise ValidationError("eps must lie in (0, 1/2]")
    if k < 1:
        raise ValidationError("cube dimension must be >= 1")
    omega = 0.5 + eps
    g = hypercube(k)
    gap = spectrum(graph_kernel(g)).gap
    moment = _cube_moment(k, 2.0 * omega)
    explicit = math.sqrt(gap) * math.sqrt(moment)
    bound = (k / 2.0) ** eps
    if bound > explicit + 1e-9:
        raise ValidationError("internal consistency: Jensen step failed")
    return Certificate(
        "avg_distortion_lower",
        omega,
        1.0,
        bound,
        provenance={
            "n": g.n,
            "gap": gap,
            "ratio": moment,
            "omega": omega,
            "eps": eps,
            "explicit_spectral_value": explicit,
            "advisory_sharp_value": float(k) ** eps,
        },
    )
