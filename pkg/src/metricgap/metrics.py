"""Finite metric spaces, lp-type normed hosts, snowflaking, and the
distance-profile isometric embedding into l_infinity.

Everything here is dense numpy at desk scale.  Metric validity is
checked up to a scale-relative tolerance: exact metric axioms cannot
survive floating point, so the triangle inequality is enforced within
1e-12 * max(d).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

METRIC_RTOL = 1e-12


def _as_float_matrix(d) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValidationError("distance matrix must be square, got shape %s" % (d.shape,))
    return d


@dataclass
class FiniteMetricSpace:
    """An n-point metric space given by its full distance matrix."""

    d: np.ndarray
    labels: list[str] | None = None

    def __post_init__(self):
        self.d = _as_float_matrix(self.d)
        if self.labels is not None and len(self.labels) != self.n:
            raise ValidationError("need one label per point")
        self.check()

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def check(self, tol: float | None = None) -> None:
        """Validate symmetry, zero diagonal, nonnegativity and the triangle
        inequality.  `tol` defaults to 1e-12 * max(d)."""
        d = self.d
        scale = float(d.max()) if d.size else 0.0
        if tol is None:
            tol = METRIC_RTOL * scale
        if not np.all(np.isfinite(d)):
            raise ValidationError("distances must be finite")
        if np.abs(d - d.T).max(initial=0.0) > tol:
            raise ValidationError("distance matrix is not symmetric")
        if np.abs(np.diag(d)).max(initial=0.0) > tol:
            raise ValidationError("diagonal of a metric must vanish")
        if d.min(initial=0.0) < -tol:
            raise ValidationError("negative distance")
        # one intermediate point at a time keeps the O(n^3) check at O(n^2) memory
        for k in range(self.n):
            slack = d - (d[:, k, None] + d[None, k, :])
            if slack.max(initial=0.0) > tol:
                i, j = np.unravel_index(np.argmax(slack), d.shape)
                raise ValidationError(
                    "triangle inequality fails: d[%d,%d]=%g > d[%d,%d]+d[%d,%d]=%g"
                    % (i, j, d[i, j], i, k, k, j, d[i, k] + d[k, j])
                )

    def to_json_dict(self) -> dict:
        out = {"n": self.n, "d": self.d.tolist()}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "FiniteMetricSpace":
        try:
            d = obj["d"]
        except (KeyError, TypeError):
            raise ValidationError("metric JSON needs a 'd' field") from None
        m = cls(d, labels=obj.get("labels"))
        if "n" in obj and int(obj["n"]) != m.n:
            raise ValidationError("metric JSON 'n' disagrees with matrix size")
        return m


@dataclass
class NormedHost:
    """An lp-type norm descriptor.

    kind "lp" is the plain space of `dim` coordinates with exponent
    p in [1, inf]; p = inf is the max-coordinate norm.  kind
    "lp-product" is the lp-sum of `copies` copies of an inner host.
    """

    kind: str
    p: float
    dim: int = 0
    copies: int = 0
    inner: "NormedHost | None" = None

    def __post_init__(self):
        if self.kind == "lp":
            if not (self.p >= 1):
                raise ValidationError("lp exponent must satisfy p >= 1")
            if self.dim < 1:
                raise ValidationError("host dimension must be positive")
        elif self.kind == "lp-product":
            if not (self.p >= 1):
                raise ValidationError("lp exponent must satisfy p >= 1")
            if self.copies < 1 or self.inner is None:
                raise ValidationError("lp-product needs copies >= 1 and an inner host")
            self.dim = self.copies * self.inner.dim
        else:
            raise ValidationError("unknown host kind %r" % self.kind)

    def norm_rows(self, mat: np.ndarray) -> np.ndarray:
        """Norms of the rows of an (m, dim) array."""
        mat = np.asarray(mat, dtype=float)
        if mat.shape[-1] != self.dim:
            raise ValidationError(
                "vector has %d coordinates, host has dim %d" % (mat.shape[-1], self.dim)
            )
        if self.kind == "lp":
            a = np.abs(mat)
            if np.isinf(self.p):
                return a.max(axis=-1)
            if self.p == 1:
                return a.sum(axis=-1)
            if self.p == 2:
                return np.sqrt((a * a).sum(axis=-1))
            return (a**self.p).sum(axis=-1) ** (1.0 / self.p)
        block = self.inner.dim
        parts = [
            self.inner.norm_rows(mat[..., i * block : (i + 1) * block])
            for i in range(self.copies)
        ]
        stacked = np.stack(parts, axis=-1)
        if np.isinf(self.p):
            return stacked.max(axis=-1)
        return (stacked**self.p).sum(axis=-1) ** (1.0 / self.p)

    def norm(self, v) -> float:
        return float(self.norm_rows(np.asarray(v, dtype=float)[None, :])[0])

    def pairwise(self, pts: np.ndarray) -> np.ndarray:
        """All pairwise distances of an (n, dim) point array."""
        pts = np.asarray(pts, dtype=float)
        diff = pts[:, None, :] - pts[None, :, :]
        return self.norm_rows(diff.reshape(-1, self.dim)).reshape(len(pts), len(pts))

    def to_json_dict(self) -> dict:
        p = "inf" if np.isinf(self.p) else self.p
        if self.kind == "lp":
            return {"kind": "lp", "p": p, "dim": self.dim}
        return {
            "kind": "lp-product",
            "p": p,
            "copies": self.copies,
            "inner": self.inner.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "NormedHost":
        try:
            kind = obj["kind"]
            p = obj["p"]
        except (KeyError, TypeError):
            raise ValidationError("host JSON needs 'kind' and 'p'") from None
        p = float("inf") if p == "inf" else float(p)
        if kind == "lp":
            return cls("lp", p, dim=int(obj["dim"]))
        if kind == "lp-product":
            return cls(
                "lp-product",
                p,
                copies=int(obj["copies"]),
                inner=cls.from_json_dict(obj["inner"]),
            )
        raise ValidationError("unknown host kind %r" % kind)


def lp_host(p: float, dim: int) -> NormedHost:
    return NormedHost("lp", float(p), dim=dim)


def real_line() -> NormedHost:
    return lp_host(2.0, 1)


@dataclass
class PointConfig:
    """A labeled list of points of a normed host."""

    host: NormedHost
    points: np.ndarray
    labels: list[str] | None = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2:
            raise ValidationError("points must form an (n, dim) array")
        if self.points.shape[1] != self.host.dim:
            raise ValidationError(
                "points have %d coordinates, host has dim %d"
                % (self.points.shape[1], self.host.dim)
            )
        if self.labels is not None and len(self.labels) != self.n:
            raise ValidationError("need one label per point")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def to_json_dict(self) -> dict:
        out = {"host": self.host.to_json_dict(), "points": self.points.tolist()}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PointConfig":
        try:
            host = NormedHost.from_json_dict(obj["host"])
            pts = obj["points"]
        except (KeyError, TypeError):
            raise ValidationError("config JSON needs 'host' and 'points'") from None
        return cls(host, np.asarray(pts, dtype=float), labels=obj.get("labels"))


@dataclass
class ProbabilityWeights:
    """Nonnegative weights summing to one (tolerance 1e-12)."""

    pi: np.ndarray

    def __post_init__(self):
        self.pi = np.asarray(self.pi, dtype=float)
        if self.pi.ndim != 1:
            raise ValidationError("weights must be a flat vector")
        if self.pi.min(initial=0.0) < 0:
            raise ValidationError("weights must be nonnegative")
        if abs(self.pi.sum() - 1.0) > 1e-12:
            raise ValidationError("weights must sum to 1 within 1e-12")

    @property
    def n(self) -> int:
        return len(self.pi)


def as_weights(w, n: int) -> np.ndarray:
    """Validate `w` as probability weights on n points; None means uniform."""
    if w is None:
        return np.full(n, 1.0 / n)
    if isinstance(w, ProbabilityWeights):
        arr = w.pi
    else:
        arr = ProbabilityWeights(np.asarray(w, dtype=float)).pi
    if len(arr) != n:
        raise ValidationError("expected %d weights, got %d" % (n, len(arr)))
    return arr


def norm_eval(host: NormedHost, v) -> float:
    """Evaluate the host norm of a single coordinate vector."""
    return host.norm(v)


def distance_matrix(config: PointConfig) -> FiniteMetricSpace:
    """Pairwise host distances of a point configuration."""
    return FiniteMetricSpace(config.host.pairwise(config.points), labels=config.labels)


def snowflake(m: FiniteMetricSpace, omega: float) -> FiniteMetricSpace:
    """Raise every distance to the power omega in (0, 1].

    Subadditivity of t -> t^omega keeps the triangle inequality valid.
    """
    if not (0.0 < omega <= 1.0):
        raise ValidationError("snowflake exponent must lie in (0, 1]")
    if omega == 1.0:
        return FiniteMetricSpace(m.d.copy(), labels=m.labels)
    return FiniteMetricSpace(m.d**omega, labels=m.labels)


def frechet_embed(m: FiniteMetricSpace) -> PointConfig:
    """Isometric embedding of an n-point metric into l_infinity^n.

    Point i is its distance profile (d[i,1], ..., d[i,n]); the
    l_infinity distance between two profiles reproduces d exactly.
    All n coordinates are kept, no pruning, for exactness.
    """
    host = lp_host(float("inf"), m.n)
    return PointConfig(host, m.d.copy(), labels=m.labels)


def complexification_norm(host: NormedHost, x, y, nodes: int = 256) -> float:
    """Quadratic angular average of the norm over planar rotations of (x, y).

    Trapezoid approximation of ((1/pi) * int_0^{2pi}
    ||cos(t) x - sin(t) y||^2 dt)^(1/2).  With y = 0 this recovers
    ||x|| (the normalization makes x -> (x, 0) an isometry).
    """
    if nodes < 8:
        raise ValidationError("quadrature needs at least 8 nodes")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (host.dim,) or y.shape != (host.dim,):
        raise ValidationError("x and y must be host vectors")
    theta = np.linspace(0.0, 2.0 * np.pi, nodes + 1)
    rows = np.cos(theta)[:, None] * x[None, :] - np.sin(theta)[:, None] * y[None, :]
    vals = host.norm_rows(rows) ** 2
    h = 2.0 * np.pi / nodes
    integral = h * (vals.sum() - 0.5 * (vals[0] + vals[-1]))
    return float(np.sqrt(integral / np.pi))
