"""Row-stochastic kernels, detailed balance, and exact spectra of
reversible kernels.

A pi-reversible kernel is similar to the symmetric matrix
S = diag(pi)^(1/2) A diag(pi)^(-1/2), so its spectrum is real and the
eigenproblem is solved symmetrically.  The production eigensolver is
LAPACK's dense symmetric routine; a self-contained cyclic Jacobi
implementation is kept alongside as an independent route and is
cross-checked against it in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graphs import Graph
from .metrics import as_weights

MAX_DENSE_N = 4096


@dataclass
class StochasticKernel:
    """Row-stochastic matrix with stationary weights satisfying detailed
    balance pi_i a_ij = pi_j a_ji."""

    a: np.ndarray
    pi: np.ndarray
    tol: float = 1e-12

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        if self.a.ndim != 2 or self.a.shape[0] != self.a.shape[1]:
            raise ValidationError("kernel matrix must be square")
        if self.n > MAX_DENSE_N:
            raise ValidationError("dense kernels are capped at n = %d" % MAX_DENSE_N)
        self.pi = as_weights(self.pi, self.n)
        if self.pi.min() <= 0.0:
            raise ValidationError(
                "stationary weights must be strictly positive (zero weight "
                "makes reversibility degenerate)"
            )
        if self.a.min() < -self.tol:
            raise ValidationError("kernel entries must be nonnegative")
        rows = self.a.sum(axis=1)
        if np.abs(rows - 1.0).max() > self.tol:
            raise ValidationError("rows must sum to 1 within %g" % self.tol)
        flux = self.pi[:, None] * self.a
        if np.abs(flux - flux.T).max() > self.tol:
            raise ValidationError(
                "kernel is not pi-reversible within %g" % self.tol
            )

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def symmetrized(self) -> np.ndarray:
        s = np.sqrt(self.pi)
        sym = (s[:, None] * self.a) / s[None, :]
        return 0.5 * (sym + sym.T)

    def to_json_dict(self) -> dict:
        return {"a": self.a.tolist(), "pi": self.pi.tolist()}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "StochasticKernel":
        try:
            return cls(np.asarray(obj["a"], float), np.asarray(obj["pi"], float))
        except (KeyError, TypeError):
            raise ValidationError("kernel JSON needs 'a' and 'pi'") from None


@dataclass
class Spectrum:
    """Eigenvalues of a reversible kernel, sorted decreasing."""

    eigenvalues: np.ndarray
    lambda2: float
    gap: float
    abs_gap: float

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if abs(ev[0] - 1.0) > 1e-9:
            raise ValidationError("leading eigenvalue of a stochastic kernel must be 1")
        if ev.max() > 1.0 + 1e-9 or ev.min() < -1.0 - 1e-9:
            raise ValidationError("reversible kernel spectrum must lie in [-1, 1]")
        self.eigenvalues = ev

    def to_json_dict(self) -> dict:
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "lambda2": self.lambda2,
            "gap": self.gap,
            "abs_gap": self.abs_gap,
        }


def _spectrum_from_eigenvalues(ev: np.ndarray) -> Spectrum:
    ev = np.sort(ev)[::-1]
    lambda2 = float(ev[1]) if len(ev) > 1 else float(ev[0])
    abs_tail = np.abs(ev[1:]).max() if len(ev) > 1 else abs(float(ev[0]))
    return Spectrum(ev, lambda2, 1.0 - lambda2, 1.0 - float(abs_tail))


def spectrum(k: StochasticKernel) -> Spectrum:
    """Exact spectrum of a reversible kernel via its symmetrization."""
    return _spectrum_from_eigenvalues(np.linalg.eigvalsh(k.symmetrized()))


def spectrum_jacobi(k: StochasticKernel) -> Spectrum:
    """Same spectrum through the cyclic Jacobi route."""
    return _spectrum_from_eigenvalues(jacobi_eigenvalues(k.symmetrized()))


def jacobi_eigenvalues(
    s: np.ndarray, rel_tol: float = 1e-12, max_sweeps: int = 60
) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps row by row over all off-diagonal pairs until the off-diagonal
    Frobenius norm drops below rel_tol * ||S||_F.  Unconditionally
    convergent; deterministic rotation order.
    """
    a = np.array(s, dtype=float)
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy()
    fro = np.linalg.norm(a)
    if fro == 0.0:
        return np.zeros(n)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= rel_tol * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                t = np.sign(theta) / (abs(theta) + np.hypot(1.0, theta))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.hypot(1.0, t)
                sn = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - sn * rq
                a[q, :] = sn * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - sn * cq
                a[:, q] = sn * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
    return a.diagonal().copy()


def second_eigenvector(k: StochasticKernel) -> np.ndarray:
    """A unit-pi-norm eigenvector of A for its second-largest eigenvalue.

    Obtained from the symmetrization, so it is automatically mean-zero
    with respect to pi.  Sign fixed by the largest-magnitude entry.
    """
    sym = k.symmetrized()
    w, v = np.linalg.eigh(sym)
    vec = v[:, np.argsort(w)[-2]] if k.n > 1 else v[:, 0]
    u = vec / np.sqrt(k.pi)
    idx = int(np.argmax(np.abs(u)))
    if u[idx] < 0:
        u = -u
    return u / np.sqrt(np.sum(k.pi * u * u))


def graph_kernel(g: Graph) -> StochasticKernel:
    """Simple-random-walk kernel of a regular connected graph.

    a[i][j] = (1/degree) on edges, stationary weights uniform.
    """
    degrees = g.degrees()
    if g.n > 1 and not np.all(degrees == degrees[0]):
        raise ValidationError(
            "graph is not regular; build StochasticKernel directly with "
            "pi proportional to the degrees instead"
        )
    if not g.is_connected():
        raise ValidationError("graph must be connected")
    if g.n == 1:
        raise ValidationError("walk on a single vertex is degenerate")
    deg = int(degrees[0])
    if deg == 0:
        raise ValidationError("graph has no edges")
    a = g.adjacency() / deg
    return StochasticKernel(a, np.full(g.n, 1.0 / g.n))


def lazy(k: StochasticKernel) -> StochasticKernel:
    """The lazy walk (I + A)/2; maps every eigenvalue to (1 + lam)/2."""
    a = 0.5 * np.eye(k.n) + 0.5 * k.a
    return StochasticKernel(a, k.pi.copy(), tol=k.tol)


def power(k: StochasticKernel, s: int) -> StochasticKernel:
    """Dense s-step kernel A^s; tolerance grows linearly with s."""
    if s < 1 or int(s) != s:
        raise ValidationError("power exponent must be a positive integer")
    s = int(s)
    if s == 1:
        return StochasticKernel(k.a.copy(), k.pi.copy(), tol=k.tol)
    a = np.linalg.matrix_power(k.a, s)
    return StochasticKernel(a, k.pi.copy(), tol=s * 1e-12)
