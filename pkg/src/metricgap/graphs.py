"""Graph families, shortest-path metrics, and Cayley graphs of
special linear groups over prime fields.

Word metrics come from all-pairs breadth-first search (delegated to
scipy's compiled csgraph routines; a pure-Python BFS oracle lives in
the test suite).  Group elements are k x k matrices over F_q with unit
determinant, canonicalized row-major as integer tuples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import NumericalFailure, ValidationError
from .metrics import FiniteMetricSpace, as_weights

MAX_VERTICES = 4096


@dataclass
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: list[tuple[int, int]]
    regularity: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("graph needs at least one vertex")
        norm = []
        seen = set()
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValidationError("self-loop at vertex %d" % i)
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValidationError("edge (%d, %d) out of range" % (i, j))
            if i > j:
                i, j = j, i
            if (i, j) in seen:
                raise ValidationError("duplicate edge (%d, %d)" % (i, j))
            seen.add((i, j))
            norm.append((i, j))
        self.edges = norm
        if self.regularity is not None:
            deg = self.degrees()
            if not np.all(deg == self.regularity):
                raise ValidationError("graph is not %d-regular" % self.regularity)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = 1.0
            a[j, i] = 1.0
        return a

    def _sparse(self) -> sp.csr_matrix:
        if not self.edges:
            return sp.csr_matrix((self.n, self.n))
        rows, cols = zip(*self.edges)
        data = np.ones(len(self.edges))
        a = sp.coo_matrix((data, (rows, cols)), shape=(self.n, self.n))
        return (a + a.T).tocsr()

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        ncomp, _ = connected_components(self._sparse(), directed=False)
        return ncomp == 1

    def to_json_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Graph":
        try:
            return cls(int(obj["n"]), [tuple(e) for e in obj["edges"]])
        except (KeyError, TypeError):
            raise ValidationError("graph JSON needs 'n' and 'edges'") from None


def hypercube(k: int) -> Graph:
    """The k-dimensional Hamming cube on 2^k vertices (vertex index = bit
    pattern)."""
    if k < 1:
        raise ValidationError("hypercube dimension must be >= 1")
    n = 1 << k
    if n > MAX_VERTICES:
        raise ValidationError("hypercube capped at %d vertices" % MAX_VERTICES)
    edges = [(v, v ^ (1 << b)) for v in range(n) for b in range(k) if v < v ^ (1 << b)]
    return Graph(n, edges, regularity=k)


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValidationError("cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], regularity=2)


def complete(n: int) -> Graph:
    if n < 2:
        raise ValidationError("complete graph needs at least 2 vertices")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)], regularity=n - 1)


def random_regular(n: int, delta: int, seed: int = 0) -> Graph:
    """Random delta-regular graph by the pairing (configuration) model.

    Whole-graph rejection of loops, multi-edges and disconnected
    outcomes; deterministic per seed; gives up after 100 attempts.
    """
    if (n * delta) % 2 != 0:
        raise ValidationError("n * delta must be even")
    if not (0 < delta < n):
        raise ValidationError("need 0 < delta < n")
    rng = np.random.default_rng(seed)
    for _ in range(100):
        stubs = np.repeat(np.arange(n), delta)
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        edges = set()
        ok = True
        for i, j in pairs:
            i, j = int(i), int(j)
            if i == j:
                ok = False
                break
            e = (i, j) if i < j else (j, i)
            if e in edges:
                ok = False
                break
            edges.add(e)
        if not ok:
            continue
        g = Graph(n, sorted(edges), regularity=delta)
        if g.is_connected():
            return g
    raise NumericalFailure(
        "configuration model failed to produce a simple connected graph "
        "in 100 attempts"
    )


def bfs_metric(g: Graph) -> tuple[FiniteMetricSpace, int]:
    """All-pairs shortest-path metric of a connected graph, plus diameter."""
    d = shortest_path(g._sparse(), method="D", unweighted=True, directed=False)
    if np.isinf(d).any():
        raise ValidationError("graph is disconnected")
    return FiniteMetricSpace(d), int(d.max())


def distance_moment(m: FiniteMetricSpace, s: float, weights=None) -> float:
    """(sum_ij w_i w_j d_ij^s)^(1/s); weights default to uniform."""
    if s <= 0:
        raise ValidationError("moment exponent must be positive")
    w = as_weights(weights, m.n)
    total = float((np.outer(w, w) * m.d**s).sum())
    return total ** (1.0 / s)


# ---------------------------------------------------------------------------
# SL_k over a prime field


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def _det_mod(mat: list[list[int]], q: int) -> int:
    """Determinant mod prime q by Gaussian elimination over F_q."""
    a = [row[:] for row in mat]
    k = len(a)
    det = 1
    for col in range(k):
        pivot = next((r for r in range(col, k) if a[r][col] % q != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = (-det) % q
        det = (det * a[col][col]) % q
        inv = pow(a[col][col], q - 2, q)
        for r in range(col + 1, k):
            factor = (a[r][col] * inv) % q
            if factor:
                a[r] = [(x - factor * y) % q for x, y in zip(a[r], a[col])]
    return det % q


@dataclass
class GroupElement:
    """A k x k matrix over F_q with determinant 1."""

    mat: tuple[tuple[int, ...], ...]
    q: int

    def __post_init__(self):
        self.mat = tuple(tuple(int(x) % self.q for x in row) for row in self.mat)
        k = len(self.mat)
        if any(len(row) != k for row in self.mat):
            raise ValidationError("group element matrix must be square")
        if _det_mod([list(r) for r in self.mat], self.q) != 1:
            raise ValidationError("matrix does not have determinant 1 mod %d" % self.q)

    def label(self) -> str:
        return ";".join(",".join(str(x) for x in row) for row in self.mat)


def _mat_mul(x, y, q):
    k = len(x)
    return tuple(
        tuple(sum(x[i][t] * y[t][j] for t in range(k)) % q for j in range(k))
        for i in range(k)
    )


def sl_generators(k: int, q: int) -> list[tuple[tuple[int, ...], ...]]:
    """Deduplicated transvection generators I +/- E(i, j), i != j.

    For q = 2 the two signs coincide, so the set halves.
    """
    gens = []
    seen = set()
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            for sign in (1, q - 1):
                g = [[1 if a == b else 0 for b in range(k)] for a in range(k)]
                g[i][j] = sign % q
                t = tuple(tuple(row) for row in g)
                if t not in seen:
                    seen.add(t)
                    gens.append(t)
    return gens


@dataclass
class CayleyGroup:
    """Enumerated Cayley graph of SL_k(F_q) with its word metric."""

    k: int
    q: int
    graph: Graph
    metric: FiniteMetricSpace
    elements: list[tuple[tuple[int, ...], ...]]
    labels: list[str]
    diameter: int

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, mat) -> int:
        key = tuple(tuple(int(x) % self.q for x in row) for row in mat)
        return self._index[key]

    def __post_init__(self):
        self._index = {m: i for i, m in enumerate(self.elements)}


def cayley_sl(k: int, q: int) -> CayleyGroup:
    """Breadth-first enumeration of SL_k(F_q) from the identity under the
    transvection generators, with the word metric of the Cayley graph.

    Desk-scale caps: k = 2 with prime q <= 7, or k = 3 with q = 2.
    """
    if not _is_prime(q):
        raise ValidationError("q must be prime (prime powers need a field basis)")
    if not ((k == 2 and q <= 7) or (k == 3 and q == 2)):
        raise ValidationError("supported sizes: SL_2(F_q) for prime q <= 7, SL_3(F_2)")
    gens = sl_generators(k, q)
    identity = tuple(tuple(1 if a == b else 0 for b in range(k)) for a in range(k))
    index = {identity: 0}
    elements = [identity]
    edges = set()
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            xi = index[x]
            for g in gens:
                y = _mat_mul(x, g, q)
                yi = index.get(y)
                if yi is None:
                    yi = len(elements)
                    index[y] = yi
                    elements.append(y)
                    nxt.append(y)
                if xi != yi:
                    edges.add((min(xi, yi), max(xi, yi)))
        frontier = nxt
    graph = Graph(len(elements), sorted(edges))
    deg = graph.degrees()
    if np.all(deg == deg[0]):
        graph.regularity = int(deg[0])
    metric, diam = bfs_metric(graph)
    labels = [";".join(",".join(str(v) for v in row) for row in m) for m in elements]
    metric.labels = labels
    return CayleyGroup(k, q, graph, metric, elements, labels, diam)
