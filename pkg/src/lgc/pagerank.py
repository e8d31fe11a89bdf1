"""Exact PageRank solver and the push-based approximate solver.

The walk matrix is the lazy one, W = (I + D^-1 A) / 2, and PageRank is the
fixed point of pr = alpha*s + (1-alpha)*pr*W for row vectors. The approximate
solver maintains the certificate p = pr_{s-r} with r(u) < eps*deg(u) at exit,
work bounded by 1/(eps*alpha) and support volume by 2/((1-alpha)*eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DomainError

DENSE_SOLVE_CAP = 2000


class SparseMass:
    """Sparse nonnegative vertex-to-mass map with a cached L1 norm.

    Zero entries are dropped at construction; iteration order is by vertex id.
    """

    __slots__ = ("_m", "l1")

    def __init__(self, mapping=None):
        m = {}
        total = 0.0
        if mapping:
            for u in sorted(mapping):
                x = float(mapping[u])
                if x < 0.0:
                    raise ValueError(f"negative mass {x} at vertex {u}")
                if x != 0.0:
                    m[int(u)] = x
                    total += x
        self._m = m
        self.l1 = total

    @classmethod
    def indicator(cls, u):
        return cls({int(u): 1.0})

    @classmethod
    def degree_uniform(cls, graph, vset):
        """Degree-normalized uniform distribution on the set."""
        ids = list(vset)
        vol = graph.volume(ids)
        if vol <= 0:
            raise DomainError("degree-uniform distribution needs positive volume")
        return cls({u: graph.degrees[u] / vol for u in ids})

    @classmethod
    def from_dense(cls, arr):
        arr = np.asarray(arr, dtype=float)
        return cls({int(u): arr[u] for u in np.flatnonzero(arr > 0.0)})

    def get(self, u, default=0.0):
        return self._m.get(u, default)

    def __getitem__(self, u):
        return self._m.get(u, 0.0)

    def __len__(self):
        return len(self._m)

    def __contains__(self, u):
        return u in self._m

    def __eq__(self, other):
        return isinstance(other, SparseMass) and self._m == other._m

    def items(self):
        return self._m.items()

    @property
    def support(self):
        return np.fromiter(self._m.keys(), dtype=np.int64, count=len(self._m))

    def as_dict(self):
        return dict(self._m)

    def to_dense(self, n):
        out = np.zeros(n)
        for u, x in self._m.items():
            out[u] = x
        return out

    def __repr__(self):
        return f"SparseMass(support={len(self)}, l1={self.l1:g})"


@dataclass(frozen=True)
class PageRankParams:
    alpha: float
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in (0, 1], got {self.epsilon}")


@dataclass(frozen=True)
class PushStats:
    push_count: int
    work: float
    support_volume: float


def _support_array(s):
    if isinstance(s, SparseMass):
        return s.support
    return np.array(sorted(s), dtype=np.int64)


def _check_support_degrees(graph, support):
    if support.size and (graph.degrees[support] <= 0.0).any():
        bad = support[graph.degrees[support] <= 0.0][0]
        raise DomainError(f"vertex {bad} has degree 0; the walk is undefined there")


def lazy_walk_matrix(graph, dense=False):
    """CSR (or dense) lazy walk matrix; degree-0 vertices get identity rows."""
    n = graph.n
    diag = np.full(n, 0.5)
    diag[graph.degrees <= 0.0] = 1.0
    off_rows = np.repeat(np.arange(n), np.diff(graph.indptr))
    with np.errstate(divide="ignore", invalid="ignore"):
        off_data = 0.5 * graph.weights / graph.degrees[off_rows]
    w = sp.csr_matrix(
        (np.concatenate([diag, off_data]),
         (np.concatenate([np.arange(n), off_rows]),
          np.concatenate([np.arange(n), graph.indices]))),
        shape=(n, n),
    )
    return w.toarray() if dense else w


def lazy_step(graph, v):
    """One application of the lazy walk to a sparse mass vector."""
    support = _support_array(v)
    if support.size == 0:
        return SparseMass()
    _check_support_degrees(graph, support)
    out = {}
    for u in support:
        u = int(u)
        m = v[u]
        out[u] = out.get(u, 0.0) + 0.5 * m
        nbr, ws = graph.neighbors(u)
        spread = 0.5 * m / graph.degrees[u]
        for x, w in zip(nbr, ws):
            x = int(x)
            out[x] = out.get(x, 0.0) + spread * w
    return SparseMass(out)


def exact_pagerank(graph, s, alpha, tolerance=1e-12, method="auto"):
    """Dense PageRank vector for starting vector s and teleport alpha.

    s may be a SparseMass, a {vertex: mass} mapping (signed values allowed,
    which supports certificate replay), or a dense array. method="solve"
    solves the fixed-point system directly (dense below 2000 vertices, sparse
    LU above); method="series" sums the walk series, truncating once the
    geometric tail (1-alpha)^(T+1) drops below tolerance.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    n = graph.n
    if isinstance(s, np.ndarray):
        dense_s = np.asarray(s, dtype=float).copy()
        if dense_s.shape != (n,):
            raise ValueError("starting vector has wrong length")
        support = np.flatnonzero(dense_s)
    else:
        items = s.items() if isinstance(s, SparseMass) else sorted(s.items())
        dense_s = np.zeros(n)
        for u, x in items:
            if not 0 <= u < n:
                raise ValueError(f"vertex id {u} out of range")
            dense_s[u] = x
        support = np.flatnonzero(dense_s)
    if alpha == 1.0:
        return dense_s
    _check_support_degrees(graph, support)
    if method == "auto":
        method = "solve"
    if method == "solve":
        w = lazy_walk_matrix(graph)
        system = sp.identity(n, format="csc") - (1.0 - alpha) * w.T.tocsc()
        if n <= DENSE_SOLVE_CAP:
            return np.linalg.solve(system.toarray(), alpha * dense_s)
        return spla.spsolve(system, alpha * dense_s)
    if method == "series":
        w_t = lazy_walk_matrix(graph).T.tocsr()
        horizon = int(math.ceil(math.log(tolerance) / math.log1p(-alpha))) - 1
        horizon = max(horizon, 0)
        walk = dense_s.copy()
        acc = alpha * walk
        decay = alpha
        for _ in range(horizon):
            walk = w_t @ walk
            decay *= 1.0 - alpha
            acc += decay * walk
        return acc
    raise ValueError(f"unknown method {method!r}")


def approximate_pagerank(graph, s, params):
    """Push-based eps-approximate PageRank from starting vector s.

    Returns (p, r, stats) where p = pr_{s-r} is nonnegative and every exit
    residual satisfies r(u) < eps*deg(u). Pushes are processed FIFO: the queue
    holds exactly the violating vertices, vertices enter when they cross the
    threshold, and no vertex appears twice.
    """
    if not isinstance(params, PageRankParams):
        params = PageRankParams(*params)
    support = _support_array(s)
    seed_vals = np.array([float(s[int(u)]) for u in support])
    if (seed_vals < 0).any():
        raise ValueError("starting vector must be nonnegative")
    if seed_vals.sum() > 1.0 + 1e-12:
        raise ValueError("starting vector must have L1 norm at most 1")
    _check_support_degrees(graph, support)
    p, r, pushes, work = _push(
        graph.indptr, graph.indices, graph.weights, graph.degrees,
        support, seed_vals, params.alpha, params.epsilon, graph.n,
    )
    supp_vol = float(graph.degrees[p > 0.0].sum())
    return (
        SparseMass.from_dense(p),
        SparseMass.from_dense(r),
        PushStats(push_count=int(pushes), work=float(work), support_volume=supp_vol),
    )


def _push_python(indptr, indices, weights, degrees, seed_ids, seed_vals, alpha, eps, n):
    p = np.zeros(n)
    r = np.zeros(n)
    r[seed_ids] = seed_vals
    cap = n + 1
    queue = np.empty(cap, dtype=np.int64)
    in_queue = np.zeros(n, dtype=bool)
    head = tail = size = 0
    for u in seed_ids:
        if r[u] >= eps * degrees[u]:
            queue[tail] = u
            tail = (tail + 1) % cap
            in_queue[u] = True
            size += 1
    pushes = 0
    work = 0.0
    while size:
        u = int(queue[head])
        head = (head + 1) % cap
        size -= 1
        in_queue[u] = False
        mass = r[u]
        du = degrees[u]
        pushes += 1
        work += du
        p[u] += alpha * mass
        lo, hi = indptr[u], indptr[u + 1]
        nbr = indices[lo:hi]
        r[nbr] += (1.0 - alpha) * mass / (2.0 * du) * weights[lo:hi]
        crossed = nbr[~in_queue[nbr] & (r[nbr] >= eps * degrees[nbr])]
        for v in crossed:
            queue[tail] = v
            tail = (tail + 1) % cap
            in_queue[v] = True
            size += 1
        r[u] = (1.0 - alpha) * mass * 0.5
        if r[u] >= eps * du:
            queue[tail] = u
            tail = (tail + 1) % cap
            in_queue[u] = True
            size += 1
    return p, r, pushes, work


def _push_kernel(indptr, indices, weights, degrees, seed_ids, seed_vals, alpha, eps, n):
    p = np.zeros(n)
    r = np.zeros(n)
    for i in range(seed_ids.shape[0]):
        r[seed_ids[i]] = seed_vals[i]
    cap = n + 1
    queue = np.empty(cap, dtype=np.int64)
    in_queue = np.zeros(n, dtype=np.bool_)
    head = 0
    tail = 0
    size = 0
    for i in range(seed_ids.shape[0]):
        u = seed_ids[i]
        if r[u] >= eps * degrees[u]:
            queue[tail] = u
            tail = (tail + 1) % cap
            in_queue[u] = True
            size += 1
    pushes = 0
    work = 0.0
    while size > 0:
        u = queue[head]
        head = (head + 1) % cap
        size -= 1
        in_queue[u] = False
        mass = r[u]
        du = degrees[u]
        pushes += 1
        work += du
        p[u] += alpha * mass
        scale = (1.0 - alpha) * mass / (2.0 * du)
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            r[v] += scale * weights[j]
            if not in_queue[v] and r[v] >= eps * degrees[v]:
                queue[tail] = v
                tail = (tail + 1) % cap
                in_queue[v] = True
                size += 1
        r[u] = (1.0 - alpha) * mass * 0.5
        if r[u] >= eps * du:
            queue[tail] = u
            tail = (tail + 1) % cap
            in_queue[u] = True
            size += 1
    return p, r, pushes, work


try:
    from numba import njit as _njit

    _push_kernel_jit = _njit(cache=True)(_push_kernel)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def _push(indptr, indices, weights, degrees, seed_ids, seed_vals, alpha, eps, n):
    if HAVE_NUMBA:
        return _push_kernel_jit(indptr, indices, weights, degrees, seed_ids, seed_vals,
                                float(alpha), float(eps), n)
    return _push_python(indptr, indices, weights, degrees, seed_ids, seed_vals,
                        float(alpha), float(eps), n)
