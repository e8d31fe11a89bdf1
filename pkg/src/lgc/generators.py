"""Reproducible graph constructions: rings, planted-cluster benchmarks,
two-chain multigraph instances, plain chains, and k-NN similarity graphs.

Every randomized generator is deterministic under its seed; structural
counts (vertex totals, ring edge counts, resolved multiplicities) never
depend on the random draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .graph import VertexSet, WeightedGraph


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def chain(ell):
    """Unit-weight path on ell+1 vertices, endpoints of degree 1."""
    if ell < 1:
        raise ValueError(f"chain length must be at least 1, got {ell}")
    return WeightedGraph.from_edges([(i, i + 1, 1.0) for i in range(ell)])


def watts_strogatz(n_vertices, k, beta, seed):
    """Ring lattice with k/2 neighbors per side, each edge rewired w.p. beta.

    Rewiring moves the far endpoint of a lattice edge to a uniformly chosen
    non-duplicate, non-self target, preserving the edge count n*k/2. A rewire
    is skipped when the source vertex is already connected to everyone else.
    """
    if k % 2 != 0:
        raise ValueError(f"mean degree k must be even, got {k}")
    if not 0 < k < n_vertices:
        raise ValueError(f"need 0 < k < n, got k={k}, n={n_vertices}")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must be in [0, 1], got {beta}")
    rng = _rng(seed)
    adj = [set() for _ in range(n_vertices)]
    for i in range(n_vertices):
        for j in range(1, k // 2 + 1):
            v = (i + j) % n_vertices
            adj[i].add(v)
            adj[v].add(i)
    for i in range(n_vertices):
        for j in range(1, k // 2 + 1):
            v = (i + j) % n_vertices
            if rng.random() >= beta:
                continue
            if v not in adj[i]:
                continue  # already rewired away by an earlier step
            if len(adj[i]) >= n_vertices - 1:
                continue
            while True:
                t = int(rng.integers(0, n_vertices))
                if t != i and t not in adj[i]:
                    break
            adj[i].discard(v)
            adj[v].discard(i)
            adj[i].add(t)
            adj[t].add(i)
    edges = [(i, v, 1.0) for i in range(n_vertices) for v in adj[i] if i < v]
    return WeightedGraph.from_edges(edges, n=n_vertices)


@dataclass(frozen=True)
class Experiment1Config:
    """Planted-cluster benchmark: a ring-lattice cluster A whose internal
    connectivity is tuned by beta, surrounded by two random blocks."""

    beta: float
    seed: int = 0
    size_a: int = 300
    size_b: int = 20
    size_c: int = 550
    ws_mean_degree: int = 60
    p_bb: float = 0.3
    p_cc: float = 0.02
    p_ab: float = 0.001
    p_ac: float = 0.002
    p_bc: float = 0.002

    def __post_init__(self):
        for name in ("p_bb", "p_cc", "p_ab", "p_ac", "p_bc"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        if self.ws_mean_degree % 2 != 0 or self.ws_mean_degree >= self.size_a:
            raise ValueError("ws_mean_degree must be even and below the A block size")


def _block_pairs(rng, rows, cols, p, row_offset, col_offset, symmetric):
    """Bernoulli edges between two id blocks; upper triangle when symmetric."""
    draw = rng.random((rows, cols))
    if symmetric:
        hits = np.argwhere(np.triu(draw < p, k=1))
    else:
        hits = np.argwhere(draw < p)
    return [(int(i) + row_offset, int(j) + col_offset, 1.0) for i, j in hits]


def experiment1_graph(config):
    """Build the 870-vertex benchmark; returns (graph, ground-truth set A).

    Block A occupies ids [0, size_a); B and C follow contiguously. Cross-block
    edges are independent Bernoulli draws at the configured probabilities.
    """
    rng = _rng(config.seed)
    na, nb, nc = config.size_a, config.size_b, config.size_c
    n = na + nb + nc
    ws = watts_strogatz(na, config.ws_mean_degree, config.beta, rng)
    edges = [(u, v, w) for u, v, w in ws.edge_list()]
    edges += _block_pairs(rng, nb, nb, config.p_bb, na, na, symmetric=True)
    edges += _block_pairs(rng, nc, nc, config.p_cc, na + nb, na + nb, symmetric=True)
    edges += _block_pairs(rng, na, nb, config.p_ab, 0, na, symmetric=False)
    edges += _block_pairs(rng, na, nc, config.p_ac, 0, na + nb, symmetric=False)
    edges += _block_pairs(rng, nb, nc, config.p_bc, na, na + nb, symmetric=False)
    graph = WeightedGraph.from_edges(edges, n=n)
    return graph, VertexSet(graph, range(na))


@dataclass(frozen=True)
class HardInstanceSpec:
    """Two chains of multi-edges joined by one multi-edge bridge.

    The top chain (endpoints a and c, midpoint b) has ell segments of n/ell
    parallel edges; the bottom chain (endpoints d and e) has c0/(phi*ell)
    segments of phi*n*ell/c0 parallel edges; b and d are joined by phi*n
    parallel edges. phi is the knob that sets the conductance of the top
    chain (approximately phi/2 after normalization).
    """

    ell: int
    n: float
    phi: float
    c0: float

    def __post_init__(self):
        if self.ell < 4 or self.ell % 2 != 0:
            raise ValueError(f"ell must be an even integer >= 4, got {self.ell}")
        if self.n <= 0 or self.phi <= 0 or self.c0 <= 0:
            raise ValueError("n, phi and c0 must all be positive")

    def raw_multiplicities(self):
        return {
            "top_edge": self.n / self.ell,
            "bridge": self.phi * self.n,
            "bottom_edge": self.phi * self.n * self.ell / self.c0,
            "bottom_len": self.c0 / (self.phi * self.ell),
        }

    def resolve(self, max_drift=0.01, allow_degenerate_bridge=False):
        """Round multiplicities to integers; reject drift beyond max_drift.

        allow_degenerate_bridge=True lets the bridge round down to 0 edges,
        producing a disconnected instance (useful only to exercise failure
        paths downstream).
        """
        raw = self.raw_multiplicities()
        resolved = {}
        drifts = {}
        for name, value in raw.items():
            lo = 0 if (name == "bridge" and allow_degenerate_bridge) else 1
            rounded = max(lo, round(value))
            resolved[name] = int(rounded)
            if name == "bridge" and rounded == 0:
                drifts[name] = 0.0  # a deliberately severed bridge is exact
            else:
                drifts[name] = abs(rounded - value) / value
        worst = max(drifts, key=drifts.get)
        if drifts[worst] > max_drift:
            n_fix = resolved["top_edge"] * self.ell
            phi_fix = max(resolved["bridge"], 1) / n_fix
            c0_fix = phi_fix * n_fix * self.ell / resolved["bottom_edge"]
            raise ValueError(
                f"{worst} multiplicity {raw[worst]:.6g} is {drifts[worst]:.2%} away "
                f"from an integer (limit {max_drift:.0%}); nearby consistent "
                f"parameters: n={n_fix:g}, phi={phi_fix:.6g}, c0={c0_fix:.6g}"
            )
        return ResolvedHardInstance(
            spec=self,
            top_edge=resolved["top_edge"],
            bridge=resolved["bridge"],
            bottom_edge=resolved["bottom_edge"],
            bottom_len=resolved["bottom_len"],
            max_drift=drifts[worst],
            drifts=drifts,
        )


@dataclass(frozen=True)
class ResolvedHardInstance:
    spec: HardInstanceSpec
    top_edge: int
    bridge: int
    bottom_edge: int
    bottom_len: int
    max_drift: float
    drifts: dict


def hard_instance(spec, max_drift=0.01, allow_degenerate_bridge=False):
    """Build the two-chain instance.

    Returns (graph, labels, top_chain) where labels maps the five named
    vertices a, b, c, d, e to ids and top_chain is the planted target set.
    Vertex ids: 0..ell are the top chain (a=0, b=ell/2, c=ell); the bottom
    chain follows with d first and e last.
    """
    if isinstance(spec, HardInstanceSpec):
        resolved = spec.resolve(max_drift=max_drift,
                                allow_degenerate_bridge=allow_degenerate_bridge)
    else:
        resolved = spec
    ell = resolved.spec.ell
    d_id = ell + 1
    e_id = ell + 1 + resolved.bottom_len
    edges = [(i, i + 1, float(resolved.top_edge)) for i in range(ell)]
    edges += [(d_id + i, d_id + i + 1, float(resolved.bottom_edge))
              for i in range(resolved.bottom_len)]
    if resolved.bridge > 0:
        edges.append((ell // 2, d_id, float(resolved.bridge)))
    graph = WeightedGraph.from_edges(edges, n=e_id + 1)
    labels = {"a": 0, "b": ell // 2, "c": ell, "d": d_id, "e": e_id}
    top_chain = VertexSet(graph, range(ell + 1))
    return graph, labels, top_chain


def hard_instance_vertex_labels(resolved):
    """Per-vertex label map (a/b/c/d/e override top/bottom) for sidecar files."""
    ell = resolved.spec.ell
    d_id = ell + 1
    e_id = ell + 1 + resolved.bottom_len
    labels = {}
    for u in range(ell + 1):
        labels[u] = "top"
    for u in range(d_id, e_id + 1):
        labels[u] = "bottom"
    labels[0] = "a"
    labels[ell // 2] = "b"
    labels[ell] = "c"
    labels[d_id] = "d"
    labels[e_id] = "e"
    return labels


def knn_graph(points, k, sigma_factor=0.2, chunk=1024):
    """Gaussian-kernel k-NN graph with mutual-OR symmetrization.

    An edge (i, j) exists iff i is among j's k nearest neighbors or vice
    versa (ties at the k-th distance are all included); its weight is
    exp(-d2/sigma) with sigma = sigma_factor * r, where r is the average
    squared distance of a point to its k-th nearest neighbor.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-d array of feature vectors")
    m = pts.shape[0]
    if m < k + 1:
        raise ValueError(f"need at least k+1={k + 1} points, got {m}")
    if not np.isfinite(pts).all():
        raise ValueError("points must be finite")
    sq_norms = (pts * pts).sum(axis=1)

    def sq_dists(rows):
        d2 = sq_norms[rows, None] + sq_norms[None, :] - 2.0 * (pts[rows] @ pts.T)
        np.maximum(d2, 0.0, out=d2)
        return d2

    kth = np.zeros(m)
    for lo in range(0, m, chunk):
        rows = np.arange(lo, min(lo + chunk, m))
        d2 = sq_dists(rows)
        d2[np.arange(rows.size), rows] = np.inf  # exclude self
        kth[rows] = np.partition(d2, k - 1, axis=1)[:, k - 1]
    r = float(kth.mean())
    if r <= 0.0:
        raise DomainError("all points coincide with their k-th neighbors; r = 0")
    sigma = sigma_factor * r
    pair_d2 = {}
    for lo in range(0, m, chunk):
        rows = np.arange(lo, min(lo + chunk, m))
        d2 = sq_dists(rows)
        d2[np.arange(rows.size), rows] = np.inf
        hits = d2 <= kth[rows][:, None]
        for local_i, i in enumerate(rows):
            for j in np.flatnonzero(hits[local_i]):
                key = (int(i), int(j)) if i < j else (int(j), int(i))
                pair_d2.setdefault(key, float(d2[local_i, j]))
    edges = [(u, v, math.exp(-d2 / sigma)) for (u, v), d2 in sorted(pair_d2.items())]
    return WeightedGraph.from_edges(edges, n=m)
