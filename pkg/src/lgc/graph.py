"""Immutable weighted undirected multigraph in CSR form, plus cut queries.

Edge weights double as multiplicities: a parallel-edge bundle is stored as a
single adjacency entry whose weight equals the multiplicity. Degrees, volumes,
cuts and conductances use weights throughout. Self-loops are rejected;
degree-0 vertices may exist in storage (induced subgraphs create them) but
are rejected by walk operations elsewhere.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import DomainError


class WeightedGraph:
    """Undirected graph with nonnegative real edge weights, frozen after build."""

    __slots__ = ("n", "indptr", "indices", "weights", "degrees", "total_volume")

    def __init__(self, n, indptr, indices, weights):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        row = np.repeat(np.arange(self.n), np.diff(indptr))
        self.degrees = np.bincount(row, weights=weights, minlength=self.n).astype(float)
        self.total_volume = float(self.degrees.sum())

    @classmethod
    def from_edges(cls, edges, n=None):
        """Build from (u, v, w) triples or (u, v) pairs; duplicates aggregate by sum.

        Args:
            edges: iterable of (u, v[, w]); w defaults to 1.0.
            n: vertex count; defaults to max id + 1. Extra vertices are isolated.
        """
        agg = {}
        max_id = -1
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 1.0
            else:
                u, v, w = e
            u = int(u)
            v = int(v)
            w = float(w)
            if u < 0 or v < 0:
                raise ValueError(f"negative vertex id in edge ({u}, {v})")
            if u == v:
                raise ValueError(f"self-loop at vertex {u} is not allowed")
            if w <= 0:
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            key = (u, v) if u < v else (v, u)
            agg[key] = agg.get(key, 0.0) + w
            if u > max_id:
                max_id = u
            if v > max_id:
                max_id = v
        if n is None:
            n = max_id + 1
        n = int(n)
        if max_id >= n:
            raise ValueError(f"vertex id {max_id} out of range for n={n}")
        counts = np.zeros(n + 1, dtype=np.int64)
        for (u, v) in agg:
            counts[u + 1] += 1
            counts[v + 1] += 1
        indptr = np.cumsum(counts)
        indices = np.zeros(indptr[-1], dtype=np.int64)
        weights = np.zeros(indptr[-1])
        fill = indptr[:-1].copy()
        for (u, v) in sorted(agg):
            w = agg[(u, v)]
            indices[fill[u]] = v
            weights[fill[u]] = w
            fill[u] += 1
            indices[fill[v]] = u
            weights[fill[v]] = w
            fill[v] += 1
        return cls(n, indptr, indices, weights)

    def degree(self, u):
        return float(self.degrees[u])

    def neighbors(self, u):
        """Return (neighbor ids, weights) views, sorted by neighbor id."""
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def edge_list(self):
        """Yield each undirected edge once as (u, v, w) with u < v."""
        for u in range(self.n):
            ids, ws = self.neighbors(u)
            for v, w in zip(ids, ws):
                if u < v:
                    yield u, int(v), float(w)

    def edge_weight(self, u, v):
        ids, ws = self.neighbors(u)
        pos = np.searchsorted(ids, v)
        if pos < len(ids) and ids[pos] == v:
            return float(ws[pos])
        return 0.0

    def _check_ids(self, ids):
        ids = np.asarray(ids, dtype=np.int64)
        if ids.size and (ids.min() < 0 or ids.max() >= self.n):
            raise ValueError("vertex id out of range for this graph")
        return ids

    def volume(self, vset):
        """Sum of weighted degrees over the given vertices; empty -> 0."""
        if isinstance(vset, VertexSet):
            return vset.volume
        ids = self._check_ids(list(vset))
        return float(self.degrees[ids].sum()) if ids.size else 0.0

    def mask_of(self, vset):
        ids = vset.ids if isinstance(vset, VertexSet) else self._check_ids(list(vset))
        mask = np.zeros(self.n, dtype=bool)
        mask[ids] = True
        return mask

    def cut_weight(self, vset):
        """Total weight of edges leaving the set."""
        mask = self.mask_of(vset)
        side = np.flatnonzero(mask)
        if 2 * side.size > self.n:
            side = np.flatnonzero(~mask)
            mask = ~mask
        cut = 0.0
        for u in side:
            ids, ws = self.neighbors(u)
            outside = ~mask[ids]
            if outside.any():
                cut += float(ws[outside].sum())
        return cut

    def conductance(self, vset):
        """Cut weight over the smaller side's volume."""
        mask = self.mask_of(vset)
        k = int(mask.sum())
        if k == 0 or k == self.n:
            raise DomainError("conductance requires a nonempty proper subset")
        vol = float(self.degrees[mask].sum())
        other = self.total_volume - vol
        if min(vol, other) <= 0:
            raise DomainError("conductance undefined: one side has zero volume")
        return self.cut_weight(vset) / min(vol, other)

    def induced_subgraph(self, vset):
        """Induced subgraph with outgoing edges removed.

        Returns (subgraph, old_to_new) where old_to_new maps host ids to the
        contiguous ids of the subgraph. Vertices isolated inside the set are
        retained with degree 0.
        """
        ids = vset.ids if isinstance(vset, VertexSet) else np.unique(self._check_ids(list(vset)))
        if ids.size == 0:
            raise ValueError("induced subgraph requires a nonempty set")
        old_to_new = {int(u): i for i, u in enumerate(ids)}
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[ids] = np.arange(ids.size)
        edges = []
        for u in ids:
            nbr, ws = self.neighbors(u)
            keep = remap[nbr] >= 0
            for v, w in zip(nbr[keep], ws[keep]):
                if u < v:
                    edges.append((remap[u], remap[v], w))
        sub = WeightedGraph.from_edges(edges, n=ids.size)
        return sub, old_to_new


class VertexSet:
    """Sorted, duplicate-free vertex ids bound to a host graph, volume cached."""

    __slots__ = ("ids", "volume")

    def __init__(self, graph, ids):
        arr = np.unique(np.asarray(list(ids), dtype=np.int64))
        if arr.size and (arr[0] < 0 or arr[-1] >= graph.n):
            raise ValueError("vertex id out of range for the host graph")
        self.ids = arr
        self.volume = float(graph.degrees[arr].sum()) if arr.size else 0.0

    def __len__(self):
        return int(self.ids.size)

    def __iter__(self):
        return iter(int(u) for u in self.ids)

    def __contains__(self, u):
        pos = np.searchsorted(self.ids, u)
        return pos < self.ids.size and self.ids[pos] == u

    def __eq__(self, other):
        return isinstance(other, VertexSet) and np.array_equal(self.ids, other.ids)

    def __repr__(self):
        return f"VertexSet(size={len(self)}, volume={self.volume:g})"


def connected_components(graph):
    """Label vertices by component; returns (labels array, component count)."""
    labels = np.full(graph.n, -1, dtype=np.int64)
    comp = 0
    for start in range(graph.n):
        if labels[start] >= 0:
            continue
        labels[start] = comp
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in graph.neighbors(u)[0]:
                if labels[v] < 0:
                    labels[v] = comp
                    queue.append(int(v))
        comp += 1
    return labels, comp


def is_connected(graph):
    return connected_components(graph)[1] <= 1


class SetConductanceResult:
    """Value of the best internal cut plus how it was obtained."""

    __slots__ = ("value", "exact", "disconnected")

    def __init__(self, value, exact, disconnected):
        self.value = float(value)
        self.exact = bool(exact)
        self.disconnected = bool(disconnected)

    def __repr__(self):
        tag = "exact" if self.exact else "upper-bound"
        if self.disconnected:
            tag += ",disconnected"
        return f"SetConductanceResult({self.value:g}, {tag})"


EXACT_SET_CONDUCTANCE_CAP = 20


def set_conductance(graph, vset, mode="exact"):
    """Conductance of the set on its induced subgraph.

    mode="exact" enumerates every internal cut (|set| <= 20); the result is
    the true minimum. mode="spectral-sweep" sweeps the second eigenvector of
    the lazy walk on the induced subgraph and is only an upper bound.
    A disconnected induced subgraph yields 0 with the disconnected flag set.
    """
    ids = vset.ids if isinstance(vset, VertexSet) else np.unique(np.asarray(list(vset)))
    if ids.size < 2:
        raise ValueError("set conductance requires at least 2 vertices")
    if mode not in ("exact", "spectral-sweep"):
        raise ValueError(f"unknown mode {mode!r}")
    sub, _ = graph.induced_subgraph(ids)
    if not is_connected(sub):
        return SetConductanceResult(0.0, mode == "exact", True)
    if mode == "exact":
        if sub.n > EXACT_SET_CONDUCTANCE_CAP:
            raise ValueError(
                f"exact mode capped at {EXACT_SET_CONDUCTANCE_CAP} vertices, got {sub.n}"
            )
        return SetConductanceResult(_exact_min_cut_conductance(sub), True, False)
    return SetConductanceResult(_spectral_sweep_conductance(sub), False, False)


def _exact_min_cut_conductance(sub):
    # Full enumeration over all nonempty proper subsets, vectorized by bitmask.
    k = sub.n
    size = 1 << k
    masks = np.arange(size, dtype=np.int64)
    vol = np.zeros(size)
    for i in range(k):
        vol[((masks >> i) & 1).astype(bool)] += sub.degrees[i]
    w_in = np.zeros(size)
    for u, v, w in sub.edge_list():
        both = ((masks >> u) & 1).astype(bool) & ((masks >> v) & 1).astype(bool)
        w_in[both] += w
    cut = vol - 2.0 * w_in
    denom = np.minimum(vol, sub.total_volume - vol)
    valid = (masks != 0) & (masks != size - 1) & (denom > 0)
    return float((cut[valid] / denom[valid]).min())


def _spectral_sweep_conductance(sub):
    d = sub.degrees.copy()
    # connected with >= 2 vertices, so all degrees positive
    inv_sqrt = 1.0 / np.sqrt(d)
    adj = np.zeros((sub.n, sub.n))
    for u, v, w in sub.edge_list():
        adj[u, v] = w
        adj[v, u] = w
    sym = 0.5 * (np.diag(d) + adj)
    sym = inv_sqrt[:, None] * sym * inv_sqrt[None, :]
    vals, vecs = np.linalg.eigh(sym)
    embed = vecs[:, -2] * inv_sqrt
    order = np.argsort(-embed, kind="stable")
    in_prefix = np.zeros(sub.n, dtype=bool)
    vol = 0.0
    cut = 0.0
    best = np.inf
    for u in order[:-1]:
        nbr, ws = sub.neighbors(u)
        cut += d[u] - 2.0 * float(ws[in_prefix[nbr]].sum())
        vol += d[u]
        in_prefix[u] = True
        denom = min(vol, sub.total_volume - vol)
        if denom > 0:
            best = min(best, cut / denom)
    return best
