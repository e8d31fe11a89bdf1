"""Degree-normalized sweep orderings, threshold sets, and mass-vs-volume curves."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .graph import VertexSet


@dataclass(frozen=True)
class SweepProfile:
    """Vertices of supp(p) ordered by p(u)/deg(u) descending, with prefix sums.

    Ties in the normalized value break by ascending vertex id. prefix_cut[j]
    is maintained incrementally: when u joins the prefix the cut grows by
    deg(u) minus twice the weight from u into the current prefix.
    """

    graph: object = field(repr=False)
    order: np.ndarray
    values: np.ndarray
    masses: np.ndarray
    prefix_volume: np.ndarray
    prefix_cut: np.ndarray
    prefix_mass: np.ndarray
    total_volume: float
    total_mass: float

    def __len__(self):
        return int(self.order.size)

    def prefix(self, j):
        """The j-th sweep set (1-based size), as a VertexSet."""
        return VertexSet(self.graph, self.order[:j])

    def conductances(self):
        """phi of every prefix; NaN where a side has zero volume."""
        denom = np.minimum(self.prefix_volume, self.total_volume - self.prefix_volume)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(denom > 0, self.prefix_cut / denom, np.nan)


def build_sweep_profile(graph, p):
    """Sweep profile of a sparse mass vector over its support."""
    support = p.support
    if support.size == 0:
        raise DomainError("cannot sweep an empty support")
    deg = graph.degrees[support]
    if (deg <= 0).any():
        raise DomainError("sweep requires positive degrees on the support")
    masses = np.array([p[int(u)] for u in support])
    values = masses / deg
    # support is id-ascending, so a stable sort on -values breaks ties by id
    rank = np.argsort(-values, kind="stable")
    order = support[rank]
    values = values[rank]
    masses = masses[rank]
    k = order.size
    prefix_volume = np.cumsum(graph.degrees[order])
    prefix_mass = np.cumsum(masses)
    prefix_cut = np.zeros(k)
    in_prefix = np.zeros(graph.n, dtype=bool)
    cut = 0.0
    for j, u in enumerate(order):
        nbr, ws = graph.neighbors(u)
        cut += graph.degrees[u] - 2.0 * float(ws[in_prefix[nbr]].sum())
        cut = max(cut, 0.0)  # float cancellation can leave -1e-19 on a 0 cut
        in_prefix[u] = True
        prefix_cut[j] = cut
    return SweepProfile(
        graph=graph,
        order=order,
        values=values,
        masses=masses,
        prefix_volume=prefix_volume,
        prefix_cut=prefix_cut,
        prefix_mass=prefix_mass,
        total_volume=graph.total_volume,
        total_mass=float(p.l1),
    )


def best_sweep_cut(profile, volume_cap=None):
    """Minimum-conductance sweep prefix; ties resolve to the shortest prefix.

    Only proper prefixes (positive volume on both sides) are eligible, and a
    volume_cap restricts to prefixes with volume at most the cap.
    """
    phis = profile.conductances()
    eligible = ~np.isnan(phis)
    if volume_cap is not None:
        eligible &= profile.prefix_volume <= volume_cap
    if not eligible.any():
        raise DomainError("no sweep prefix with positive volume on both sides")
    masked = np.where(eligible, phis, np.inf)
    j = int(np.argmin(masked))
    return profile.prefix(j + 1), float(phis[j])


def threshold_set(graph, p, c, vol0):
    """Vertices with p(u) >= c*deg(u)/vol0; always a sweep prefix up to ties."""
    if c <= 0:
        raise ValueError(f"threshold scale c must be positive, got {c}")
    if vol0 <= 0:
        raise ValueError(f"vol0 must be positive, got {vol0}")
    ids = [int(u) for u, mass in p.items() if mass >= c * graph.degrees[u] / vol0]
    return VertexSet(graph, ids)


@dataclass(frozen=True)
class MassVolumeCurve:
    """Piecewise-linear concave curve of swept mass against swept volume.

    Breakpoints start at (0, 0) and extend with slope 0 past the support,
    so the curve reaches (vol(V), total mass).
    """

    xs: np.ndarray
    ys: np.ndarray

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        if (x_arr < 0).any() or (x_arr > self.xs[-1] * (1 + 1e-12)).any():
            raise ValueError(f"curve evaluated outside [0, {self.xs[-1]:g}]")
        out = np.interp(x_arr, self.xs, self.ys)
        return float(out) if np.isscalar(x) or x_arr.ndim == 0 else out

    @property
    def slopes(self):
        return np.diff(self.ys) / np.diff(self.xs)


def ls_curve(profile):
    """Mass-volume curve of a sweep profile."""
    xs = np.concatenate([[0.0], profile.prefix_volume])
    ys = np.concatenate([[0.0], profile.prefix_mass])
    if profile.prefix_volume[-1] < profile.total_volume:
        xs = np.append(xs, profile.total_volume)
        ys = np.append(ys, profile.prefix_mass[-1])
    return MassVolumeCurve(xs=xs, ys=ys)
