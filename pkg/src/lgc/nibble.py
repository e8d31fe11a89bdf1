"""Local clustering driver: seeded push, threshold-window sweep, doubling search."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

from .errors import DomainError, NoCandidateCutError, NoValidVol0Error
from .pagerank import PageRankParams, PushStats, SparseMass, approximate_pagerank
from .sweep import build_sweep_profile

GAP_MODE = "gap-mode"
CLASSIC_MODE = "classic-mode"

ALPHA_CEILING = 1.0 / 9.0


@dataclass(frozen=True)
class NibbleParams:
    """Inputs of a single clustering run.

    alpha defaults to alpha_scale * conn clipped at 1/9; alpha_override
    bypasses that derivation. epsilon is 1/(10*vol0) unless overridden.
    The candidate window keeps the threshold sets {u : p(u) >= c*deg(u)/vol0}
    for c between c_min and c_max.
    """

    seed: int
    conn: float
    vol0: float
    alpha_scale: float = ALPHA_CEILING
    c_range: tuple = (1.0 / 16.0, 1.0 / 2.0)
    alpha_override: float | None = None
    epsilon_override: float | None = None

    def __post_init__(self):
        if not 0.0 < self.conn <= 1.0:
            raise ValueError(f"conn must be in (0, 1], got {self.conn}")
        if self.vol0 <= 0:
            raise ValueError(f"vol0 must be positive, got {self.vol0}")
        c_min, c_max = self.c_range
        if not 0.0 < c_min < c_max:
            raise ValueError(f"need 0 < c_min < c_max, got {self.c_range}")
        if self.alpha_override is not None and not 0.0 < self.alpha_override <= 1.0:
            raise ValueError(f"alpha override must be in (0, 1], got {self.alpha_override}")

    @property
    def alpha(self):
        if self.alpha_override is not None:
            return float(self.alpha_override)
        return min(self.alpha_scale * self.conn, ALPHA_CEILING)

    @property
    def epsilon(self):
        if self.epsilon_override is not None:
            return float(self.epsilon_override)
        return 1.0 / (10.0 * self.vol0)


@dataclass(frozen=True)
class NibbleResult:
    vertex_set: object
    phi: float
    stats: PushStats
    params: NibbleParams
    mode: str

    def to_dict(self):
        return {
            "set": [int(u) for u in self.vertex_set],
            "phi": self.phi,
            "mode": self.mode,
            "stats": {
                "push_count": self.stats.push_count,
                "work": self.stats.work,
                "support_volume": self.stats.support_volume,
            },
            "params": {
                "seed": self.params.seed,
                "conn": self.params.conn,
                "vol0": self.params.vol0,
                "alpha": self.params.alpha,
                "epsilon": self.params.epsilon,
                "alpha_scale": self.params.alpha_scale,
                "c_range": list(self.params.c_range),
            },
        }


def _candidate_prefixes(profile, vol0, c_range):
    """Indices of sweep prefixes equal to a threshold set for some c in range.

    A tie-closed prefix ending at rank j is the threshold set for all c in
    (values[j+1]*vol0, values[j]*vol0]; it is a candidate when that interval
    meets [c_min, c_max] and the prefix is proper.
    """
    c_min, c_max = c_range
    values = profile.values
    k = values.size
    out = []
    for j in range(k):
        if j + 1 < k and values[j + 1] == values[j]:
            continue  # not tie-closed
        nxt = values[j + 1] if j + 1 < k else 0.0
        if values[j] * vol0 >= c_min and nxt * vol0 < c_max:
            vol = profile.prefix_volume[j]
            if vol > 0 and profile.total_volume - vol > 0:
                out.append(j)
    return out


def page_rank_nibble(graph, params, mode=GAP_MODE):
    """Seeded local clustering: push, sweep, best cut in the threshold window.

    Raises NoCandidateCutError when no sweep prefix falls in the window,
    which usually signals a badly tuned vol0 or conn.
    """
    if graph.degrees[params.seed] <= 0:
        raise DomainError(f"seed vertex {params.seed} has degree 0")
    if params.vol0 > graph.total_volume / 2.0:
        warnings.warn(
            f"vol0={params.vol0:g} exceeds half the total volume "
            f"({graph.total_volume / 2.0:g}); results may be meaningless",
            stacklevel=2,
        )
    p, _r, stats = approximate_pagerank(
        graph,
        SparseMass.indicator(params.seed),
        PageRankParams(alpha=params.alpha, epsilon=params.epsilon),
    )
    if len(p) == 0:
        raise NoCandidateCutError(
            "the push settled no mass at all; epsilon is too large for this seed"
        )
    profile = build_sweep_profile(graph, p)
    candidates = _candidate_prefixes(profile, params.vol0, params.c_range)
    if not candidates:
        raise NoCandidateCutError(
            f"no sweep prefix matches a threshold in c range {params.c_range} "
            f"with vol0={params.vol0:g}; tune vol0 or conn"
        )
    phis = profile.conductances()
    best = min(candidates, key=lambda j: (phis[j], j))
    return NibbleResult(
        vertex_set=profile.prefix(best + 1),
        phi=float(phis[best]),
        stats=stats,
        params=params,
        mode=mode,
    )


def nibble_auto(graph, seed, conn, phi_target, vol0, alpha_scale=ALPHA_CEILING,
                classic_alpha_scale=1.0, c_range=(1.0 / 16.0, 1.0 / 2.0)):
    """Run both parameterizations and keep the better cut.

    Gap mode derives alpha from conn; classic mode uses
    alpha = phi_target * classic_alpha_scale. Ties go to gap mode. If exactly
    one run fails it is ignored; if both fail, the combined error propagates.
    """
    if not 0.0 < phi_target < 1.0:
        raise ValueError(f"phi_target must be in (0, 1), got {phi_target}")
    base = NibbleParams(seed=seed, conn=conn, vol0=vol0,
                        alpha_scale=alpha_scale, c_range=c_range)
    results = []
    failures = []
    for mode, params in (
        (GAP_MODE, base),
        (CLASSIC_MODE, replace(base, alpha_override=min(phi_target * classic_alpha_scale, 1.0))),
    ):
        try:
            results.append(page_rank_nibble(graph, params, mode=mode))
        except DomainError as exc:
            failures.append(f"{mode}: {exc}")
    if not results:
        raise DomainError("both modes failed: " + "; ".join(failures))
    results.sort(key=lambda res: (res.phi, res.mode != GAP_MODE))
    return results[0]


def vol0_search(graph, seed, conn, phi_accept, vol0_max, alpha_scale=ALPHA_CEILING,
                c_range=(1.0 / 16.0, 1.0 / 2.0)):
    """Doubling search over vol0 = 1, 2, 4, ... up to vol0_max.

    A trial is accepted when its candidate window is nonempty and the output
    conductance is at most phi_accept. Returns the first accepted result;
    otherwise raises NoValidVol0Error carrying the best conductance seen.
    """
    if vol0_max < 1:
        raise ValueError(f"vol0_max must be at least 1, got {vol0_max}")
    best_phi = None
    tried = []
    vol0 = 1.0
    while vol0 <= vol0_max:
        tried.append(vol0)
        params = NibbleParams(seed=seed, conn=conn, vol0=vol0,
                              alpha_scale=alpha_scale, c_range=c_range)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                result = page_rank_nibble(graph, params)
        except DomainError:
            vol0 *= 2.0
            continue
        if result.phi <= phi_accept:
            return result
        if best_phi is None or result.phi < best_phi:
            best_phi = result.phi
        vol0 *= 2.0
    raise NoValidVol0Error(
        f"no vol0 in {tried} produced a cut with phi <= {phi_accept:g}"
        + (f" (best seen: {best_phi:g})" if best_phi is not None else ""),
        best_phi=best_phi,
        tried=tried,
    )
