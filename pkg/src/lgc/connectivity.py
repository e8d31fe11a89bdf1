"""Internal-connectivity measures of a vertex set: spectral gap, mixing time,
and the derived Conn/Gap quantities under three interchangeable definitions.

All walk quantities live on the induced subgraph with outgoing edges removed.
Logs are natural throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .graph import EXACT_SET_CONDUCTANCE_CAP, is_connected, set_conductance
from .pagerank import lazy_walk_matrix

DEFINITIONS = ("mix", "lambda", "phiS")

DENSE_GAP_CAP = 500
MIXING_DENSE_CAP = 4000


def _induced_connected(graph, vset):
    sub, _ = graph.induced_subgraph(vset)
    if sub.n < 2:
        raise ValueError("need at least 2 vertices")
    if not is_connected(sub):
        raise DomainError(
            "induced subgraph is disconnected: the spectral gap is 0 and the "
            "walk never mixes"
        )
    return sub


def _symmetrized_walk(sub):
    """Sparse symmetric matrix similar to the lazy walk on the subgraph."""
    import scipy.sparse as sp

    d = sub.degrees
    inv_sqrt = 1.0 / np.sqrt(d)
    rows = np.repeat(np.arange(sub.n), np.diff(sub.indptr))
    data = 0.5 * sub.weights * inv_sqrt[rows] * inv_sqrt[sub.indices]
    diag = np.full(sub.n, 0.5)
    sym = sp.csr_matrix(
        (np.concatenate([diag, data]),
         (np.concatenate([np.arange(sub.n), rows]),
          np.concatenate([np.arange(sub.n), sub.indices]))),
        shape=(sub.n, sub.n),
    )
    return sym


def spectral_gap(graph, vset, tolerance=1e-9, method="auto", max_iter=2_000_000):
    """1 minus the second-largest eigenvalue of the lazy walk on the subgraph.

    The computation runs on the symmetrized walk matrix whose top eigenvector
    is known in closed form (entries proportional to sqrt(deg)), so it can be
    deflated exactly. method="dense" uses a full eigensolve and is the oracle
    for subgraphs up to 500 vertices; method="power" iterates to the given
    relative tolerance.
    """
    sub = _induced_connected(graph, vset)
    if method == "auto":
        method = "dense" if sub.n <= DENSE_GAP_CAP else "power"
    sym = _symmetrized_walk(sub)
    if method == "dense":
        vals = np.linalg.eigvalsh(sym.toarray())
        return float(1.0 - vals[-2])
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    top = np.sqrt(sub.degrees)
    top /= np.linalg.norm(top)
    x = np.ones(sub.n) + 1e-3 * np.cos(np.arange(sub.n))
    x -= top * (top @ x)
    x /= np.linalg.norm(x)
    mu = 0.0
    for _ in range(max_iter):
        y = sym @ x
        y -= top * (top @ y)
        norm = np.linalg.norm(y)
        if norm <= 1e-13:
            return 1.0  # the deflated spectrum is numerically 0
        x = y / norm
        x -= top * (top @ x)  # keep float drift out of the known direction
        x /= np.linalg.norm(x)
        mu_new = float(x @ (sym @ x))
        if abs(mu_new - mu) <= tolerance * max(abs(mu_new), 1e-30):
            residual = sym @ x - mu_new * x
            residual -= top * (top @ residual)
            if np.linalg.norm(residual) <= 100.0 * tolerance:
                return 1.0 - mu_new
        mu = mu_new
    return 1.0 - mu


@dataclass(frozen=True)
class MixingTimeResult:
    tau: int | None
    exceeded: bool
    cap: int
    never_mixes: bool = False
    is_estimate: bool = False

    @property
    def finite(self):
        return self.tau is not None


def _walk_and_stationary(sub):
    w = lazy_walk_matrix(sub)
    pi = sub.degrees / sub.total_volume
    return w, pi


def mixing_time(graph, vset, cap=None):
    """Minimal t with relative pointwise distance of the lazy walk at most 1/2.

    Iterates the walk from every start vertex simultaneously; exact, intended
    for desk-scale sets. A disconnected induced subgraph never mixes.
    """
    sub, _ = graph.induced_subgraph(vset)
    if sub.total_volume <= 0:
        raise ValueError("mixing time needs a set with positive volume")
    if cap is None:
        cap = 100 * sub.n * sub.n
    cap = int(cap)
    if not is_connected(sub):
        return MixingTimeResult(tau=None, exceeded=True, cap=cap, never_mixes=True)
    if sub.n > MIXING_DENSE_CAP:
        return mixing_time_upper_estimate(graph, vset, cap=cap)
    w, pi = _walk_and_stationary(sub)
    m = np.eye(sub.n)
    for t in range(cap + 1):
        if np.abs(m / pi[None, :] - 1.0).max() <= 0.5:
            return MixingTimeResult(tau=t, exceeded=False, cap=cap)
        m = m @ w
    return MixingTimeResult(tau=None, exceeded=True, cap=cap)


def mixing_time_upper_estimate(graph, vset, cap=None):
    """Spectral upper bound ceil(log(2/pi_min)/lambda); flagged as an estimate."""
    sub, _ = graph.induced_subgraph(vset)
    if not is_connected(sub):
        return MixingTimeResult(tau=None, exceeded=True, cap=int(cap or 0),
                                never_mixes=True, is_estimate=True)
    lam = spectral_gap(graph, vset)
    pi_min = sub.degrees.min() / sub.total_volume
    tau = int(math.ceil(math.log(2.0 / pi_min) / lam))
    if cap is None:
        cap = 100 * sub.n * sub.n
    return MixingTimeResult(tau=max(tau, 1), exceeded=False, cap=int(cap),
                            is_estimate=True)


def relative_pointwise_distance(graph, vset, t):
    """max over starts v and targets u of |W^t(v, u) - pi(u)| / pi(u)."""
    sub, _ = graph.induced_subgraph(vset)
    if not is_connected(sub):
        raise DomainError("relative pointwise distance undefined on a disconnected set")
    w, pi = _walk_and_stationary(sub)
    m = np.linalg.matrix_power(w.toarray(), int(t))
    return float(np.abs(m / pi[None, :] - 1.0).max())


@dataclass(frozen=True)
class ConnectivityReport:
    """Conn/Gap of a set under the three definitions, with raw ingredients.

    Conn values are clipped into [0, 1] (the raw spectral gap and mixing time
    are reported unclipped). gap is Conn/phi for the chosen definition.
    """

    definition: str
    set_size: int
    set_volume: float
    phi: float
    lam: float
    tau_mix: int | None
    tau_mix_exceeded: bool
    tau_mix_is_estimate: bool
    phi_s: float
    phi_s_exact: bool
    conn_mix: float | None
    conn_lambda: float
    conn_phi_s: float
    conn: float | None
    gap: float | None
    log_base: str = "e"

    def to_dict(self):
        return {
            "definition": self.definition,
            "set_size": self.set_size,
            "set_volume": self.set_volume,
            "phi": self.phi,
            "lambda": self.lam,
            "tau_mix": self.tau_mix,
            "tau_mix_exceeded": self.tau_mix_exceeded,
            "tau_mix_is_estimate": self.tau_mix_is_estimate,
            "phi_s": self.phi_s,
            "phi_s_exact": self.phi_s_exact,
            "conn_mix": self.conn_mix,
            "conn_lambda": self.conn_lambda,
            "conn_phi_s": self.conn_phi_s,
            "conn": self.conn,
            "gap": self.gap,
            "log_base": self.log_base,
        }


def connectivity_report(graph, vset, definition="mix", phi=None, tau_cap=None):
    """Full connectivity report for a proper nonempty set.

    phi is recomputed from the host graph unless supplied. The phiS ingredient
    uses exact enumeration for small sets and the spectral sweep upper bound
    otherwise.
    """
    if definition not in DEFINITIONS:
        raise ValueError(f"definition must be one of {DEFINITIONS}, got {definition!r}")
    size = len(vset)
    if size == 0 or size >= graph.n:
        raise DomainError("connectivity report requires a nonempty proper subset")
    if phi is None:
        phi = graph.conductance(vset)
    vol = graph.volume(vset)
    log_vol = math.log(vol)
    lam = spectral_gap(graph, vset)
    mix = mixing_time(graph, vset, cap=tau_cap)
    mode = "exact" if size <= EXACT_SET_CONDUCTANCE_CAP else "spectral-sweep"
    sc = set_conductance(graph, vset, mode=mode)

    def clip(x):
        return min(max(x, 0.0), 1.0)

    conn_mix = clip(1.0 / mix.tau) if mix.finite and mix.tau > 0 else (1.0 if mix.finite else None)
    conn_lambda = clip(lam / log_vol) if log_vol > 0 else 1.0
    conn_phi_s = clip(sc.value ** 2 / log_vol) if log_vol > 0 else 1.0
    conn = {"mix": conn_mix, "lambda": conn_lambda, "phiS": conn_phi_s}[definition]
    gap = conn / phi if conn is not None else None
    return ConnectivityReport(
        definition=definition,
        set_size=size,
        set_volume=vol,
        phi=float(phi),
        lam=float(lam),
        tau_mix=mix.tau,
        tau_mix_exceeded=mix.exceeded,
        tau_mix_is_estimate=mix.is_estimate,
        phi_s=sc.value,
        phi_s_exact=sc.exact,
        conn_mix=conn_mix,
        conn_lambda=conn_lambda,
        conn_phi_s=conn_phi_s,
        conn=conn,
        gap=gap,
    )
