"""Cluster-quality metrics and the two batch experiments built on them:
a beta sweep over the planted benchmark and a good-seed fraction sweep.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats as _stats

from .errors import DomainError
from .graph import VertexSet
from .generators import Experiment1Config, experiment1_graph
from .nibble import GAP_MODE, NibbleParams, page_rank_nibble

DEFAULT_ALPHA_GRID = tuple(np.geomspace(0.001, 0.3, 12))
CONFIDENCE_LEVEL = 0.94


@dataclass(frozen=True)
class ClusterReport:
    """How well an output set S matches a target set A.

    precision and recall count vertices; vol_out and vol_miss compare volumes
    of S\\A and A\\S against vol(A); accuracy is 1 - |A symdiff S| / |V|.
    precision (and the conductance fields) are None for an empty S, with
    precision_defined cleared.
    """

    phi_s: float | None
    phi_a: float
    conductance_ratio: float | None
    precision: float | None
    recall: float
    vol_out: float
    vol_miss: float
    accuracy: float
    precision_defined: bool = True

    def to_dict(self):
        return {
            "phi_s": self.phi_s,
            "phi_a": self.phi_a,
            "conductance_ratio": self.conductance_ratio,
            "precision": self.precision,
            "recall": self.recall,
            "vol_out": self.vol_out,
            "vol_miss": self.vol_miss,
            "accuracy": self.accuracy,
            "precision_defined": self.precision_defined,
        }


def cluster_metrics(graph, s_set, a_set):
    """Score an output set against ground truth on the same graph."""
    if len(a_set) == 0:
        raise ValueError("ground-truth set must be nonempty")
    a_ids = a_set.ids
    s_ids = s_set.ids if isinstance(s_set, VertexSet) else VertexSet(graph, s_set).ids
    phi_a = graph.conductance(a_set)
    inter = np.intersect1d(a_ids, s_ids, assume_unique=True)
    out_ids = np.setdiff1d(s_ids, a_ids, assume_unique=True)
    miss_ids = np.setdiff1d(a_ids, s_ids, assume_unique=True)
    vol_a = float(graph.degrees[a_ids].sum())
    vol_out = float(graph.degrees[out_ids].sum()) / vol_a
    vol_miss = float(graph.degrees[miss_ids].sum()) / vol_a
    sym_diff = out_ids.size + miss_ids.size
    accuracy = 1.0 - sym_diff / graph.n
    recall = inter.size / a_ids.size
    if s_ids.size == 0:
        return ClusterReport(
            phi_s=None, phi_a=phi_a, conductance_ratio=None,
            precision=None, recall=0.0,
            vol_out=0.0, vol_miss=1.0, accuracy=accuracy,
            precision_defined=False,
        )
    phi_s = graph.conductance(s_ids) if s_ids.size < graph.n else None
    ratio = phi_s / phi_a if (phi_s is not None and phi_a > 0) else None
    return ClusterReport(
        phi_s=phi_s,
        phi_a=phi_a,
        conductance_ratio=ratio,
        precision=inter.size / s_ids.size,
        recall=recall,
        vol_out=vol_out,
        vol_miss=vol_miss,
        accuracy=accuracy,
    )


@dataclass(frozen=True)
class BetaSweepRow:
    beta: float
    runs: int
    failures: int
    mean_ratio: float
    ci_ratio: float
    mean_accuracy: float
    ci_accuracy: float
    mean_phi_a: float

    def to_dict(self):
        return {
            "beta": self.beta,
            "mean_ratio": self.mean_ratio,
            "ci_ratio": self.ci_ratio,
            "mean_acc": self.mean_accuracy,
            "ci_acc": self.ci_accuracy,
            "failures": self.failures,
            "runs": self.runs,
            "mean_phi_a": self.mean_phi_a,
        }


def _ci_halfwidth(values):
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return math.nan
    z = float(_stats.norm.ppf(0.5 + CONFIDENCE_LEVEL / 2.0))
    return z * values.std(ddof=1) / math.sqrt(values.size)


def _best_alpha_run(graph, seed_vertex, vol0, alpha_grid, c_range):
    best = None
    best_alpha = None
    for alpha in alpha_grid:
        params = NibbleParams(seed=seed_vertex, conn=1.0, vol0=vol0,
                              alpha_override=float(alpha), c_range=c_range)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                res = page_rank_nibble(graph, params)
        except DomainError:
            continue
        if best is None or res.phi < best.phi:
            best = res
            best_alpha = float(alpha)
    return best, best_alpha


def beta_sweep(beta_grid, runs_per_point, rng_seed, alpha_grid=DEFAULT_ALPHA_GRID,
               c_range=(1.0 / 16.0, 1.0 / 2.0), config_base=None):
    """The planted-benchmark experiment: per beta, fresh graphs, random seeds
    in A, best alpha on the grid, mean ratio phi(S)/phi(A) and accuracy with
    94% normal-approximation confidence intervals.

    Returns (rows, records): one row per beta, one record dict per run.
    Failed runs (no candidate cut at any alpha) stay in the failure count and
    are excluded from the means.
    """
    if runs_per_point < 2:
        raise ValueError("need at least 2 runs per grid point")
    rows = []
    records = []
    for bi, beta in enumerate(beta_grid):
        ratios = []
        accuracies = []
        phi_as = []
        failures = 0
        for run in range(runs_per_point):
            child = np.random.SeedSequence(rng_seed, spawn_key=(bi, run))
            rng = np.random.default_rng(child)
            base = config_base or {}
            config = Experiment1Config(beta=float(beta), seed=rng, **base)
            graph, truth = experiment1_graph(config)
            seed_vertex = int(rng.integers(0, len(truth)))
            vol0 = truth.volume / 2.0
            best, best_alpha = _best_alpha_run(graph, seed_vertex, vol0,
                                               alpha_grid, c_range)
            phi_a = graph.conductance(truth)
            phi_as.append(phi_a)
            record = {
                "beta": float(beta),
                "run": run,
                "seed_vertex": seed_vertex,
                "phi_a": phi_a,
                "alpha": best_alpha,
                "failed": best is None,
            }
            if best is None:
                failures += 1
            else:
                report = cluster_metrics(graph, best.vertex_set, truth)
                ratios.append(best.phi / phi_a)
                accuracies.append(report.accuracy)
                record.update({
                    "phi_s": best.phi,
                    "ratio": best.phi / phi_a,
                    "accuracy": report.accuracy,
                    "precision": report.precision,
                    "recall": report.recall,
                    "vol_out": report.vol_out,
                    "vol_miss": report.vol_miss,
                })
            records.append(record)
        rows.append(BetaSweepRow(
            beta=float(beta),
            runs=runs_per_point,
            failures=failures,
            mean_ratio=float(np.mean(ratios)) if ratios else math.nan,
            ci_ratio=_ci_halfwidth(ratios),
            mean_accuracy=float(np.mean(accuracies)) if accuracies else math.nan,
            ci_accuracy=_ci_halfwidth(accuracies),
            mean_phi_a=float(np.mean(phi_as)),
        ))
    return rows, records


@dataclass(frozen=True)
class SeedSweepResult:
    fraction: float
    thresholds: tuple
    seeds_run: int
    sampled: bool
    records: tuple

    def to_dict(self):
        return {
            "fraction": self.fraction,
            "thresholds": list(self.thresholds),
            "seeds_run": self.seeds_run,
            "sampled": self.sampled,
        }


def seed_sweep(graph, a_set, conn, vol0, thresholds, c_range=(1.0 / 16.0, 1.0 / 2.0),
               alpha_scale=1.0 / 9.0, sample_cap=None, rng_seed=0):
    """Degree-weighted fraction of A whose seeds recover A well enough.

    thresholds = (max vol_out, max vol_miss, max phi). Every vertex of A is
    tried unless sample_cap is given and |A| exceeds it, in which case that
    many seeds are drawn with probability proportional to degree (the plain
    mean of indicators then estimates the degree-weighted fraction).
    """
    t_out, t_miss, t_phi = thresholds
    ids = a_set.ids
    sampled = sample_cap is not None and ids.size > sample_cap
    if sampled:
        rng = np.random.default_rng(rng_seed)
        weights = graph.degrees[ids] / graph.degrees[ids].sum()
        seeds = rng.choice(ids, size=int(sample_cap), replace=True, p=weights)
    else:
        seeds = ids
    hit_weight = 0.0
    total_weight = 0.0
    records = []
    for seed_vertex in seeds:
        seed_vertex = int(seed_vertex)
        weight = 1.0 if sampled else float(graph.degrees[seed_vertex])
        total_weight += weight
        params = NibbleParams(seed=seed_vertex, conn=conn, vol0=vol0,
                              alpha_scale=alpha_scale, c_range=c_range)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                res = page_rank_nibble(graph, params, mode=GAP_MODE)
        except DomainError:
            records.append({"seed": seed_vertex, "failed": True, "meets": False})
            continue
        report = cluster_metrics(graph, res.vertex_set, a_set)
        meets = (report.vol_out <= t_out and report.vol_miss <= t_miss
                 and res.phi <= t_phi)
        if meets:
            hit_weight += weight
        records.append({
            "seed": seed_vertex,
            "failed": False,
            "meets": meets,
            "phi": res.phi,
            "vol_out": report.vol_out,
            "vol_miss": report.vol_miss,
        })
    return SeedSweepResult(
        fraction=hit_weight / total_weight if total_weight > 0 else 0.0,
        thresholds=(t_out, t_miss, t_phi),
        seeds_run=len(records),
        sampled=sampled,
        records=tuple(records),
    )
