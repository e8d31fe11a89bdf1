"""Local graph clustering via push-based PageRank and sweep cuts, with
internal-connectivity estimation, benchmark generators, and numerical
verification of the reference bounds that govern the method."""

from .connectivity import (ConnectivityReport, connectivity_report, mixing_time,
                           relative_pointwise_distance, spectral_gap)
from .errors import (DomainError, FileFormatError, NoCandidateCutError,
                     NoValidVol0Error)
from .evaluation import ClusterReport, beta_sweep, cluster_metrics, seed_sweep
from .generators import (Experiment1Config, HardInstanceSpec, chain,
                         experiment1_graph, hard_instance, knn_graph,
                         watts_strogatz)
from .graph import (SetConductanceResult, VertexSet, WeightedGraph,
                    set_conductance)
from .nibble import (NibbleParams, NibbleResult, nibble_auto, page_rank_nibble,
                     vol0_search)
from .pagerank import (PageRankParams, PushStats, SparseMass,
                       approximate_pagerank, exact_pagerank, lazy_step,
                       lazy_walk_matrix)
from .sweep import (MassVolumeCurve, SweepProfile, best_sweep_cut,
                    build_sweep_profile, ls_curve, threshold_set)

__version__ = "0.1.0"

__all__ = [
    "ClusterReport",
    "ConnectivityReport",
    "DomainError",
    "Experiment1Config",
    "FileFormatError",
    "HardInstanceSpec",
    "MassVolumeCurve",
    "NibbleParams",
    "NibbleResult",
    "NoCandidateCutError",
    "NoValidVol0Error",
    "PageRankParams",
    "PushStats",
    "SetConductanceResult",
    "SparseMass",
    "SweepProfile",
    "VertexSet",
    "WeightedGraph",
    "approximate_pagerank",
    "best_sweep_cut",
    "beta_sweep",
    "build_sweep_profile",
    "chain",
    "cluster_metrics",
    "connectivity_report",
    "exact_pagerank",
    "experiment1_graph",
    "hard_instance",
    "knn_graph",
    "lazy_step",
    "lazy_walk_matrix",
    "ls_curve",
    "mixing_time",
    "nibble_auto",
    "page_rank_nibble",
    "relative_pointwise_distance",
    "seed_sweep",
    "set_conductance",
    "spectral_gap",
    "threshold_set",
    "vol0_search",
    "watts_strogatz",
]
