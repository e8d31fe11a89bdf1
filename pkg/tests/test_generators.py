import numpy as np
import pytest

from lgc.errors import DomainError
from lgc.generators import (Experiment1Config, HardInstanceSpec, chain,
                            experiment1_graph, hard_instance,
                            hard_instance_vertex_labels, knn_graph,
                            watts_strogatz)
from lgc.graph import is_connected


def test_chain_shapes():
    g = chain(1)
    assert g.n == 2 and g.total_volume == 2.0
    g5 = chain(5)
    assert g5.degrees.tolist() == [1, 2, 2, 2, 2, 1]
    assert g5.total_volume == 10.0
    with pytest.raises(ValueError):
        chain(0)


def test_ws_lattice_at_beta_zero():
    g = watts_strogatz(30, 6, 0.0, seed=1)
    assert (g.degrees == 6).all()
    assert is_connected(g)
    assert g.total_volume / 2 == 90


def test_ws_edge_count_invariant_under_rewiring():
    for seed in range(5):
        g = watts_strogatz(40, 8, 0.7, seed=seed)
        assert g.total_volume / 2 == 160


def test_ws_beta_one_randomizes_degrees():
    variances = []
    for seed in range(10):
        g = watts_strogatz(300, 60, 1.0, seed=seed)
        assert g.degrees.mean() == pytest.approx(60.0)
        variances.append(g.degrees.var())
    assert np.mean(variances) > 0


def test_ws_deterministic_under_seed():
    a = watts_strogatz(50, 6, 0.4, seed=9)
    b = watts_strogatz(50, 6, 0.4, seed=9)
    assert list(a.edge_list()) == list(b.edge_list())
    c = watts_strogatz(50, 6, 0.4, seed=10)
    assert list(a.edge_list()) != list(c.edge_list())


def test_ws_parameter_validation():
    with pytest.raises(ValueError):
        watts_strogatz(10, 3, 0.5, seed=0)
    with pytest.raises(ValueError):
        watts_strogatz(10, 10, 0.5, seed=0)
    with pytest.raises(ValueError):
        watts_strogatz(10, 4, 1.5, seed=0)


def test_experiment1_is_870_vertices():
    g, truth = experiment1_graph(Experiment1Config(beta=0.5, seed=0))
    assert g.n == 870
    assert len(truth) == 300
    assert truth.ids.tolist() == list(range(300))


def test_experiment1_deterministic():
    a, _ = experiment1_graph(Experiment1Config(beta=0.25, seed=5))
    b, _ = experiment1_graph(Experiment1Config(beta=0.25, seed=5))
    assert list(a.edge_list()) == list(b.edge_list())


def test_experiment1_cross_cut_expectation():
    # E[cut(A)] = 300*20*0.001 + 300*550*0.002 = 336
    cuts = []
    vols = []
    for seed in range(12):
        g, truth = experiment1_graph(Experiment1Config(beta=1.0, seed=seed))
        cuts.append(g.cut_weight(truth))
        vols.append(truth.volume)
    assert abs(np.mean(cuts) - 336.0) / 336.0 < 0.10
    assert abs(np.mean(vols) - (300 * 60 + 336.0)) / (300 * 60 + 336.0) < 0.05


def test_hard_instance_volume_identities():
    spec = HardInstanceSpec(ell=8, n=80.0, phi=0.05, c0=2.0)
    resolved = spec.resolve()
    assert resolved.max_drift == 0.0
    g, labels, top = hard_instance(resolved)
    n, phi, ell = spec.n, spec.phi, spec.ell
    assert top.volume == pytest.approx(2 * n + phi * n)
    assert g.total_volume == pytest.approx(4 * n + 2 * phi * n)
    assert g.degrees[labels["b"]] == pytest.approx(2 * n / ell + phi * n)
    assert labels["a"] == 0 and labels["c"] == ell
    assert g.degrees[labels["e"]] == resolved.bottom_edge


def test_hard_instance_drift_rejection_suggests_parameters():
    spec = HardInstanceSpec(ell=10, n=101.0, phi=0.031, c0=2.0)
    with pytest.raises(ValueError, match="nearby consistent parameters"):
        spec.resolve()


def test_hard_instance_degenerate_bridge():
    spec = HardInstanceSpec(ell=8, n=80.0, phi=0.005, c0=0.2)
    resolved = spec.resolve(allow_degenerate_bridge=True)
    assert resolved.bridge == 0
    g, labels, _ = hard_instance(resolved)
    assert not is_connected(g)


def test_hard_instance_vertex_labels():
    spec = HardInstanceSpec(ell=8, n=80.0, phi=0.05, c0=2.0)
    resolved = spec.resolve()
    labels = hard_instance_vertex_labels(resolved)
    assert labels[0] == "a" and labels[4] == "b" and labels[8] == "c"
    assert labels[9] == "d"
    assert sum(1 for v in labels.values() if v in ("top", "a", "b", "c")) == 9


def test_knn_coincident_points_get_unit_weight():
    pts = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
    g = knn_graph(pts, k=2)
    assert g.edge_weight(0, 1) == 1.0


def test_knn_symmetry_and_min_degree():
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(40, 3))
    k = 5
    g = knn_graph(pts, k=k)
    for u in range(g.n):
        ids, ws = g.neighbors(u)
        assert ids.size >= k  # the OR rule can only add neighbors
        for v, w in zip(ids, ws):
            assert g.edge_weight(int(v), u) == w


def test_knn_sigma_rule_hand_check():
    # colinear points at 0, 1, 3: with k=1 the nearest-neighbor squared
    # distances are (1, 1, 4), so r = 2 and sigma = 0.4
    pts = np.array([[0.0], [1.0], [3.0]])
    g = knn_graph(pts, k=1)
    assert g.edge_weight(0, 1) == pytest.approx(np.exp(-1.0 / 0.4))
    assert g.edge_weight(1, 2) == pytest.approx(np.exp(-4.0 / 0.4))
    assert g.edge_weight(0, 2) == 0.0


def test_knn_tie_inclusion():
    # 2 and 3 are equidistant from 1; both join its neighbor set
    pts = np.array([[0.0], [1.0], [2.0], [0.0 - 1.0]])
    g = knn_graph(pts, k=1)
    assert g.edge_weight(1, 0) > 0
    assert g.edge_weight(1, 2) > 0


def test_knn_rejects_degenerate_inputs():
    with pytest.raises(ValueError):
        knn_graph(np.zeros((3, 2)), k=3)
    with pytest.raises(DomainError):
        knn_graph(np.zeros((5, 2)), k=2)  # r = 0
