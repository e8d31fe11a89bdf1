import json

import numpy as np
import pytest

from lgc.cli import main
from lgc.errors import FileFormatError
from lgc.graph import VertexSet, WeightedGraph
from lgc.graphio import (load_graph, load_points, load_vertex_set, save_graph,
                         save_labels, save_vertex_set)

from conftest import two_cliques


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_load_graph_basic(tmp_path):
    path = write(tmp_path / "g.el", "0 1\n1 2\n")
    g, id_map = load_graph(path)
    assert id_map is None
    assert g.n == 3 and g.degrees.tolist() == [1.0, 2.0, 1.0]


def test_load_graph_aggregates_duplicates(tmp_path):
    path = write(tmp_path / "g.el", "0 1 2.0\n1 0 3.0\n")
    g, _ = load_graph(path)
    assert g.edge_weight(0, 1) == 5.0


def test_load_graph_errors_carry_line_numbers(tmp_path):
    with pytest.raises(FileFormatError, match=":1:"):
        load_graph(write(tmp_path / "a.el", "0 0 1.0\n"))
    with pytest.raises(FileFormatError, match=":2:"):
        load_graph(write(tmp_path / "b.el", "0 1\n0 2 -1.0\n"))
    with pytest.raises(FileFormatError, match=":1:"):
        load_graph(write(tmp_path / "c.el", "0 1 2 3\n"))


def test_load_graph_compacts_ids(tmp_path):
    path = write(tmp_path / "g.el", "5 9\n9 12\n")
    g, id_map = load_graph(path)
    assert id_map == {5: 0, 9: 1, 12: 2}
    assert g.n == 3


def test_load_graph_comments_and_blanks(tmp_path):
    path = write(tmp_path / "g.el", "# header\n\n0 1 2.5 # trailing\n")
    g, _ = load_graph(path)
    assert g.edge_weight(0, 1) == 2.5


def test_graph_round_trip_bit_stable(tmp_path):
    rng = np.random.default_rng(0)
    edges = []
    for _ in range(30):
        u, v = rng.integers(0, 15, size=2)
        if u != v:
            edges.append((int(u), int(v), float(rng.uniform(0.1, 3.0))))
    g = WeightedGraph.from_edges(edges, n=15)
    p1 = tmp_path / "one.el"
    p2 = tmp_path / "two.el"
    save_graph(g, p1)
    g2, _ = load_graph(p1)
    save_graph(g2, p2)
    assert p1.read_text() == p2.read_text()


def test_vertex_set_round_trip_and_duplicates(tmp_path, two_k10):
    s = VertexSet(two_k10, [3, 1, 7])
    path = tmp_path / "s.txt"
    save_vertex_set(s, path)
    assert load_vertex_set(path, two_k10) == s
    bad = write(tmp_path / "bad.txt", "1\n2\n1\n")
    with pytest.raises(FileFormatError, match=":3:"):
        load_vertex_set(bad, two_k10)


def test_points_csv_with_labels(tmp_path):
    path = write(tmp_path / "p.csv", "1,0.5,0.25\n0,1.5,2.5\n")
    pts, labels = load_points(path, label_column=True)
    assert pts.shape == (2, 2)
    assert labels.tolist() == [1, 0]
    ragged = write(tmp_path / "r.csv", "1,2\n1\n")
    with pytest.raises(FileFormatError, match=":2:"):
        load_points(ragged)


def test_save_labels(tmp_path):
    path = tmp_path / "labels.txt"
    save_labels({1: "A", 0: "B"}, path)
    assert path.read_text() == "0 B\n1 A\n"


# -- CLI ---------------------------------------------------------------------


def clique_file(tmp_path):
    g = two_cliques(10)
    path = tmp_path / "cliques.el"
    save_graph(g, path)
    return str(path)


def test_cli_cluster_two_cliques(tmp_path, capsys):
    path = clique_file(tmp_path)
    out = tmp_path / "result.json"
    code = main(["cluster", "--graph", path, "--seed-vertex", "5",
                 "--conn", "0.5", "--vol0", "91", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["result"]["phi"] == pytest.approx(1.0 / 91.0)
    assert sorted(payload["result"]["set"]) == list(range(10))
    assert payload["params"]["conn"] == 0.5  # full parameter echo


def test_cli_cluster_missing_graph_is_usage_error(capsys):
    assert main(["cluster", "--seed-vertex", "5", "--conn", "0.5"]) == 1


def test_cli_cluster_no_candidate_is_domain_error(tmp_path, capsys):
    # eps = 1/(10*0.2) = 0.5 exceeds 1/deg(u) on the cliques: nothing settles
    path = clique_file(tmp_path)
    code = main(["cluster", "--graph", path, "--seed-vertex", "5",
                 "--conn", "0.5", "--vol0", "0.2"])
    assert code == 2


def test_cli_verify_appendix_single_point(tmp_path):
    out = tmp_path / "check.json"
    code = main(["verify-appendix", "--lemma", "A1", "--ell", "200",
                 "--gamma", "1", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["result"][0]["passed"] is True


def test_cli_verify_appendix_failure_exit_code(tmp_path):
    code = main(["verify-appendix", "--lemma", "A1", "--ell", "50",
                 "--gamma", "1", "--slack", "-500"])
    assert code == 3


def test_cli_auto_cluster(tmp_path):
    path = clique_file(tmp_path)
    out = tmp_path / "auto.json"
    code = main(["auto-cluster", "--graph", path, "--seed-vertex", "5",
                 "--conn", "0.5", "--vol0", "91", "--phi-target", "0.02",
                 "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["result"]["mode"] in ("gap-mode", "classic-mode")


def test_cli_conn_report(tmp_path):
    path = clique_file(tmp_path)
    sfile = write(tmp_path / "set.txt", "\n".join(str(i) for i in range(10)))
    out = tmp_path / "conn.json"
    code = main(["conn", "--graph", path, "--set", sfile, "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["result"]["tau_mix"] >= 1
    assert payload["result"]["gap"] > 1.0


def test_cli_sweep_curve_csv(tmp_path):
    path = clique_file(tmp_path)
    out = tmp_path / "curve.csv"
    code = main(["sweep-curve", "--graph", path, "--seed-vertex", "5",
                 "--alpha", "0.05", "--eps", "0.001", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    header = [ln for ln in lines if ln.startswith("rank,")]
    assert header, lines
    assert any(ln.startswith("# alpha=0.05") for ln in lines)


def test_cli_eval_round_trip(tmp_path):
    path = clique_file(tmp_path)
    sfile = write(tmp_path / "s.txt", "\n".join(str(i) for i in range(10)))
    afile = write(tmp_path / "a.txt", "\n".join(str(i) for i in range(10)))
    out = tmp_path / "eval.json"
    code = main(["eval", "--graph", path, "--set", sfile, "--truth", afile,
                 "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["result"]["precision"] == 1.0


def test_cli_generate_chain_and_reload(tmp_path):
    out = tmp_path / "chain.el"
    assert main(["generate", "chain", "--ell", "5", "--out", str(out)]) == 0
    g, _ = load_graph(str(out))
    assert g.n == 6 and g.total_volume == 10.0


def test_cli_generate_exp1_seed_determinism(tmp_path):
    a = tmp_path / "a.el"
    b = tmp_path / "b.el"
    for target in (a, b):
        assert main(["generate", "exp1", "--beta", "0.5", "--rng-seed", "7",
                     "--out", str(target)]) == 0
    assert a.read_text() == b.read_text()


def test_cli_generate_hard_with_labels(tmp_path):
    out = tmp_path / "hard.el"
    labels = tmp_path / "labels.txt"
    sets = tmp_path / "top.txt"
    code = main(["generate", "hard", "--ell", "8", "--n-scale", "80",
                 "--phi", "0.05", "--c0", "2.0", "--out", str(out),
                 "--labels-out", str(labels), "--set-out", str(sets)])
    assert code == 0
    g, _ = load_graph(str(out))
    assert g.total_volume == pytest.approx(4 * 80 + 2 * 0.05 * 80)
    assert "a" in labels.read_text().split()
    top = load_vertex_set(str(sets), g)
    assert len(top) == 9


def test_cli_generate_knn(tmp_path):
    pts = write(tmp_path / "pts.csv",
                "0.0,0.0\n0.1,0.0\n1.0,1.0\n1.1,1.0\n0.5,0.5\n")
    out = tmp_path / "knn.el"
    assert main(["generate", "knn", "--points", pts, "--k", "2",
                 "--out", str(out)]) == 0
    g, _ = load_graph(str(out))
    assert g.n == 5


def test_cli_seed_sweep_and_beta_sweep_small(tmp_path):
    path = clique_file(tmp_path)
    sfile = write(tmp_path / "a.txt", "\n".join(str(i) for i in range(10)))
    out = tmp_path / "ss.json"
    code = main(["seed-sweep", "--graph", path, "--set", sfile,
                 "--conn", "0.5", "--vol0", "45", "--max-phi", "0.05",
                 "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["result"]["fraction"] == 1.0


def test_cli_generate_ws(tmp_path):
    out = tmp_path / "ws.el"
    assert main(["generate", "ws", "--n", "40", "--k", "6", "--beta", "0.3",
                 "--rng-seed", "2", "--out", str(out)]) == 0
    g, _ = load_graph(str(out))
    assert g.n == 40 and g.total_volume / 2 == 120


def test_cli_verify_hard(tmp_path):
    from lgc.bounds import integral_hard_spec

    spec = integral_hard_spec(50, 0.25, 2.0)
    out = tmp_path / "hard.json"
    code = main(["verify-hard", "--ell", str(spec.ell),
                 "--n-scale", repr(spec.n), "--phi", repr(spec.phi),
                 "--c0", repr(spec.c0), "--gamma", "2.0", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["result"]["ordering"]["passed"] is True
    assert payload["result"]["min_phi"] > 0


def test_cli_verify_appendix_grid_csv(tmp_path):
    out = tmp_path / "grid.csv"
    code = main(["verify-appendix", "--grid", "--format", "csv",
                 "--out", str(out)])
    assert code == 0
    rows = [ln for ln in out.read_text().splitlines()
            if ln and not ln.startswith("#")]
    assert rows[0].startswith("bound_id,")
    assert len(rows) == 1 + 3 * 3 * 4  # header + ells x gammas x bounds


def test_cli_beta_sweep_rows(tmp_path):
    out = tmp_path / "sweep.csv"
    jsonl = tmp_path / "runs.jsonl"
    code = main(["beta-sweep", "--betas", "0,1", "--runs", "2",
                 "--rng-seed", "5", "--format", "csv", "--out", str(out),
                 "--jsonl-out", str(jsonl)])
    assert code == 0
    lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert lines[0].startswith("beta,")
    assert len(lines) == 3  # header + one row per beta
    assert len(jsonl.read_text().splitlines()) == 4


def test_cli_out_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("LGC_OUT_DIR", str(tmp_path))
    assert main(["generate", "chain", "--ell", "3", "--out", "c.el"]) == 0
    assert (tmp_path / "c.el").exists()


def test_cli_no_arguments_is_usage_error():
    assert main([]) == 1


def test_cli_entry_point_runs():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "lgc.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "cluster" in proc.stdout


def test_cli_knn_cluster_eval_pipeline(tmp_path):
    # two well-separated gaussian blobs: build the similarity graph, cluster
    # from a seed in the first blob, and score against the blob labels
    rng = np.random.default_rng(12)
    blob_a = rng.normal(loc=0.0, scale=0.35, size=(30, 2))
    blob_b = rng.normal(loc=2.0, scale=0.35, size=(30, 2))
    rows = ["1," + ",".join(f"{x:.6f}" for x in p) for p in blob_a]
    rows += ["2," + ",".join(f"{x:.6f}" for x in p) for p in blob_b]
    pts = write(tmp_path / "pts.csv", "\n".join(rows) + "\n")
    graph_path = tmp_path / "blobs.el"
    assert main(["generate", "knn", "--points", pts, "--k", "8",
                 "--label-column", "--out", str(graph_path)]) == 0
    g, _ = load_graph(str(graph_path))
    truth = tmp_path / "truth.txt"
    truth.write_text("\n".join(str(i) for i in range(30)))
    vol_a = g.volume(range(30))
    out = tmp_path / "cluster.json"
    code = main(["cluster", "--graph", str(graph_path), "--seed-vertex", "3",
                 "--conn", "0.02", "--vol0", str(vol_a / 2), "--out", str(out)])
    assert code == 0
    found = json.loads(out.read_text())["result"]["set"]
    sfile = tmp_path / "s.txt"
    sfile.write_text("\n".join(str(u) for u in found))
    eval_out = tmp_path / "metrics.json"
    assert main(["eval", "--graph", str(graph_path), "--set", str(sfile),
                 "--truth", str(truth), "--out", str(eval_out)]) == 0
    metrics = json.loads(eval_out.read_text())["result"]
    assert metrics["precision"] == 1.0
    assert metrics["recall"] >= 0.9


def test_cli_vol0_search_path(tmp_path):
    path = clique_file(tmp_path)
    out = tmp_path / "search.json"
    code = main(["cluster", "--graph", path, "--seed-vertex", "5",
                 "--conn", "0.5", "--phi-accept", "0.05", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["result"]["phi"] <= 0.05
