"""Command-line surface over the library.

Exit codes: 0 success, 1 usage or input error, 2 domain error (a valid
request with no answer, e.g. no candidate cut), 3 a verify-* check failed.
Outputs are JSON by default or CSV for tabular results, always carrying the
full parameter echo. LGC_OUT_DIR, when set, anchors relative --out paths.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import bounds, evaluation, graphio
from .connectivity import connectivity_report
from .errors import DomainError
from .generators import (Experiment1Config, HardInstanceSpec, chain,
                         experiment1_graph, hard_instance,
                         hard_instance_vertex_labels, knn_graph,
                         watts_strogatz)
from .nibble import NibbleParams, nibble_auto, page_rank_nibble, vol0_search
from .pagerank import PageRankParams, SparseMass, approximate_pagerank
from .sweep import build_sweep_profile

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_VERIFY = 3

APPENDIX_GRID_ELLS = (50, 100, 200)
APPENDIX_GRID_GAMMAS = (0.5, 1.0, 4.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _resolve_out(path):
    if path is None:
        return None
    base = os.environ.get("LGC_OUT_DIR")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _echo_params(args):
    skip = {"func", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _write_json(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True, default=float) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _write_csv(rows, fieldnames, params, out):
    buf = io.StringIO()
    for key, value in sorted(params.items()):
        buf.write(f"# {key}={value}\n")
    writer = csv.DictWriter(buf, fieldnames=fieldnames)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _emit(args, result, rows=None, fieldnames=None):
    params = _echo_params(args)
    out = _resolve_out(args.out)
    if getattr(args, "format", "json") == "csv" and rows is not None:
        _write_csv(rows, fieldnames, params, out)
    else:
        _write_json({"command": args.command, "params": params, "result": result}, out)


def _load_graph(args):
    graph, id_map = graphio.load_graph(args.graph)
    if id_map is not None:
        print(f"note: compacted {len(id_map)} non-contiguous vertex ids",
              file=sys.stderr)
    return graph


def _cmd_generate(args):
    if args.kind == "ws":
        graph = watts_strogatz(args.n, args.k, args.beta, args.rng_seed)
        labels = None
    elif args.kind == "exp1":
        config = Experiment1Config(beta=args.beta, seed=args.rng_seed)
        graph, truth = experiment1_graph(config)
        labels = {}
        for u in range(graph.n):
            if u < config.size_a:
                labels[u] = "A"
            elif u < config.size_a + config.size_b:
                labels[u] = "B"
            else:
                labels[u] = "C"
        if args.set_out:
            graphio.save_vertex_set(truth, _resolve_out(args.set_out))
    elif args.kind == "hard":
        spec = HardInstanceSpec(ell=args.ell, n=args.n_scale, phi=args.phi,
                                c0=args.c0)
        resolved = spec.resolve()
        graph, _named, truth = hard_instance(resolved)
        labels = hard_instance_vertex_labels(resolved)
        if args.set_out:
            graphio.save_vertex_set(truth, _resolve_out(args.set_out))
    elif args.kind == "chain":
        graph = chain(args.ell)
        labels = None
    else:  # knn
        points, point_labels = graphio.load_points(args.points,
                                                   label_column=args.label_column)
        graph = knn_graph(points, args.k, sigma_factor=args.sigma_factor)
        labels = None
        if point_labels is not None:
            labels = {u: int(lab) for u, lab in enumerate(point_labels)}
    out = _resolve_out(args.out)
    graphio.save_graph(graph, out)
    if labels is not None and args.labels_out:
        graphio.save_labels(labels, _resolve_out(args.labels_out))
    print(f"wrote {graph.n} vertices, volume {graph.total_volume:g} -> {out}",
          file=sys.stderr)
    return EXIT_OK


def _nibble_params_from_args(args, vol0):
    return NibbleParams(
        seed=args.seed_vertex,
        conn=args.conn,
        vol0=vol0,
        c_range=(args.c_min, args.c_max),
        alpha_override=args.alpha,
        epsilon_override=args.eps,
    )


def _cmd_cluster(args):
    graph = _load_graph(args)
    if args.vol0 is not None:
        params = _nibble_params_from_args(args, args.vol0)
        result = page_rank_nibble(graph, params)
    else:
        if args.phi_accept is None:
            raise _UsageError("cluster requires --vol0, or --phi-accept to "
                              "search for one")
        vol0_max = args.vol0_max or graph.total_volume / 2.0
        result = vol0_search(graph, args.seed_vertex, args.conn,
                             args.phi_accept, vol0_max,
                             c_range=(args.c_min, args.c_max))
    _emit(args, result.to_dict())
    return EXIT_OK


def _cmd_auto_cluster(args):
    graph = _load_graph(args)
    result = nibble_auto(graph, args.seed_vertex, args.conn, args.phi_target,
                         args.vol0, c_range=(args.c_min, args.c_max))
    _emit(args, result.to_dict())
    return EXIT_OK


def _cmd_conn(args):
    graph = _load_graph(args)
    vset = graphio.load_vertex_set(args.set, graph)
    report = connectivity_report(graph, vset, definition=args.definition)
    _emit(args, report.to_dict())
    return EXIT_OK


def _cmd_sweep_curve(args):
    graph = _load_graph(args)
    if args.alpha is None or args.eps is None:
        raise _UsageError("sweep-curve requires explicit --alpha and --eps")
    p, _r, _stats = approximate_pagerank(
        graph, SparseMass.indicator(args.seed_vertex),
        PageRankParams(alpha=args.alpha, epsilon=args.eps))
    profile = build_sweep_profile(graph, p)
    phis = profile.conductances()
    rows = []
    for j in range(len(profile)):
        rows.append({
            "rank": j + 1,
            "vertex": int(profile.order[j]),
            "normalized_value": profile.values[j],
            "prefix_volume": profile.prefix_volume[j],
            "prefix_cut": profile.prefix_cut[j],
            "prefix_conductance": phis[j],
        })
    args.format = "csv"
    _emit(args, None, rows=rows,
          fieldnames=["rank", "vertex", "normalized_value", "prefix_volume",
                      "prefix_cut", "prefix_conductance"])
    return EXIT_OK


def _cmd_verify_appendix(args):
    checks = []
    if args.grid:
        for ell in APPENDIX_GRID_ELLS:
            for gamma in APPENDIX_GRID_GAMMAS:
                for bound_id in bounds.BOUND_IDS:
                    checks.append(bounds.verify_chain_bound(
                        bound_id, ell, gamma, slack_constant=args.slack))
    else:
        if args.lemma is None or args.ell is None or args.gamma is None:
            raise _UsageError("verify-appendix needs --lemma, --ell and --gamma "
                              "(or --grid)")
        checks.append(bounds.verify_chain_bound(args.lemma, args.ell, args.gamma,
                                                slack_constant=args.slack))
    rows = [check.to_dict() for check in checks]
    _emit(args, rows, rows=rows,
          fieldnames=["bound_id", "ell", "gamma", "measured", "bound",
                      "threshold", "margin", "truncation_bound", "passed"])
    return EXIT_OK if all(check.passed for check in checks) else EXIT_VERIFY


def _cmd_verify_hard(args):
    spec = HardInstanceSpec(ell=args.ell, n=args.n_scale, phi=args.phi, c0=args.c0)
    scan = bounds.hard_instance_sweep_scan(spec, args.gamma)
    _emit(args, scan.to_dict())
    return EXIT_OK if scan.ordering.passed else EXIT_VERIFY


def _cmd_beta_sweep(args):
    betas = [float(b) for b in args.betas.split(",")]
    rows, records = evaluation.beta_sweep(betas, args.runs, args.rng_seed)
    row_dicts = [row.to_dict() for row in rows]
    _emit(args, row_dicts, rows=row_dicts,
          fieldnames=["beta", "mean_ratio", "ci_ratio", "mean_acc", "ci_acc",
                      "failures", "runs", "mean_phi_a"])
    if args.jsonl_out:
        with open(_resolve_out(args.jsonl_out), "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(record, default=float) + "\n")
    return EXIT_OK


def _cmd_seed_sweep(args):
    graph = _load_graph(args)
    truth = graphio.load_vertex_set(args.set, graph)
    result = evaluation.seed_sweep(
        graph, truth, conn=args.conn, vol0=args.vol0,
        thresholds=(args.max_vol_out, args.max_vol_miss, args.max_phi),
        c_range=(args.c_min, args.c_max), sample_cap=args.sample_cap,
        rng_seed=args.rng_seed)
    _emit(args, result.to_dict())
    return EXIT_OK


def _cmd_eval(args):
    graph = _load_graph(args)
    s_set = graphio.load_vertex_set(args.set, graph)
    a_set = graphio.load_vertex_set(args.truth, graph)
    report = evaluation.cluster_metrics(graph, s_set, a_set)
    _emit(args, report.to_dict())
    return EXIT_OK


def _add_common_nibble_flags(parser, need_conn=True):
    parser.add_argument("--graph", required=True, help="edge-list file")
    parser.add_argument("--seed-vertex", type=int, required=True)
    parser.add_argument("--conn", type=float, required=need_conn,
                        default=None if need_conn else 1.0,
                        help="internal connectivity of the target set")
    parser.add_argument("--alpha", type=float, default=None,
                        help="override the derived teleport probability")
    parser.add_argument("--eps", type=float, default=None,
                        help="override the derived push threshold")
    parser.add_argument("--c-min", type=float, default=1.0 / 16.0)
    parser.add_argument("--c-max", type=float, default=1.0 / 2.0)


def _add_out_flags(parser):
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser():
    parser = _Parser(prog="lgc", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a graph to an edge-list file")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    ws = gen_sub.add_parser("ws")
    ws.add_argument("--n", type=int, required=True)
    ws.add_argument("--k", type=int, required=True)
    ws.add_argument("--beta", type=float, required=True)
    exp1 = gen_sub.add_parser("exp1")
    exp1.add_argument("--beta", type=float, required=True)
    exp1.add_argument("--set-out", default=None,
                      help="also write the ground-truth set")
    hard = gen_sub.add_parser("hard")
    hard.add_argument("--ell", type=int, required=True)
    hard.add_argument("--n-scale", type=float, required=True)
    hard.add_argument("--phi", type=float, required=True)
    hard.add_argument("--c0", type=float, required=True)
    hard.add_argument("--set-out", default=None)
    chain_p = gen_sub.add_parser("chain")
    chain_p.add_argument("--ell", type=int, required=True)
    knn = gen_sub.add_parser("knn")
    knn.add_argument("--points", required=True, help="points CSV")
    knn.add_argument("--k", type=int, default=20)
    knn.add_argument("--sigma-factor", type=float, default=0.2)
    knn.add_argument("--label-column", action="store_true")
    for sp in (ws, exp1, hard, chain_p, knn):
        sp.add_argument("--rng-seed", type=int, default=0)
        sp.add_argument("--out", required=True)
        sp.add_argument("--labels-out", default=None)
        sp.set_defaults(func=_cmd_generate)

    cluster = sub.add_parser("cluster", help="seeded local clustering")
    _add_common_nibble_flags(cluster)
    cluster.add_argument("--vol0", type=float, default=None)
    cluster.add_argument("--phi-accept", type=float, default=None,
                         help="run the doubling vol0 search with this target")
    cluster.add_argument("--vol0-max", type=float, default=None)
    _add_out_flags(cluster)
    cluster.set_defaults(func=_cmd_cluster)

    auto = sub.add_parser("auto-cluster", help="gap and classic modes, best wins")
    _add_common_nibble_flags(auto)
    auto.add_argument("--vol0", type=float, required=True)
    auto.add_argument("--phi-target", type=float, required=True,
                      help="conductance scale for the classic parameterization")
    _add_out_flags(auto)
    auto.set_defaults(func=_cmd_auto_cluster)

    conn = sub.add_parser("conn", help="connectivity report for a vertex set")
    conn.add_argument("--graph", required=True)
    conn.add_argument("--set", required=True, help="vertex-set file")
    conn.add_argument("--definition", choices=("mix", "lambda", "phiS"),
                      default="mix")
    _add_out_flags(conn)
    conn.set_defaults(func=_cmd_conn)

    curve = sub.add_parser("sweep-curve", help="export a sweep profile as CSV")
    _add_common_nibble_flags(curve, need_conn=False)
    _add_out_flags(curve)
    curve.set_defaults(func=_cmd_sweep_curve)

    va = sub.add_parser("verify-appendix", help="check the chain reference bounds")
    va.add_argument("--lemma", choices=bounds.BOUND_IDS, default=None)
    va.add_argument("--ell", type=int, default=None)
    va.add_argument("--gamma", type=float, default=None)
    va.add_argument("--slack", type=float, default=10.0)
    va.add_argument("--grid", action="store_true",
                    help="run the full built-in parameter grid")
    _add_out_flags(va)
    va.set_defaults(func=_cmd_verify_appendix)

    vh = sub.add_parser("verify-hard", help="scan sweep cuts on the two-chain instance")
    vh.add_argument("--ell", type=int, required=True)
    vh.add_argument("--n-scale", type=float, required=True)
    vh.add_argument("--phi", type=float, required=True)
    vh.add_argument("--c0", type=float, required=True)
    vh.add_argument("--gamma", type=float, required=True)
    _add_out_flags(vh)
    vh.set_defaults(func=_cmd_verify_hard)

    bs = sub.add_parser("beta-sweep", help="planted-benchmark experiment")
    bs.add_argument("--betas", default="0,0.25,0.5,0.75,1")
    bs.add_argument("--runs", type=int, default=50)
    bs.add_argument("--rng-seed", type=int, default=0)
    bs.add_argument("--jsonl-out", default=None, help="per-run record log")
    _add_out_flags(bs)
    bs.set_defaults(func=_cmd_beta_sweep)

    ss = sub.add_parser("seed-sweep", help="good-seed fraction of a target set")
    ss.add_argument("--graph", required=True)
    ss.add_argument("--set", required=True)
    ss.add_argument("--conn", type=float, required=True)
    ss.add_argument("--vol0", type=float, required=True)
    ss.add_argument("--max-vol-out", type=float, default=0.2)
    ss.add_argument("--max-vol-miss", type=float, default=0.2)
    ss.add_argument("--max-phi", type=float, required=True)
    ss.add_argument("--c-min", type=float, default=1.0 / 16.0)
    ss.add_argument("--c-max", type=float, default=1.0 / 2.0)
    ss.add_argument("--sample-cap", type=int, default=None)
    ss.add_argument("--rng-seed", type=int, default=0)
    _add_out_flags(ss)
    ss.set_defaults(func=_cmd_seed_sweep)

    ev = sub.add_parser("eval", help="score an output set against ground truth")
    ev.add_argument("--graph", required=True)
    ev.add_argument("--set", required=True)
    ev.add_argument("--truth", required=True)
    _add_out_flags(ev)
    ev.set_defaults(func=_cmd_eval)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
