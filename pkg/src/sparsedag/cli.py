"""Command line front end.

Subcommands cover the whole pipeline: ``simulate`` writes synthetic data,
``learn`` traces a solution path, ``select`` picks an estimate, ``params``
refits coefficients, ``cov``/``prec`` emit implied second moments, and
``export`` converts stored paths into graph formats. Exit code 0 means
success, 1 a usage problem, and 2 a data or validation problem.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import fit, selection, simulate
from .data import (
    CONTINUOUS,
    DISCRETE,
    dataset_to_csv_text,
    new_dataset,
    read_csv_values,
    read_interventions,
    read_levels,
    write_interventions,
)
from .discrete import estimate_dag_discrete
from .gaussian import estimate_dag_gaussian
from .graph import format_dot, format_edge_list
from .priors import PriorKnowledge, read_edge_csv
from .solpath import LearnOptions, path_to_dict, read_path, write_path


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _load_dataset(args, kind):
    nodes, values = read_csv_values(args.data)
    interventions = None
    if getattr(args, "ivn", None):
        interventions = read_interventions(args.ivn, nodes, values.shape[0])
    levels = None
    if kind == DISCRETE and getattr(args, "levels", None):
        levels = read_levels(args.levels, nodes)
    return new_dataset(values, kind, nodes=nodes, levels=levels,
                       interventions=interventions)


def _load_prior(args, nodes):
    wl = read_edge_csv(args.whitelist) if getattr(args, "whitelist", None) else set()
    bl = read_edge_csv(args.blacklist) if getattr(args, "blacklist", None) else set()
    if not wl and not bl:
        return None
    return PriorKnowledge(whitelist=wl, blacklist=bl)


def _run_learner(ds, args):
    anchor = args.lambda_max
    if anchor is None:
        if ds.kind == CONTINUOUS:
            anchor = float(np.sqrt(ds.n))
        else:
            from .discrete import discrete_lambda_max

            anchor = discrete_lambda_max(ds)
    grid = selection.generate_lambdas(
        anchor, args.lambda_ratio, args.lambdas, scale=args.scale
    )
    opts = LearnOptions(
        lambdas=grid,
        penalty=args.penalty,
        concavity=args.concavity,
        weight_scale=args.weight_scale,
        upperbound=args.upperbound,
        error_tol=args.tol,
        max_iters=args.max_iters,
        edge_threshold=args.edge_threshold,
        verbose=args.verbose,
    )
    prior = _load_prior(args, ds.nodes)
    if ds.kind == CONTINUOUS:
        return estimate_dag_gaussian(ds, opts, prior)
    if args.penalty != "l1":
        raise _UsageError("--penalty applies to continuous data only")
    return estimate_dag_discrete(ds, opts, prior)


def _add_learn_flags(sub):
    sub.add_argument("--data", required=True, help="data CSV with a header of node names")
    sub.add_argument("--type", dest="kind", choices=[CONTINUOUS, DISCRETE],
                     default=CONTINUOUS)
    sub.add_argument("--ivn", help="intervention file, one line per row")
    sub.add_argument("--levels", help="level declarations for discrete data")
    sub.add_argument("--lambdas", "--lambdas-length", dest="lambdas", type=int,
                     default=selection.DEFAULT_LENGTH, help="grid length")
    sub.add_argument("--lambda-max", type=float, default=None)
    sub.add_argument("--lambda-ratio", type=float, default=selection.DEFAULT_RATIO)
    sub.add_argument("--scale", choices=["log", "linear"], default="log")
    sub.add_argument("--penalty", choices=["l1", "mcp"], default="l1")
    sub.add_argument("--concavity", type=float, default=2.0)
    sub.add_argument("--weight-scale", type=float, default=1.0)
    sub.add_argument("--upperbound", type=float, default=100.0)
    sub.add_argument("--edge-threshold", type=int, default=None)
    sub.add_argument("--max-iters", type=int, default=None)
    sub.add_argument("--tol", type=float, default=1e-4)
    sub.add_argument("--whitelist", help="edge CSV of required edges")
    sub.add_argument("--blacklist", help="edge CSV of forbidden edges")
    sub.add_argument("--verbose", action="store_true")


def _cmd_learn(args) -> int:
    ds = _load_dataset(args, args.kind)
    path = _run_learner(ds, args)
    write_path(args.out, path)
    print(f"wrote {len(path)} estimates to {args.out}", file=sys.stderr)
    return 0


def _cmd_params(args) -> int:
    path = read_path(args.path)
    ds = _load_dataset(args, path.kind)
    if ds.nodes != path.nodes:
        raise ValueError("data columns do not match the path's nodes")
    doc = {"kind": path.kind, "nodes": path.nodes, "estimates": []}
    if path.kind == CONTINUOUS:
        fits = fit.estimate_parameters_gaussian(path, ds)
        for est, pr in zip(path, fits):
            doc["estimates"].append({
                "lambda": est.lam,
                "intercepts": [float(v) for v in pr.mu],
                "variances": [float(v) for v in pr.omega2],
                "coefficients": [
                    [path.nodes[a], path.nodes[b], float(pr.B[a, b])]
                    for a, b in est.dag.edges()
                ],
            })
    else:
        fits = fit.estimate_parameters_discrete(path, ds)
        doc["levels"] = {v: ls for v, ls in zip(ds.nodes, ds.levels)}
        for est, pr in zip(path, fits):
            nodes_doc = {}
            for j, name in enumerate(path.nodes):
                entry = {
                    "intercept": [float(v) for v in pr.intercepts[j]],
                    "parents": {
                        path.nodes[i]: [[float(v) for v in row] for row in pr.blocks[(i, j)]]
                        for i in pr.parents_of(j)
                    },
                }
                nodes_doc[name] = entry
            doc["estimates"].append({"lambda": est.lam, "nodes": nodes_doc})
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(f"wrote parameters for {len(path)} estimates to {args.out}", file=sys.stderr)
    return 0


def _cmd_select(args) -> int:
    path = read_path(args.path)
    given = [
        args.edges is not None,
        args.lam is not None,
        args.index is not None,
        args.auto,
    ]
    if sum(given) != 1:
        raise _UsageError("provide exactly one of --edges, --lambda, --index, --auto")
    if args.auto:
        if not args.data:
            raise _UsageError("--auto needs --data to refit the path")
        ds = _load_dataset(args, path.kind)
        idx = selection.select_parameter(path, ds, threshold=args.select_threshold)
        criterion = "auto"
    elif args.index is not None:
        idx = args.index
        if not 1 <= idx <= len(path):
            raise ValueError(f"index {idx} out of range 1..{len(path)}")
        criterion = f"index={args.index}"
    else:
        est = selection.select(path, edges=args.edges, lam=args.lam)
        idx = path.estimates.index(est) + 1
        criterion = f"edges={args.edges}" if args.edges is not None else f"lambda={args.lam}"
    est = path[idx - 1]
    doc = {
        "criterion": criterion,
        "index": idx,
        "lambda": est.lam,
        "nedge": est.nedge,
        "edges": [[a, b] for a, b in est.dag.named_edges()],
    }
    with open(args.out, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(f"selected estimate {idx} ({est.nedge} edges) -> {args.out}", file=sys.stderr)
    return 0


def _write_matrices(matrices, nodes, out_dir, stem) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for i, mat in enumerate(matrices, start=1):
        target = os.path.join(out_dir, f"{stem}_{i:03d}.csv")
        with open(target, "w") as fh:
            fh.write(",".join(nodes) + "\n")
            for row in mat:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _cmd_cov(args) -> int:
    ds = _load_dataset(args, CONTINUOUS)
    path = _run_learner(ds, args)
    fits = fit.estimate_parameters_gaussian(path, ds)
    mats = [fit.implied_covariance(f) for f in fits]
    _write_matrices(mats, ds.nodes, args.out_dir, "cov")
    print(f"wrote {len(mats)} covariance matrices to {args.out_dir}", file=sys.stderr)
    return 0


def _cmd_prec(args) -> int:
    ds = _load_dataset(args, CONTINUOUS)
    path = _run_learner(ds, args)
    fits = fit.estimate_parameters_gaussian(path, ds)
    mats = [fit.implied_precision(f) for f in fits]
    _write_matrices(mats, ds.nodes, args.out_dir, "prec")
    print(f"wrote {len(mats)} precision matrices to {args.out_dir}", file=sys.stderr)
    return 0


def _cmd_simulate(args) -> int:
    dag = simulate.random_dag(args.family, args.p, args.edges, seed=args.seed)
    plan = None
    if args.ivn_per_node:
        plan = simulate.per_node_intervention_plan(args.p, args.n, args.ivn_per_node)
    if args.kind == CONTINUOUS:
        params = simulate.constant_gaussian_params(dag, weight=args.weight,
                                                   noise=args.noise)
        ds = simulate.simulate_gaussian(params, args.n, interventions=plan,
                                        seed=args.seed, nodes=dag.nodes)
    else:
        params = simulate.random_discrete_params(
            dag, [args.levels] * args.p, seed=args.seed, effect=args.effect
        )
        ds = simulate.simulate_discrete(params, args.n, interventions=plan,
                                        seed=args.seed, nodes=dag.nodes)
    with open(args.out, "w") as fh:
        fh.write(dataset_to_csv_text(ds))
    if args.out_ivn:
        write_interventions(args.out_ivn, ds)
    if args.out_truth:
        with open(args.out_truth, "w") as fh:
            fh.write(format_edge_list(dag))
    print(f"wrote {ds.n} x {ds.p} dataset to {args.out}", file=sys.stderr)
    return 0


def _cmd_export(args) -> int:
    path = read_path(args.path)
    if not 1 <= args.index <= len(path):
        raise ValueError(f"index {args.index} out of range 1..{len(path)}")
    est = path[args.index - 1]
    chosen = [args.dot, args.edges, args.adj, args.json_out]
    if sum(x is not None for x in chosen) != 1:
        raise _UsageError("provide exactly one of --dot, --edges, --adj, --json")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(format_dot(est.dag))
        target = args.dot
    elif args.edges:
        with open(args.edges, "w") as fh:
            fh.write(format_edge_list(est.dag))
        target = args.edges
    elif args.adj:
        mat = est.dag.adjacency_matrix()
        with open(args.adj, "w") as fh:
            fh.write("," + ",".join(path.nodes) + "\n")
            for name, row in zip(path.nodes, mat):
                fh.write(name + "," + ",".join(str(int(v)) for v in row) + "\n")
        target = args.adj
    else:
        single = path_to_dict(path)
        single["estimates"] = [single["estimates"][args.index - 1]]
        with open(args.json_out, "w") as fh:
            json.dump(single, fh, indent=2)
            fh.write("\n")
        target = args.json_out
    print(f"exported estimate {args.index} to {target}", file=sys.stderr)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="sparsedag",
                     description="Sparse Bayesian network structure learning")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    learn = sub.add_parser("learn", help="trace a solution path")
    _add_learn_flags(learn)
    learn.add_argument("--out", required=True, help="path JSON to write")
    learn.set_defaults(func=_cmd_learn)

    params = sub.add_parser("params", help="refit parameters along a path")
    params.add_argument("--path", required=True)
    params.add_argument("--data", required=True)
    params.add_argument("--ivn")
    params.add_argument("--levels")
    params.add_argument("--out", required=True)
    params.set_defaults(func=_cmd_params)

    sel = sub.add_parser("select", help="pick one estimate from a path")
    sel.add_argument("--path", required=True)
    sel.add_argument("--edges", type=int)
    sel.add_argument("--lambda", dest="lam", type=float)
    sel.add_argument("--index", type=int)
    sel.add_argument("--auto", action="store_true",
                     help="gain-per-edge elbow rule over refit likelihoods")
    sel.add_argument("--select-threshold", type=float,
                     default=selection.DEFAULT_SELECT_THRESHOLD)
    sel.add_argument("--data")
    sel.add_argument("--ivn")
    sel.add_argument("--levels")
    sel.add_argument("--out", required=True)
    sel.set_defaults(func=_cmd_select)

    cov = sub.add_parser("cov", help="implied covariance matrices along a path")
    _add_learn_flags(cov)
    cov.add_argument("--out-dir", required=True)
    cov.set_defaults(func=_cmd_cov)

    prec = sub.add_parser("prec", help="implied precision matrices along a path")
    _add_learn_flags(prec)
    prec.add_argument("--out-dir", required=True)
    prec.set_defaults(func=_cmd_prec)

    sim = sub.add_parser("simulate", help="write a synthetic dataset")
    sim.add_argument("--family", choices=list(simulate.FAMILIES), required=True)
    sim.add_argument("--p", type=int, required=True)
    sim.add_argument("--edges", type=int, required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--type", dest="kind", choices=[CONTINUOUS, DISCRETE],
                     default=CONTINUOUS)
    sim.add_argument("--levels", type=int, default=3, help="levels per discrete node")
    sim.add_argument("--effect", type=float, default=2.5,
                     help="discrete block magnitude")
    sim.add_argument("--weight", type=float, default=1.0, help="edge weight")
    sim.add_argument("--noise", type=float, default=1.0, help="noise variance")
    sim.add_argument("--ivn-per-node", type=int, default=0)
    sim.add_argument("--out", required=True)
    sim.add_argument("--out-ivn")
    sim.add_argument("--out-truth")
    sim.set_defaults(func=_cmd_simulate)

    exp = sub.add_parser("export", help="convert one estimate to a graph format")
    exp.add_argument("--path", required=True)
    exp.add_argument("--index", type=int, required=True, help="1-based estimate index")
    exp.add_argument("--dot")
    exp.add_argument("--edges")
    exp.add_argument("--adj")
    exp.add_argument("--json", dest="json_out")
    exp.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
