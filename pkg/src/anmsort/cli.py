"""Command line interface: ``anmsort <command> [options]``.

Errors are reported on stderr as one JSON object ``{"error": ..., "message": ...}``
with a nonzero exit status.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import experiments as ex
from .anm import SigmaDist, WeightDist, sample_data, sample_instance, standardize
from .discovery import ALGORITHMS, random_regress, threshold_to_dag
from .evaluation import shd, sid
from .io import graph_to_dict, read_dataset_csv, read_graph_json, write_dataset_csv, write_graph_json
from .plots import heatmap_svg, line_plot_svg
from .sortability import CRITERIA, Weighting, sortability_reports


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail("UsageError", message, status=2)


def _fail(kind: str, message: str, status: int = 1):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    sys.exit(status)


def _load_config(args) -> ex.ExperimentConfig:
    obj = {}
    if args.config:
        obj = json.loads(Path(args.config).read_text(encoding="utf-8"))
    cfg = ex.ExperimentConfig.from_dict(obj)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _out_dir(args) -> Path:
    if not args.out:
        raise CliError("this command writes several files and needs --out <directory>")
    path = Path(args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _dump(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def cmd_simulate(args):
    cfg = _load_config(args)
    out = _out_dir(args)
    g = cfg.sample_graph(ex.substream(cfg.seed, 0, ex.GRAPH))
    inst = sample_instance(g, cfg.weight_dist, cfg.noise, ex.substream(cfg.seed, 0, ex.PARAMS))
    data = sample_data(inst, cfg.n, ex.substream(cfg.seed, 0, ex.DATA))
    if args.standardized:
        data = standardize(data)
    write_dataset_csv(data, out / "data.csv")
    write_graph_json(g, out / "graph.json", inst.weights)
    (out / "sigma.json").write_text(_dump(inst.sigma.tolist()), encoding="utf-8")


def cmd_sortability(args):
    data = read_dataset_csv(args.data)
    g, _ = read_graph_json(args.graph)
    if g.d != data.d:
        raise CliError(f"graph has {g.d} nodes but data has {data.d} columns")
    weightings = [Weighting(w) for w in args.weighting] if args.weighting else list(Weighting)
    reports = []
    for w in weightings:
        reports += [r.to_dict() for r in sortability_reports(data, g, args.criteria, w, args.tie_tol).values()]
    _emit(_dump(reports), args.out)


def cmd_discover(args):
    data = read_dataset_csv(args.data)
    if args.algorithm == "random":
        seed = args.seed if args.seed is not None else 0
        est = random_regress(data, ex.substream(seed, 0, ex.ALGO))
    else:
        est = ALGORITHMS[args.algorithm](data)
    doc = graph_to_dict(threshold_to_dag(est, args.eps), est.weights)
    doc["order"] = list(est.order)
    doc["scores"] = est.scores.tolist()
    _emit(_dump(doc), args.out)


def cmd_evaluate(args):
    g_true, _ = read_graph_json(args.true)
    g_est, _ = read_graph_json(args.est)
    _emit(_dump({"sid": sid(g_true, g_est), "shd": shd(g_true, g_est)}), args.out)


def cmd_bench(args):
    cfg = _load_config(args)
    out = _out_dir(args)
    records = ex.run_benchmark(cfg, threads=args.threads)
    (out / "records.csv").write_text(ex.records_to_csv(records, cfg.algorithms), encoding="utf-8")
    (out / "metadata.json").write_text(_dump(ex.bench_metadata(cfg, records)), encoding="utf-8")
    ok = [r for r in records if r.status == "ok"]
    curves = {
        name: ex.window_average(ok, "v_r2", f"sid_{name}", cfg.window_width, cfg.window_centers)
        for name in cfg.algorithms
    }
    (out / "curves.csv").write_text(ex.curves_to_csv(curves), encoding="utf-8")
    (out / "curves.svg").write_text(line_plot_svg(curves, "SID by R2-sortability"), encoding="utf-8")


def cmd_chain(args):
    records = ex.chain_experiment(
        p_max=args.p_max,
        replicates=args.replicates,
        weight_dist=WeightDist(args.weight_lo, args.weight_hi),
        sigma_dist=SigmaDist.uniform(args.sigma_lo, args.sigma_hi),
        n=args.n,
        seed=args.seed if args.seed is not None else 0,
        noise_family=args.noise,
        threads=args.threads,
    )
    _emit(ex.dataclass_rows_to_csv(records), args.out)


def cmd_sweep(args):
    cfg = _load_config(args)
    if not args.config:
        # sweep defaults: 50-node graphs, 20 replicates, inner weight bound 0.1
        cfg = replace(cfg, d=50, replicates=20, weight_dist=WeightDist(0.1, 1.0))
    out = _out_dir(args)
    cells = ex.sweep_heatmap(args.gammas, args.targets, cfg, args.criteria, threads=args.threads)
    (out / "sweep.csv").write_text(ex.dataclass_rows_to_csv(cells), encoding="utf-8")
    for c in args.criteria:
        (out / f"sweep_{c}.svg").write_text(
            heatmap_svg(cells, f"v_{c}", f"mean {c}-sortability ({cfg.graph_model.upper()})"),
            encoding="utf-8",
        )


def cmd_counterexample(args):
    _emit(_dump(ex.counterexample_report()), args.out)


def cmd_audit(args):
    data = read_dataset_csv(args.data)
    g = read_graph_json(args.graph)[0] if args.graph else None
    if args.algorithms and g is None:
        raise CliError("--algorithms needs --graph to score estimates")
    report = ex.audit_dataset(
        data,
        g,
        bootstrap=args.bootstrap,
        seed=args.seed if args.seed is not None else 0,
        weighting=args.weighting,
        algorithms=args.algorithms,
    )
    report["columns"] = list(data.names or ())
    _emit(_dump(report), args.out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment configuration")
    common.add_argument("--seed", type=int, help="global seed (overrides the config)")
    common.add_argument("--out", help="output file or directory (stdout if omitted, where allowed)")
    common.add_argument("--threads", type=int, default=1, help="worker threads")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="anmsort", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common], help="sample a DAG, ANM and dataset")
    p.add_argument("--standardized", action="store_true", help="write standardized data")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sortability", parents=[common], help="sortability of a dataset w.r.t. a graph")
    p.add_argument("--data", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--criteria", nargs="+", choices=CRITERIA, default=list(CRITERIA))
    p.add_argument("--weighting", nargs="+", choices=[w.value for w in Weighting])
    p.add_argument("--tie-tol", type=float, default=0.0)
    p.set_defaults(func=cmd_sortability)

    p = sub.add_parser("discover", parents=[common], help="run a sort-and-regress estimator")
    p.add_argument("--data", required=True)
    p.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="r2sr")
    p.add_argument("--eps", type=float, default=0.0, help="edge threshold on |weight|")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("evaluate", parents=[common], help="SID and SHD between two graphs")
    p.add_argument("--true", required=True)
    p.add_argument("--est", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", parents=[common], help="benchmark over simulated replicates")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("chain", parents=[common], help="variance and R^2 along random chains")
    p.add_argument("--p-max", type=int, default=50)
    p.add_argument("--replicates", type=int, default=30)
    p.add_argument("--n", type=int, default=5000)
    p.add_argument("--weight-lo", type=float, default=0.5)
    p.add_argument("--weight-hi", type=float, default=2.0)
    p.add_argument("--sigma-lo", type=float, default=0.5)
    p.add_argument("--sigma-hi", type=float, default=2.0)
    p.add_argument("--noise", choices=["gaussian", "uniform"], default="gaussian")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("sweep", parents=[common], help="mean sortability over in-degree x E[log|V|]")
    p.add_argument("--gammas", type=float, nargs="+", default=[1.0, 2.0, 3.0, 4.0])
    p.add_argument("--targets", type=float, nargs="+", default=list(np.linspace(-1.0, 2.5, 8)))
    p.add_argument("--criteria", nargs="+", choices=CRITERIA, default=["r2"])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("counterexample", parents=[common], help="analytic controlled-CEV example")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("audit", parents=[common], help="sortability of external data with bootstrap")
    p.add_argument("--data", required=True)
    p.add_argument("--graph")
    p.add_argument("--bootstrap", type=int, default=30)
    p.add_argument("--weighting", choices=[w.value for w in Weighting], default="unique_length")
    p.add_argument("--algorithms", nargs="*", choices=sorted(ALGORITHMS), default=[])
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        args.func(args)
    except (CliError, ValueError, OSError) as exc:
        _fail(type(exc).__name__, str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
