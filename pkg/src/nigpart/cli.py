"""Command line front end: partition, evaluate and verify subcommands.

Exit codes: 0 success, 1 verify-suite failure, 2 input/format errors,
3 configuration errors. Output files are written to a temporary file
and renamed, so failures never leave partial output. The NIGPART_LOG
environment variable (error, info, debug) controls log verbosity.
"""

import argparse
import json
import logging
import os
import sys
import tempfile
import time
from random import Random

from . import hgraph, ingest, nig, oracle, rbpart
from .gpvs import find_separator, GpvsConfig

logger = logging.getLogger("nigpart.cli")

_METRICS = {"cutnet": rbpart.Metric.CUTNET, "conn": rbpart.Metric.CONNECTIVITY}
_SCHEMES = {"unit": nig.WeightScheme.UNIT, "shared": nig.WeightScheme.SHARED}


class ConfigError(ValueError):
    pass


def _configure_logging():
    level = {"error": logging.ERROR, "info": logging.INFO,
             "debug": logging.DEBUG}.get(
        os.environ.get("NIGPART_LOG", "").lower(), logging.WARNING)
    logging.basicConfig(
        level=level, stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s")


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nigpart-")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_hypergraph(args):
    if args.format == "hg":
        if args.model is not None:
            raise ConfigError("--model applies only to --format mm")
        return ingest.read_hypergraph_text(args.input)
    m = ingest.read_matrix_market(args.input)
    model = args.model or "colnet"
    if model == "colnet":
        return ingest.column_net_model(m)
    return ingest.row_net_model(m)


def canonicalize_parts(part_of):
    """Relabel part ids in order of first appearance by vertex index."""
    remap = {}
    out = []
    for p in part_of:
        if p not in remap:
            remap[p] = len(remap)
        out.append(remap[p])
    return out


def cut_report_dict(report, pv, with_lambda=True):
    d = {
        "cutnet_cost": report.cutnet_cost,
        "connectivity_minus1_cost": report.connectivity_minus1_cost,
        "max_imbalance_vertex": report.max_imbalance_vertex,
        "max_imbalance_internal_nets": report.max_imbalance_internal_nets,
        "internal_nets_per_part": report.internal_nets_per_part,
        "part_weights": pv.part_weights,
    }
    if with_lambda:
        d["lambda_of"] = report.lambda_of
    return d


def render_cut_report_json(report, pv):
    return json.dumps(cut_report_dict(report, pv), indent=2) + "\n"


def _render_cut_report_text(report, pv):
    lines = [
        f"cutnet cost:            {report.cutnet_cost}",
        f"connectivity-1 cost:    {report.connectivity_minus1_cost}",
        f"vertex imbalance:       {report.max_imbalance_vertex:.4f}",
        f"internal-net imbalance: {report.max_imbalance_internal_nets:.4f}",
        f"part weights:           {pv.part_weights}",
        f"internal nets per part: {report.internal_nets_per_part}",
    ]
    return "\n".join(lines) + "\n"


def _stats_dict(args, stats, report, pv, timings):
    return {
        "config": {
            "input": args.input,
            "format": args.format,
            "model": args.model,
            "k": args.k,
            "metric": args.metric,
            "scheme": args.scheme,
            "epsilon": args.epsilon,
            "seed": args.seed,
            "postprocess": not args.no_postprocess,
            "allow_cut_degrade": args.allow_cut_degrade,
            "drop_degree": args.drop_degree,
            "threads": args.threads,
        },
        "nig": {"vertices": stats.nig_vertices, "edges": stats.nig_edges},
        "rb_nodes": [
            {
                "parts": [nd.parts_lo, nd.parts_hi],
                "leaf": nd.leaf_part is not None,
                "nets": nd.num_nets,
                "weight_a": nd.weight_a,
                "weight_b": nd.weight_b,
                "weight_s": nd.weight_s,
                "separator_cost": nd.separator_cost,
                "balance_met": nd.balance_met,
            }
            for nd in stats.nodes
        ],
        "total_separator_cost": stats.total_separator_cost,
        "num_separator_nets": len(stats.separator_nets),
        "free_vertices": stats.free_vertices,
        "cut": cut_report_dict(report, pv, with_lambda=False),
        "timings_ms": timings,
    }


def _render_stats_text(sd):
    cfg = sd["config"]
    t = sd["timings_ms"]
    lines = [
        f"input:   {cfg['input']} ({cfg['format']})",
        f"config:  k={cfg['k']} metric={cfg['metric']} scheme={cfg['scheme']}"
        f" epsilon={cfg['epsilon']} seed={cfg['seed']}",
        f"nig:     {sd['nig']['vertices']} vertices, {sd['nig']['edges']} edges",
        "rb nodes:",
    ]
    for nd in sd["rb_nodes"]:
        if nd["leaf"]:
            continue
        lines.append(
            f"  parts [{nd['parts'][0]},{nd['parts'][1]}): nets={nd['nets']}"
            f" wA={nd['weight_a']} wB={nd['weight_b']} wS={nd['weight_s']}"
            f" sep_cost={nd['separator_cost']}"
            f" balance={'yes' if nd['balance_met'] else 'no'}")
    lines.append(f"separator cost total:   {sd['total_separator_cost']}")
    lines.append(f"separator nets:         {sd['num_separator_nets']}")
    lines.append(f"free vertices:          {sd['free_vertices']}")
    cut = sd["cut"]
    lines.append(f"cutnet cost:            {cut['cutnet_cost']}")
    lines.append(f"connectivity-1 cost:    {cut['connectivity_minus1_cost']}")
    lines.append(f"vertex imbalance:       {cut['max_imbalance_vertex']:.4f}")
    lines.append(
        f"internal-net imbalance: {cut['max_imbalance_internal_nets']:.4f}")
    lines.append(
        f"timings: ingest {t['ingest']:.1f} ms, nig {t['nig_build']:.1f} ms,"
        f" rb {t['rb']:.1f} ms, postprocess {t['postprocess']:.1f} ms,"
        f" total {t['total']:.1f} ms")
    return "\n".join(lines) + "\n"


def cmd_partition(args):
    if args.k < 1:
        raise ConfigError(f"-k must be >= 1, got {args.k}")
    if args.epsilon < 0:
        raise ConfigError(f"--epsilon must be >= 0, got {args.epsilon}")
    if args.threads < 1:
        raise ConfigError(f"--threads must be >= 1, got {args.threads}")
    if args.allow_cut_degrade is not None and args.allow_cut_degrade < 0:
        raise ConfigError("--allow-cut-degrade must be >= 0")

    t0 = time.perf_counter()
    h = _load_hypergraph(args)
    t1 = time.perf_counter()

    cfg = rbpart.RbConfig(
        k=args.k,
        metric=_METRICS[args.metric],
        epsilon=args.epsilon,
        scheme=_SCHEMES[args.scheme],
        postprocess=not args.no_postprocess,
        rng_seed=args.seed,
        allow_cut_degrade=args.allow_cut_degrade,
        drop_degree=args.drop_degree,
    )
    pv, _, stats = rbpart.partition(h, cfg, threads=args.threads)

    part_of = canonicalize_parts(pv.part_of)
    pv = hgraph.PartitionVector.from_parts(part_of, args.k, h)
    report = hgraph.evaluate(h, pv)
    t2 = time.perf_counter()

    out_path = args.out or (args.input + ".part")
    _atomic_write(out_path, "".join(f"{p}\n" for p in part_of))

    timings = {
        "ingest": (t1 - t0) * 1000.0,
        "nig_build": stats.timings_ms["nig_build"],
        "rb": stats.timings_ms["rb"],
        "postprocess": stats.timings_ms["postprocess"],
        "total": (t2 - t0) * 1000.0,
    }
    sd = _stats_dict(args, stats, report, pv, timings)
    text = (json.dumps(sd, indent=2) + "\n" if args.stats == "json"
            else _render_stats_text(sd))
    if args.stats_out:
        _atomic_write(args.stats_out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_evaluate(args):
    if args.k < 1:
        raise ConfigError(f"-k must be >= 1, got {args.k}")
    h = _load_hypergraph(args)
    part_of = ingest.read_partition_file(args.partition, h.num_vertices,
                                         args.k)
    pv = hgraph.PartitionVector.from_parts(part_of, args.k, h)
    report = hgraph.evaluate(h, pv)
    if args.stats == "json":
        sys.stdout.write(render_cut_report_json(report, pv))
    else:
        sys.stdout.write(_render_cut_report_text(report, pv))
    return 0


def _verify_nig(count, max_size, seed):
    """build_nig must equal the all-pairs intersection oracle."""
    rng = Random(seed)
    failures = 0
    for _ in range(count):
        h = oracle.random_hypergraph(rng, max_vertices=max_size,
                                     max_nets=min(max_size, 64))
        g = nig.build_nig(h)
        got = [(a, b) for a in range(g.num_vertices) for b in g.adj[a]
               if a < b]
        if got != oracle.pairwise_nig(h):
            failures += 1
    return failures


def _verify_gpvs(count, max_size, seed):
    """Separation property and weight conservation on random graphs."""
    rng = Random(seed)
    failures = 0
    for i in range(count):
        g = oracle.random_graph(rng, max_vertices=max_size)
        cfg = GpvsConfig(rng_seed=seed + i, check_invariants=True)
        try:
            sep = find_separator(g, cfg)
        except Exception:
            failures += 1
            continue
        ok = (sep.separation_holds(g) and sep.weights_match(g)
              and sep.weight_a + sep.weight_b + sep.weight_s
              == g.total_weight())
        if not ok:
            failures += 1
    return failures


def _verify_hp(count, max_size, seed):
    """Cut containment and separator-cost bounds on k=2 partitions."""
    rng = Random(seed)
    failures = 0
    for i in range(count):
        h = oracle.random_hypergraph(rng, max_vertices=max_size,
                                     max_nets=min(max_size, 64))
        for metric in (rbpart.Metric.CUTNET, rbpart.Metric.CONNECTIVITY):
            cfg = rbpart.RbConfig(k=2, metric=metric, epsilon=0.2,
                                  scheme=nig.WeightScheme.UNIT,
                                  rng_seed=seed + i)
            try:
                pv, report, stats = rbpart.partition(h, cfg)
            except Exception:
                failures += 1
                continue
            sep_nets = set(stats.separator_nets)
            cut_nets = {n for n, lam in enumerate(report.lambda_of)
                        if lam > 1}
            if metric is rbpart.Metric.CUTNET:
                ok = (cut_nets <= sep_nets
                      and report.cutnet_cost <= stats.total_separator_cost)
            else:
                ok = (report.connectivity_minus1_cost
                      <= stats.total_separator_cost)
            if not ok:
                failures += 1
    return failures


_SUITES = {"nig": _verify_nig, "gpvs": _verify_gpvs, "hp": _verify_hp}


def cmd_verify(args):
    if args.count < 0:
        raise ConfigError(f"--count must be >= 0, got {args.count}")
    count = args.count if args.max_size >= 1 else 0
    failures = _SUITES[args.suite](count, args.max_size, args.seed)
    print(f"{args.suite}: {count - failures}/{count} pass")
    return 1 if failures else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nigpart",
        description="Hypergraph partitioning via vertex separators on the "
                    "net intersection graph.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="partition a hypergraph or matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("mm", "hg"), required=True)
    p.add_argument("--model", choices=("colnet", "rownet"), default=None)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--metric", choices=("cutnet", "conn"), default="conn")
    p.add_argument("--scheme", choices=("unit", "shared"), default="shared")
    p.add_argument("--epsilon", type=float, default=0.10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-postprocess", action="store_true")
    p.add_argument("--allow-cut-degrade", type=float, default=None)
    p.add_argument("--drop-degree", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--stats", choices=("text", "json"), default="text")
    p.add_argument("--stats-out", default=None)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("evaluate", help="score an existing partition")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("mm", "hg"), required=True)
    p.add_argument("--model", choices=("colnet", "rownet"), default=None)
    p.add_argument("--partition", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--stats", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("verify", help="run randomized oracle suites")
    p.add_argument("--suite", choices=("nig", "gpvs", "hp"), required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-size", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"nigpart: {exc}", file=sys.stderr)
        return 3
    except (ingest.FormatError, hgraph.InvalidPin, hgraph.InvalidWeight,
            hgraph.IncompletePartition, OSError) as exc:
        print(f"nigpart: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
