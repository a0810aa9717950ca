"""
Command-line entry point.

    uncertain-learning run --config exp.yaml --out results/ [--seed N]
    uncertain-learning check --config exp.yaml
    uncertain-learning prop1 --p-star 0.6,0.4 --p-alt 0.55,0.45 --r1 100 --r2 0 --trials 500 --seed 1

Exit status: 0 success, 1 validation failure, 2 I/O failure.
"""

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import ConfigFileError, load_config
from .experiments import proposition1_demo, run_campaign, substream, trial_seeds, write_campaign
from .netgraph import check_b_strong_connectivity, delta_bound, delta_diagnostic
from .probmath import as_probability_vector

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems are validation failures, not argparse's default status 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _load(path):
    try:
        return load_config(path)
    except OSError as exc:
        print(f"error: cannot read config {path}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def cmd_run(args):
    spec = _load(args.config)
    if isinstance(spec, int):
        return spec
    config = spec.experiment
    if args.seed is not None:
        config = replace(config, seed=args.seed, hypothesis_dists=config.hypothesis_dists.copy())
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        print(f"error: output directory {out} is not writable: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO

    start = time.perf_counter()
    result = run_campaign(config, workers=args.workers)
    elapsed = time.perf_counter() - start
    try:
        curves, table = write_campaign(result, out)
        manifest = out / "manifest.json"
        manifest.write_text(json.dumps({
            "version": __version__,
            "config_file": str(args.config),
            "config": config.to_dict(),
            "master_seed": config.seed,
            "trial_seeds": trial_seeds(config.seed, config.trials),
            "artifacts": {"curves": str(curves), "table": str(table)},
            "wall_clock_seconds": elapsed,
        }, indent=2) + "\n")
    except OSError as exc:
        print(f"error: writing results failed: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    for row in result.table_rows():
        print("regime={} m={} hypothesis={} mean_final_point={:.4f} stderr={:.4f}".format(*row))
    print(f"wrote {curves}, {table}, {manifest} in {elapsed:.1f}s")
    return EXIT_OK


def cmd_check(args):
    spec = _load(args.config)
    if isinstance(spec, int):
        return spec
    config = spec.experiment
    # same graph the first trial of a campaign would see
    graph_seed = int(substream(trial_seeds(config.seed, 1)[0], "graph").integers(2**63))
    graph = config.build_graph(graph_seed)
    horizon = spec.check_horizon
    if horizon < graph.window:
        print(f"error: check.horizon ({horizon}) is shorter than the window B={graph.window}",
              file=sys.stderr)
        return EXIT_INVALID
    ok = check_b_strong_connectivity(graph, horizon)
    delta = delta_diagnostic(graph, horizon)
    bound = delta_bound(graph.agent_count, graph.window)
    print(f"graph: {graph.name}  m={graph.agent_count}  B={graph.window}  horizon={horizon}")
    print(f"B-strongly connected: {'yes' if ok else 'no'}")
    print(f"delta = {delta!r}  (bound 1/m^(mB) = {bound!r}, {'satisfied' if delta >= bound else 'violated'})")
    return EXIT_OK if ok else EXIT_INVALID


def _distribution(text):
    try:
        values = [float(v) for v in text.split(",")]
        return as_probability_vector(values, atol=1e-9)
    except ValueError as exc:
        raise UsageError(f"malformed distribution {text!r}: {exc}") from None


def cmd_prop1(args):
    p_star, p_alt = _distribution(args.p_star), _distribution(args.p_alt)
    if p_star.size != p_alt.size:
        raise UsageError("--p-star and --p-alt must have the same number of entries")
    for name in ("r1", "r2"):
        if getattr(args, name) < 0:
            raise UsageError(f"--{name} must be >= 0")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    res = proposition1_demo(p_star, p_alt, args.r1, args.r2, args.trials, args.seed, steps=args.steps)
    print(f"flip probability: {res.flip_probability:.4f} ({res.flipped}/{res.draws} evidence draws)")
    if res.flipped:
        print(f"classical update failure rate: {res.failure_rate:.4f} "
              f"(true hypothesis below 1e-6 after {args.steps} steps)")
    else:
        print("classical update failure rate: n/a (no flipped draws)")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="uncertain-learning", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a Monte Carlo campaign and write CSVs")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True)
    run.add_argument("--seed", type=int)
    run.add_argument("--workers", type=int, default=1)
    run.set_defaults(func=cmd_run)

    check = sub.add_parser("check", help="verify B-strong connectivity of the configured graph")
    check.add_argument("--config", required=True)
    check.set_defaults(func=cmd_check)

    prop1 = sub.add_parser("prop1", help="estimate how often finite evidence misleads the classical update")
    prop1.add_argument("--p-star", required=True)
    prop1.add_argument("--p-alt", required=True)
    prop1.add_argument("--r1", type=int, required=True)
    prop1.add_argument("--r2", type=int, required=True)
    prop1.add_argument("--trials", type=int, required=True)
    prop1.add_argument("--seed", type=int, default=0)
    prop1.add_argument("--steps", type=int, default=10_000)
    prop1.set_defaults(func=cmd_prop1)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
