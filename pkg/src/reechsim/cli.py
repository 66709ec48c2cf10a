"""Command-line experiment driver.

    reechsim --protocol both --seeds 1,2,3,4,5 --out results/

Writes one CSV per (protocol, seed), an aggregate and a milestone summary
CSV per protocol, ``comparison.txt``, and ``config.txt`` (the effective
configuration, usable as ``--config`` to reproduce the experiment).
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import ConfigError, ExperimentConfig, apply_overrides, dump_config, load_config
from .engine import RunSummary, run_simulation
from .stats import MILESTONES, aggregate
from .topology import deploy_nodes, write_nodes_csv

log = logging.getLogger("reechsim")

LABELS = {"reech": "REECH-ME", "leach": "LEACH"}


def _run_one(args):
    config, protocol, seed = args
    return run_simulation(config, protocol, seed)


def simulate_all(config: ExperimentConfig, jobs: int = 1) -> dict[str, list[RunSummary]]:
    tasks = [(config, p, s) for p in config.protocols for s in config.seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))  # map preserves task order
    else:
        results = [_run_one(t) for t in tasks]
    runs: dict[str, list[RunSummary]] = {p: [] for p in config.protocols}
    for (_, p, _), res in zip(tasks, results):
        runs[p].append(res)
    return runs


def _pct(a: float, b: float) -> str:
    if b == 0:
        return "n/a"
    return f"{(a - b) / b * 100:+.1f}%"


def comparison_report(config: ExperimentConfig, runs, aggs) -> str:
    lines = [
        f"runs per protocol: {len(config.seeds)} (seeds {','.join(map(str, config.seeds))})",
        f"confidence level: {config.confidence:g}",
        f"drop probability: {config.drop_probability:g}",
        "",
    ]
    for p in config.protocols:
        agg = aggs[p]
        lines.append(f"[{LABELS[p]}]")
        for m in MILESTONES:
            lines.append(f"  {m:<12} {agg.milestone_mean[m]:10.1f} +/- {agg.milestone_ci[m]:.1f} rounds")
        censored = sum(r.censored for r in runs[p])
        if censored:
            lines.append(f"  lifetime censored at max_rounds={config.max_rounds} in {censored} run(s)")
        per_run = [r.stability_means() for r in runs[p]]
        for key in ("ch_count", "packets_sent", "packets_received", "packets_dropped"):
            v = np.mean([d[key] for d in per_run])
            lines.append(f"  stability-period mean {key:<17} {v:8.3f}")
        lines.append("")
    if len(config.protocols) == 2:
        r, l = aggs["reech"], aggs["leach"]
        lines.append("[REECH-ME vs LEACH]  (REECH - LEACH) / LEACH")
        for m in MILESTONES:
            lines.append(f"  {m:<12} {_pct(r.milestone_mean[m], l.milestone_mean[m])}")
        lines.append("")
    return "\n".join(lines)


def run_experiment(config: ExperimentConfig, jobs: int = 1, dump_nodes: bool = False) -> list[str]:
    """Run every selected protocol over every seed and write all outputs.

    Returns the written file names (sorted). Raises ``ConfigError`` for bad
    settings and ``OSError`` when the output directory is unusable.
    """
    config.validate()
    if len(config.seeds) < 2:
        raise ConfigError("seeds", "confidence intervals need at least 2 seeds")
    runs = simulate_all(config, jobs)
    aggs = {p: aggregate(runs[p], config.confidence) for p in config.protocols}

    files: dict[str, str] = {"config.txt": dump_config(config)}
    for p in config.protocols:
        for run in runs[p]:
            files[f"{p}_seed{run.seed}.csv"] = run.to_csv()
        files[f"{p}_aggregate.csv"] = aggs[p].to_csv()
        files[f"{p}_summary.csv"] = aggs[p].summary_csv()
    files["comparison.txt"] = comparison_report(config, runs, aggs)

    out = config.output_dir
    os.makedirs(out, exist_ok=True)
    for name in sorted(files):
        with open(os.path.join(out, name), "w", newline="") as fh:
            fh.write(files[name])
    if dump_nodes:
        regions = config.regions()
        for seed in config.seeds:
            nodes = deploy_nodes(regions, np.random.Generator(np.random.PCG64(seed)), config.initial_energy)
            name = f"nodes_seed{seed}.csv"
            write_nodes_csv(os.path.join(out, name), nodes)
            files[name] = ""
    log.info("wrote %d files to %s", len(files), out)
    return sorted(files)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("arguments", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="reechsim", description="REECH-ME vs LEACH wireless sensor network simulator")
    p.add_argument("--config", metavar="PATH", help="flat 'key = value' config file")
    p.add_argument("--protocol", choices=("reech", "leach", "both"))
    p.add_argument("--seeds", metavar="LIST", help="comma-separated seeds, e.g. 1,2,3,4,5")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--max-rounds", metavar="N")
    p.add_argument("--drop-prob", metavar="F")
    p.add_argument("--confidence", metavar="F")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent runs")
    p.add_argument("--dump-nodes", action="store_true", help="also write node placements per seed")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    flags = {
        "protocol": args.protocol,
        "seeds": args.seeds,
        "output_dir": args.out,
        "max_rounds": args.max_rounds,
        "drop_probability": args.drop_prob,
        "confidence": args.confidence,
    }
    return apply_overrides(config, {k: v for k, v in flags.items() if v is not None}).validate()


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        config = config_from_args(args)
        run_experiment(config, jobs=max(1, args.jobs), dump_nodes=args.dump_nodes)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
