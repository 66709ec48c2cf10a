"""Round loop for one seeded run, per-round metrics, and lifetime milestones."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .channel import filter_packets
from .config import ExperimentConfig
from .protocols import LeachState, execute_round, leach_elect_chs, reech_elect_chs
from .topology import Network, deploy_nodes

METRICS = (
    "alive",
    "dead",
    "ch_count",
    "packets_sent",
    "packets_received",
    "packets_dropped",
    "total_energy_j",
)
_COUNT_METRICS = METRICS[:-1]


class InvariantError(ValueError):
    pass


class Milestones(NamedTuple):
    stability: int
    lifetime: int
    instability: int
    censored: bool = False


def extract_milestones(alive, total: int | None = None, max_rounds: int | None = None) -> Milestones:
    """Stability, lifetime and instability from a per-round alive series.

    ``alive[r]`` is the alive count after round ``r``. Stability is the first
    round index with a death, lifetime the first with no survivors. A series
    that never reaches zero is censored at ``max_rounds`` (or its length).
    """
    alive = np.asarray(alive)
    if alive.size == 0:
        raise InvariantError("empty alive series")
    if np.any(np.diff(alive) > 0):
        raise InvariantError("alive series must be non-increasing")
    total = int(alive[0]) if total is None else total
    cap = alive.size if max_rounds is None else max_rounds
    deaths = np.flatnonzero(alive < total)
    stability = int(deaths[0]) if deaths.size else cap
    empty = np.flatnonzero(alive == 0)
    if empty.size:
        lifetime, censored = int(empty[0]), False
    else:
        lifetime, censored = cap, True
    return Milestones(stability, lifetime, lifetime - stability, censored)


@dataclass
class RoundMetrics:
    round_index: int
    alive: int
    dead: int
    ch_count: int
    packets_sent: int
    packets_received: int
    packets_dropped: int
    total_residual_energy: float


@dataclass
class RunSummary:
    protocol: str
    seed: int
    total_nodes: int
    initial_energy: float
    series: dict[str, np.ndarray]  # METRICS -> one entry per simulated round
    consumed: np.ndarray  # energy removed from the network per round
    milestones: Milestones

    @property
    def rounds(self) -> int:
        return len(self.series["alive"])

    @property
    def stability_period(self) -> int:
        return self.milestones.stability

    @property
    def lifetime(self) -> int:
        return self.milestones.lifetime

    @property
    def instability_period(self) -> int:
        return self.milestones.instability

    @property
    def censored(self) -> bool:
        return self.milestones.censored

    def round_metrics(self, r: int) -> RoundMetrics:
        s = self.series
        return RoundMetrics(r, *(int(s[m][r]) for m in _COUNT_METRICS), float(s["total_energy_j"][r]))

    def stability_means(self) -> dict[str, float]:
        """Mean packet counters over the rounds before the first death."""
        n = min(self.stability_period, self.rounds)
        return {m: float(self.series[m][:n].mean()) if n else float("nan") for m in
                ("packets_sent", "packets_received", "packets_dropped", "ch_count")}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["round", *METRICS])
        s = self.series
        for r in range(self.rounds):
            w.writerow([r, *(int(s[m][r]) for m in _COUNT_METRICS), f"{s['total_energy_j'][r]:.9f}"])
        return buf.getvalue()


def run_simulation(
    config: ExperimentConfig,
    protocol: str,
    seed: int,
    backend: str | None = None,
    observer=None,
) -> RunSummary:
    """Simulate one protocol from deployment until every node is dead or ``max_rounds``.

    A single PCG64 stream seeded with ``seed`` is consumed in a fixed order:
    deployment, then per round the election draws followed by the drop draws.
    ``observer(round, net, plan, outcome)`` is called after each round's debits.
    """
    if protocol not in ("reech", "leach"):
        raise ValueError(f"unknown protocol {protocol!r}")
    kern = kernels.select_backend(backend)
    radio = config.radio()
    field_spec = config.field_spec()
    regions = config.regions()
    drop = config.drop_model()
    rng = np.random.Generator(np.random.PCG64(seed))

    net = Network.from_nodes(deploy_nodes(regions, rng, radio.initial_energy), regions)
    n = len(net)
    leach = config.leach_params()
    leach_state = LeachState.fresh(n)

    cols = {m: np.zeros(config.max_rounds, dtype=np.int64) for m in _COUNT_METRICS}
    energy_series = np.zeros(config.max_rounds)
    consumed = np.zeros(config.max_rounds)

    r = 0
    while r < config.max_rounds and np.any(net.energy > 0):
        if protocol == "reech":
            plan = reech_elect_chs(net, r, rng)
        else:
            plan = leach_elect_chs(net, leach, leach_state, r, rng, nearest_heads=kern[1])
        out = execute_round(net, plan, radio, field_spec, backend=kern, validate=False)
        ch = filter_packets(drop, out.manifest, rng)
        if observer is not None:
            observer(r, net, plan, out)

        alive = int(np.count_nonzero(net.energy > 0))
        cols["alive"][r] = alive
        cols["dead"][r] = n - alive
        cols["ch_count"][r] = plan.ch_count
        cols["packets_sent"][r] = out.manifest.size
        cols["packets_received"][r] = ch.received
        cols["packets_dropped"][r] = ch.dropped
        energy_series[r] = net.energy.sum()
        consumed[r] = out.debits.sum()
        r += 1

    series = {m: cols[m][:r] for m in _COUNT_METRICS}
    series["total_energy_j"] = energy_series[:r]
    milestones = extract_milestones(series["alive"], total=n, max_rounds=config.max_rounds)
    return RunSummary(protocol, seed, n, radio.initial_energy, series, consumed[:r], milestones)
