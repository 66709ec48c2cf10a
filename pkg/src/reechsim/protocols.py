"""Cluster-head election and per-round energy accounting.

Two election schemes share one execution step:

* REECH-ME: R1 nodes talk straight to the sink; in every other region the
  alive node holding the most energy at the start of the round is the head.
* LEACH: each eligible node volunteers with the classic rotating threshold
  and the rest join the nearest head.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .energy import RadioParams, crossover_distance
from .kernels import NO_DEST, ROLE_DEAD, ROLE_DIRECT, ROLE_HEAD, ROLE_NORMAL, SINK
from .topology import FieldSpec, Network, RegionMap, Role

_ROLE_NAMES = {ROLE_NORMAL: Role.NORMAL, ROLE_HEAD: Role.CLUSTER_HEAD, ROLE_DIRECT: Role.DIRECT}


class ProtocolError(RuntimeError):
    """A round plan disagrees with the network state."""


@dataclass
class RoundPlan:
    round_index: int
    ch_assignments: dict[int, int]  # region id (REECH-ME) or ordinal (LEACH) -> head node id
    dest: np.ndarray  # per node: head id, SINK, or NO_DEST for dead nodes
    role: np.ndarray  # per node: kernels.ROLE_*

    @property
    def ch_count(self) -> int:
        return int(np.count_nonzero(self.role == ROLE_HEAD))

    @property
    def memberships(self) -> dict[int, int]:
        return {i: int(d) for i, d in enumerate(self.dest) if d != NO_DEST}

    def role_of(self, node_id: int) -> Role | None:
        return _ROLE_NAMES.get(int(self.role[node_id]))


def reech_elect_chs(net: Network, round_index: int, rng: np.random.Generator) -> RoundPlan:
    """Max-energy election per clustered region.

    A region whose alive nodes all hold exactly the same energy (the first
    round) draws its head uniformly from ``rng``; otherwise the richest node
    wins and ties go to the lowest id. Regions are visited in id order.
    """
    n = len(net)
    alive = net.alive
    dest = np.full(n, NO_DEST, dtype=np.int64)
    role = np.full(n, ROLE_DEAD, dtype=np.int64)
    heads = {}
    for region in net.regions:
        ids = np.flatnonzero(alive & (net.region == region.id))
        if ids.size == 0:
            continue
        if region.routing_mode == "direct":
            dest[ids] = SINK
            role[ids] = ROLE_DIRECT
            continue
        e = net.energy[ids]
        if np.all(e == e[0]):
            head = int(ids[rng.integers(ids.size)])
        else:
            head = int(ids[np.argmax(e)])  # argmax returns the first (lowest id) maximum
        heads[region.id] = head
        dest[ids] = head
        role[ids] = ROLE_NORMAL
        dest[head] = SINK
        role[head] = ROLE_HEAD
    return RoundPlan(round_index, heads, dest, role)


@dataclass(frozen=True)
class LeachParams:
    p: float = 0.1

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ValueError(f"LEACH head probability must lie in (0, 1), got {self.p}")

    @property
    def epoch(self) -> int:
        return max(1, int(round(1 / self.p)))


@dataclass
class LeachState:
    """Per-node round of last head service; -1 means never."""

    last_head_round: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    @classmethod
    def fresh(cls, n: int) -> "LeachState":
        return cls(np.full(n, -1, dtype=np.int64))

    def eligible(self, round_index: int, epoch: int) -> np.ndarray:
        epoch_start = round_index - round_index % epoch
        return self.last_head_round < epoch_start


def leach_threshold(params: LeachParams, round_index: int, eligible: bool = True) -> float:
    if not eligible:
        return 0.0
    return params.p / (1 - params.p * (round_index % params.epoch))


def leach_elect_chs(
    net: Network,
    params: LeachParams,
    state: LeachState,
    round_index: int,
    rng: np.random.Generator,
    nearest_heads=None,
) -> RoundPlan:
    """Threshold election; one uniform draw per alive node in id order.

    Ineligible nodes still consume their draw so the stream position does
    not depend on the eligibility history.
    """
    if nearest_heads is None:
        nearest_heads = kernels.select_backend()[1]
    n = len(net)
    alive_idx = np.flatnonzero(net.alive)
    draws = rng.random(alive_idx.size)
    t = leach_threshold(params, round_index)
    eligible = state.eligible(round_index, params.epoch)[alive_idx]
    head_idx = alive_idx[eligible & (draws < t)]
    state.last_head_round[head_idx] = round_index

    dest = np.full(n, NO_DEST, dtype=np.int64)
    role = np.full(n, ROLE_DEAD, dtype=np.int64)
    if head_idx.size == 0:
        dest[alive_idx] = SINK
        role[alive_idx] = ROLE_DIRECT
        return RoundPlan(round_index, {}, dest, role)

    member_idx = np.setdiff1d(alive_idx, head_idx, assume_unique=True)
    dest[member_idx] = nearest_heads(net.x, net.y, member_idx, head_idx)
    role[member_idx] = ROLE_NORMAL
    dest[head_idx] = SINK
    role[head_idx] = ROLE_HEAD
    return RoundPlan(round_index, {k: int(h) for k, h in enumerate(head_idx)}, dest, role)


@dataclass
class RoundOutcome:
    debits: np.ndarray  # energy actually removed from each node this round
    manifest: np.ndarray  # sender ids of packets offered to the sink, ascending


def check_plan(net: Network, plan: RoundPlan) -> None:
    alive = net.alive
    if np.any((plan.role == ROLE_DEAD) != ~alive):
        raise ProtocolError(f"round {plan.round_index}: plan alive set differs from the network")
    members = np.flatnonzero(plan.role == ROLE_NORMAL)
    tgt = plan.dest[members]
    if np.any(tgt < 0) or np.any(plan.role[tgt] != ROLE_HEAD):
        raise ProtocolError(f"round {plan.round_index}: a member points at a node that is not a live head")
    senders = (plan.role == ROLE_HEAD) | (plan.role == ROLE_DIRECT)
    if np.any(plan.dest[senders] != SINK):
        raise ProtocolError(f"round {plan.round_index}: heads and direct nodes must send to the sink")


def execute_round(
    net: Network,
    plan: RoundPlan,
    radio: RadioParams,
    field_spec: FieldSpec,
    backend=None,
    validate: bool = True,
) -> RoundOutcome:
    """Charge every alive node for its part of the round and update ``net.energy``.

    Members pay to reach their head; a head pays reception per member,
    aggregation over members plus its own reading, and one packet to the
    sink; direct nodes pay one packet to the sink. A node that cannot afford
    its debit still transmits and is left at zero energy.
    """
    if validate:
        check_plan(net, plan)
    round_debits, _, apply_debits = backend or kernels.select_backend()
    sx, sy = field_spec.sink_position
    debits = round_debits(
        net.x, net.y, plan.dest, plan.role, float(sx), float(sy),
        radio.e_elec, radio.eps_fs, radio.eps_mp, crossover_distance(radio), radio.e_da, radio.packet_bits,
    )
    removed = apply_debits(net.energy, debits)
    manifest = np.flatnonzero(plan.dest == SINK)
    return RoundOutcome(removed, manifest)

