"""Bernoulli packet loss on links to the sink."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DropModel:
    drop_probability: float = 0.3

    def __post_init__(self):
        if not 0.0 <= self.drop_probability <= 1.0:
            raise ValueError(f"drop_probability must lie in [0, 1], got {self.drop_probability}")


@dataclass
class ChannelResult:
    received: int
    dropped: int
    dropped_mask: np.ndarray  # aligned with the manifest


def filter_packets(model: DropModel, manifest, rng: np.random.Generator) -> ChannelResult:
    """Drop each packet independently when its uniform draw falls below the drop probability.

    ``manifest`` must be ordered by sender id; one draw is taken per packet in
    that order.
    """
    n = len(manifest)
    draws = rng.random(n)
    return apply_drops(model, draws)


def apply_drops(model: DropModel, draws: np.ndarray) -> ChannelResult:
    dropped = np.asarray(draws) < model.drop_probability
    nd = int(np.count_nonzero(dropped))
    return ChannelResult(received=dropped.size - nd, dropped=nd, dropped_mask=dropped)
