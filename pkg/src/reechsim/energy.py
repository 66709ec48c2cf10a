"""First-order radio energy model.

Transmit cost is a per-bit electronics term plus an amplifier term that is
quadratic in distance below the crossover distance and quartic at or above it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class RadioParams:
    e_elec: float = 50e-9  # J/bit, TX and RX circuitry
    eps_fs: float = 10e-12  # J/bit/m^2
    eps_mp: float = 0.0013e-12  # J/bit/m^4
    e_da: float = 5e-9  # J/bit/signal
    packet_bits: int = 4000
    initial_energy: float = 0.5  # J

    def __post_init__(self):
        for name in ("e_elec", "eps_fs", "eps_mp", "e_da", "packet_bits", "initial_energy"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def d0(self) -> float:
        return crossover_distance(self)


def crossover_distance(params: RadioParams) -> float:
    """Distance at which the free-space and multipath amplifier costs meet."""
    return math.sqrt(params.eps_fs / params.eps_mp)


def tx_energy(params: RadioParams, bits: float, distance: float) -> float:
    """Energy to transmit ``bits`` over ``distance`` metres.

    At exactly ``distance == d0`` the multipath branch is used; both branches
    give the same value there.
    """
    if distance < crossover_distance(params):
        return params.e_elec * bits + params.eps_fs * bits * (distance * distance)
    d2 = distance * distance
    return params.e_elec * bits + params.eps_mp * bits * (d2 * d2)


def rx_energy(params: RadioParams, bits: float) -> float:
    return params.e_elec * bits


def aggregation_energy(params: RadioParams, bits: float, signals: int) -> float:
    """Cost of fusing ``signals`` packets of ``bits`` each (members plus the CH's own)."""
    return params.e_da * bits * signals
