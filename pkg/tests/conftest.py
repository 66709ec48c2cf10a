import math

import numpy as np
import pytest

from reechsim.kernels import ROLE_DIRECT, ROLE_HEAD, ROLE_NORMAL
from reechsim.energy import aggregation_energy, rx_energy, tx_energy


def scalar_debits(net, plan, radio, field_spec):
    """Unclamped per-node cost of a plan built one node at a time from the scalar energy model."""
    sx, sy = field_spec.sink_position
    k = radio.packet_bits
    out = np.zeros(len(net))
    members_of = {}
    for i in range(len(net)):
        if plan.role[i] == ROLE_NORMAL:
            j = int(plan.dest[i])
            members_of[j] = members_of.get(j, 0) + 1
            dx, dy = net.x[i] - net.x[j], net.y[i] - net.y[j]
            out[i] = tx_energy(radio, k, math.sqrt(dx * dx + dy * dy))
    for i in range(len(net)):
        if plan.role[i] in (ROLE_HEAD, ROLE_DIRECT):
            dx, dy = net.x[i] - sx, net.y[i] - sy
            to_sink = tx_energy(radio, k, math.sqrt(dx * dx + dy * dy))
            if plan.role[i] == ROLE_HEAD:
                c = members_of.get(i, 0)
                out[i] = c * rx_energy(radio, k) + aggregation_energy(radio, k, c + 1) + to_sink
            else:
                out[i] = to_sink
    return out


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
