import numpy as np
import pytest

from reechsim.config import ExperimentConfig
from reechsim.engine import InvariantError, extract_milestones, run_simulation

CFG = ExperimentConfig()


@pytest.fixture(scope="module")
def reech_run():
    return run_simulation(CFG, "reech", 1)


@pytest.fixture(scope="module")
def leach_run():
    return run_simulation(CFG, "leach", 1)


def test_milestones_definition():
    alive = [100, 100, 99, 80, 50, 20, 10, 5, 1, 0]
    assert extract_milestones(alive) == (2, 9, 7, False)


def test_milestones_simultaneous_death():
    m = extract_milestones([4, 4, 4, 0])
    assert m.stability == m.lifetime == 3 and m.instability == 0


def test_milestones_censored():
    m = extract_milestones([10, 10, 9, 9], total=10, max_rounds=4)
    assert m.lifetime == 4 and m.censored and m.stability == 2


def test_milestones_reject_increase():
    with pytest.raises(InvariantError):
        extract_milestones([10, 9, 10])


def test_huge_energy_run_is_censored():
    cfg = CFG.replace(initial_energy=1e6, max_rounds=50)
    run = run_simulation(cfg, "reech", 1)
    assert run.rounds == 50
    assert run.censored and run.lifetime == 50 and run.stability_period == 50


def test_reech_stable_rounds_send_28(reech_run):
    s = reech_run.series
    n = reech_run.stability_period
    assert n > 0
    assert np.all(s["ch_count"][:n] == 8)
    assert np.all(s["packets_sent"][:n] == 28)


@pytest.mark.parametrize("fixture", ["reech_run", "leach_run"])
def test_series_invariants(fixture, request):
    run = request.getfixturevalue(fixture)
    s = run.series
    assert np.all(s["alive"] + s["dead"] == 100)
    assert np.all(s["packets_received"] + s["packets_dropped"] == s["packets_sent"])
    assert np.all(np.diff(s["alive"]) <= 0)
    assert np.all(np.diff(s["total_energy_j"]) < 0)
    assert s["alive"][-1] == 0 and not run.censored
    assert 0 < run.stability_period <= run.lifetime
    assert run.lifetime == run.rounds - 1


def test_energy_conservation(reech_run):
    spent = reech_run.consumed.sum()
    assert abs(spent - (50.0 - reech_run.series["total_energy_j"][-1])) < 1e-12


def test_same_seed_same_bytes():
    assert run_simulation(CFG, "leach", 9).to_csv() == run_simulation(CFG, "leach", 9).to_csv()


def test_different_seed_differs():
    assert run_simulation(CFG, "reech", 1).to_csv() != run_simulation(CFG, "reech", 2).to_csv()


def test_ideal_channel():
    run = run_simulation(CFG.replace(drop_probability=0.0), "reech", 4)
    assert np.array_equal(run.series["packets_received"], run.series["packets_sent"])


def test_observer_sees_every_round():
    seen = []
    run = run_simulation(CFG.replace(max_rounds=7), "leach", 1, observer=lambda r, net, plan, out: seen.append(r))
    assert seen == list(range(7)) == list(range(run.rounds))


def test_csv_layout(reech_run):
    lines = reech_run.to_csv().splitlines()
    assert lines[0] == "round,alive,dead,ch_count,packets_sent,packets_received,packets_dropped,total_energy_j"
    first = lines[1].split(",")
    assert first[:5] == ["0", "100", "0", "8", "28"]
    assert len(first[7].split(".")[1]) == 9
    assert len(lines) == reech_run.rounds + 1


def test_round_metrics_view(reech_run):
    m = reech_run.round_metrics(0)
    assert m.alive == 100 and m.packets_sent == 28
    assert m.packets_received + m.packets_dropped == 28


def test_unknown_protocol():
    with pytest.raises(ValueError):
        run_simulation(CFG, "heed", 1)
