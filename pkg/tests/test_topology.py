import numpy as np
import pytest
from hypothesis import given, strategies as st

from reechsim.topology import (
    FieldSpec,
    Network,
    OutOfFieldError,
    build_regions,
    deploy_nodes,
    locate_region,
    locate_regions,
    region_contains,
    write_nodes_csv,
)

REGIONS = build_regions()


def test_nine_regions_cover_field_area():
    assert len(REGIONS) == 9
    assert sum(r.area for r in REGIONS) == 10_000


def test_region_areas():
    assert REGIONS[1].area == 2500
    assert REGIONS[3].area == 1250
    assert [r.area for r in REGIONS] == [2500, 1250, 1250, 625, 625, 1250, 1250, 625, 625]


def test_routing_modes_and_quotas():
    assert REGIONS[1].routing_mode == "direct"
    assert all(r.routing_mode == "clustered" for r in REGIONS.regions[1:])
    assert [r.node_quota for r in REGIONS] == [20, 10, 10, 10, 10, 10, 10, 10, 10]
    assert REGIONS.total_nodes == 100


def test_outer_ring_has_four_rectangles_and_four_squares():
    shapes = [r.x_range[1] - r.x_range[0] == r.y_range[1] - r.y_range[0] for r in REGIONS.regions[1:]]
    assert shapes.count(True) == 4 and shapes.count(False) == 4


@pytest.mark.parametrize(
    "point, expected",
    [((50, 50), 1), ((90, 90), 2), ((25, 25), 1), ((0, 0), 6), ((100, 100), 2), ((30, 90), 3),
     ((75, 75), 2), ((75, 50), 9), ((24.999, 60), 4), ((100, 25), 8)],
)
def test_locate_region(point, expected):
    assert locate_region(REGIONS, point) == expected


@pytest.mark.parametrize("point", [(-0.1, 50), (50, 100.01), (101, 101)])
def test_locate_outside_raises(point):
    with pytest.raises(OutOfFieldError):
        locate_region(REGIONS, point)


def test_scaled_field():
    regions = build_regions(FieldSpec(200, 50, (100, 25)))
    assert regions[1].x_range == (50, 150) and regions[1].y_range == (12.5, 37.5)
    assert sum(r.area for r in regions) == 200 * 50


@pytest.mark.parametrize("w, h", [(0, 100), (100, -1)])
def test_field_rejects_bad_dimensions(w, h):
    with pytest.raises(ValueError):
        build_regions(FieldSpec(w, h, (0, 0)))


@given(st.floats(0, 100), st.floats(0, 100))
def test_every_point_in_exactly_one_region(x, y):
    hits = [r.id for r in REGIONS if region_contains(r, x, y, REGIONS.field)]
    assert len(hits) == 1
    assert locate_region(REGIONS, (x, y)) == hits[0]


def test_vectorised_lookup_matches_scalar(rng):
    xs = np.concatenate([rng.uniform(0, 100, 2000), [0, 25, 50, 75, 100, 100]])
    ys = np.concatenate([rng.uniform(0, 100, 2000), [0, 25, 50, 75, 100, 0]])
    got = locate_regions(REGIONS, xs, ys)
    assert list(got) == [locate_region(REGIONS, p) for p in zip(xs, ys)]


def test_deploy_counts_and_membership(rng):
    nodes = deploy_nodes(REGIONS, rng)
    assert len(nodes) == 100
    assert sum(n.region_id == 1 for n in nodes) == 20
    assert [n.node_id for n in nodes] == list(range(100))
    assert [n.region_id for n in nodes] == sorted(n.region_id for n in nodes)
    for n in nodes:
        assert region_contains(REGIONS[n.region_id], *n.position, REGIONS.field)
        assert locate_region(REGIONS, n.position) == n.region_id
        assert n.residual_energy == 0.5 and n.alive


def test_deploy_is_deterministic():
    a = deploy_nodes(REGIONS, np.random.Generator(np.random.PCG64(7)))
    b = deploy_nodes(REGIONS, np.random.Generator(np.random.PCG64(7)))
    c = deploy_nodes(REGIONS, np.random.Generator(np.random.PCG64(8)))
    assert a == b
    assert a != c


def test_network_roundtrip(rng):
    nodes = deploy_nodes(REGIONS, rng)
    net = Network.from_nodes(nodes, REGIONS)
    assert net.nodes() == nodes
    net.energy[3] = 0.0
    assert not net.nodes()[3].alive
    assert net.alive.sum() == 99


def test_nodes_csv(tmp_path, rng):
    nodes = deploy_nodes(REGIONS, rng)
    path = tmp_path / "nodes.csv"
    write_nodes_csv(path, nodes)
    lines = path.read_text().splitlines()
    assert lines[0] == "node_id,x,y,region_id"
    assert len(lines) == 101
    first = lines[1].split(",")
    assert first[0] == "0" and first[3] == "R1"
    assert len(first[1].split(".")[1]) == 6
