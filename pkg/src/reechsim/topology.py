"""Field partition into nine regions and node deployment."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class OutOfFieldError(ValueError):
    pass


class Role(str, Enum):
    NORMAL = "normal"
    CLUSTER_HEAD = "cluster_head"
    DIRECT = "direct"


@dataclass(frozen=True)
class FieldSpec:
    width: float = 100.0
    height: float = 100.0
    sink_position: tuple[float, float] = (50.0, 50.0)

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"field dimensions must be positive, got {self.width}x{self.height}")
        sx, sy = self.sink_position
        if not (0 <= sx <= self.width and 0 <= sy <= self.height):
            raise ValueError(f"sink {self.sink_position} lies outside the field")


@dataclass(frozen=True)
class Region:
    id: int  # 1..9
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    node_quota: int
    routing_mode: str  # "direct" or "clustered"

    @property
    def area(self) -> float:
        return (self.x_range[1] - self.x_range[0]) * (self.y_range[1] - self.y_range[0])

    @property
    def name(self) -> str:
        return f"R{self.id}"


# Fractions of the field (x0, x1, y0, y1). R3 spans 0-0.5 so that the
# top strip between x=25 and x=50 belongs to some region.
_LAYOUT = (
    (1, (0.25, 0.75, 0.25, 0.75), "direct"),
    (2, (0.50, 1.00, 0.75, 1.00), "clustered"),
    (3, (0.00, 0.50, 0.75, 1.00), "clustered"),
    (4, (0.00, 0.25, 0.50, 0.75), "clustered"),
    (5, (0.00, 0.25, 0.25, 0.50), "clustered"),
    (6, (0.00, 0.50, 0.00, 0.25), "clustered"),
    (7, (0.50, 1.00, 0.00, 0.25), "clustered"),
    (8, (0.75, 1.00, 0.25, 0.50), "clustered"),
    (9, (0.75, 1.00, 0.50, 0.75), "clustered"),
)
DEFAULT_QUOTAS = (20, 10, 10, 10, 10, 10, 10, 10, 10)


@dataclass(frozen=True)
class RegionMap:
    field: FieldSpec
    regions: tuple[Region, ...]

    def __iter__(self):
        return iter(self.regions)

    def __len__(self):
        return len(self.regions)

    def __getitem__(self, region_id: int) -> Region:
        return self.regions[region_id - 1]

    @property
    def total_nodes(self) -> int:
        return sum(r.node_quota for r in self.regions)

    @property
    def clustered(self) -> tuple[Region, ...]:
        return tuple(r for r in self.regions if r.routing_mode == "clustered")


def build_regions(field_spec: FieldSpec | None = None, quotas=DEFAULT_QUOTAS) -> RegionMap:
    field_spec = field_spec or FieldSpec()
    if len(quotas) != len(_LAYOUT):
        raise ValueError(f"expected {len(_LAYOUT)} region quotas, got {len(quotas)}")
    if any(q < 0 for q in quotas):
        raise ValueError("region quotas must be non-negative")
    w, h = field_spec.width, field_spec.height
    regions = tuple(
        Region(rid, (fx0 * w, fx1 * w), (fy0 * h, fy1 * h), int(q), mode)
        for (rid, (fx0, fx1, fy0, fy1), mode), q in zip(_LAYOUT, quotas)
    )
    return RegionMap(field_spec, regions)


def _in_interval(v: float, lo: float, hi: float, edge: float) -> bool:
    # half-open, except the field's far edge is closed
    return lo <= v < hi or (hi == edge and v == edge)


def region_contains(region: Region, x: float, y: float, field_spec: FieldSpec) -> bool:
    return _in_interval(x, *region.x_range, field_spec.width) and _in_interval(
        y, *region.y_range, field_spec.height
    )


def locate_region(regions: RegionMap, point) -> int:
    """Return the id of the region containing ``point``; R1 is checked first."""
    x, y = point
    f = regions.field
    if not (0 <= x <= f.width and 0 <= y <= f.height):
        raise OutOfFieldError(f"point {point} is outside the {f.width}x{f.height} field")
    for region in regions:
        if region_contains(region, x, y, f):
            return region.id
    raise OutOfFieldError(f"point {point} is not covered by any region")


def locate_regions(regions: RegionMap, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Vectorised :func:`locate_region`; 0 marks uncovered points."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    f = regions.field
    if np.any((xs < 0) | (xs > f.width) | (ys < 0) | (ys > f.height)):
        raise OutOfFieldError("some points lie outside the field")
    out = np.zeros(xs.shape, dtype=np.int64)
    for region in regions:
        (x0, x1), (y0, y1) = region.x_range, region.y_range
        inx = ((xs >= x0) & (xs < x1)) | ((x1 == f.width) & (xs == f.width))
        iny = ((ys >= y0) & (ys < y1)) | ((y1 == f.height) & (ys == f.height))
        hit = inx & iny & (out == 0)
        out[hit] = region.id
    return out


@dataclass
class NodeState:
    node_id: int
    position: tuple[float, float]
    region_id: int
    residual_energy: float
    role_this_round: Role | None = None

    @property
    def alive(self) -> bool:
        return self.residual_energy > 0


def deploy_nodes(regions: RegionMap, rng: np.random.Generator, initial_energy: float = 0.5) -> list[NodeState]:
    """Scatter each region's quota uniformly over its rectangle.

    Ids run region-major (R1 first). Per region the stream yields all x
    coordinates, then all y coordinates.
    """
    nodes = []
    for region in regions:
        xs = rng.uniform(*region.x_range, size=region.node_quota)
        ys = rng.uniform(*region.y_range, size=region.node_quota)
        for x, y in zip(xs, ys):
            nodes.append(NodeState(len(nodes), (float(x), float(y)), region.id, initial_energy))
    return nodes


@dataclass
class Network:
    """Struct-of-arrays view of a deployed network; the engine mutates ``energy``."""

    x: np.ndarray
    y: np.ndarray
    region: np.ndarray
    energy: np.ndarray
    regions: RegionMap = field(repr=False)

    @classmethod
    def from_nodes(cls, nodes: list[NodeState], regions: RegionMap) -> "Network":
        return cls(
            x=np.array([n.position[0] for n in nodes], dtype=np.float64),
            y=np.array([n.position[1] for n in nodes], dtype=np.float64),
            region=np.array([n.region_id for n in nodes], dtype=np.int64),
            energy=np.array([n.residual_energy for n in nodes], dtype=np.float64),
            regions=regions,
        )

    def __len__(self):
        return len(self.x)

    @property
    def alive(self) -> np.ndarray:
        return self.energy > 0

    def nodes(self) -> list[NodeState]:
        return [
            NodeState(i, (float(self.x[i]), float(self.y[i])), int(self.region[i]), float(self.energy[i]))
            for i in range(len(self))
        ]


def write_nodes_csv(path, nodes: list[NodeState]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node_id", "x", "y", "region_id"])
        for n in nodes:
            writer.writerow([n.node_id, f"{n.position[0]:.6f}", f"{n.position[1]:.6f}", f"R{n.region_id}"])
