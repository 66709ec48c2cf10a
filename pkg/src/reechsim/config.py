"""Experiment configuration: defaults, validation, and the flat ``key = value`` file format."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields

from .channel import DropModel
from .energy import RadioParams
from .protocols import LeachParams
from .topology import DEFAULT_QUOTAS, FieldSpec, RegionMap, build_regions

PROTOCOLS = ("reech", "leach")
RNG_NAME = "PCG64"


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class ExperimentConfig:
    field_width: float = 100.0
    field_height: float = 100.0
    sink_x: float = 50.0
    sink_y: float = 50.0
    region_quotas: tuple[int, ...] = DEFAULT_QUOTAS
    initial_energy: float = 0.5
    e_elec: float = 50e-9
    eps_fs: float = 10e-12
    eps_mp: float = 0.0013e-12
    e_da: float = 5e-9
    packet_bits: int = 4000
    drop_probability: float = 0.3
    leach_p: float = 0.1
    protocol: str = "both"
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    max_rounds: int = 5000
    confidence: float = 0.95
    output_dir: str = "results"
    rng: str = RNG_NAME

    def validate(self) -> "ExperimentConfig":
        positive = ("field_width", "field_height", "initial_energy", "e_elec", "eps_fs", "eps_mp", "e_da")
        for key in positive:
            v = getattr(self, key)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(key, f"must be positive, got {v!r}")
        if self.packet_bits <= 0:
            raise ConfigError("packet_bits", f"must be positive, got {self.packet_bits}")
        if not (0 <= self.sink_x <= self.field_width):
            raise ConfigError("sink_x", f"{self.sink_x} lies outside the field")
        if not (0 <= self.sink_y <= self.field_height):
            raise ConfigError("sink_y", f"{self.sink_y} lies outside the field")
        if len(self.region_quotas) != 9 or any(q < 0 for q in self.region_quotas) or sum(self.region_quotas) == 0:
            raise ConfigError("region_quotas", "need nine non-negative counts with a positive total")
        if not (0.0 <= self.drop_probability <= 1.0):
            raise ConfigError("drop_probability", f"must lie in [0, 1], got {self.drop_probability}")
        if not (0.0 < self.leach_p < 1.0):
            raise ConfigError("leach_p", f"must lie in (0, 1), got {self.leach_p}")
        if self.protocol not in PROTOCOLS + ("both",):
            raise ConfigError("protocol", f"expected reech, leach or both, got {self.protocol!r}")
        if not self.seeds:
            raise ConfigError("seeds", "at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds) or any(s < 0 for s in self.seeds):
            raise ConfigError("seeds", "seeds must be distinct non-negative integers")
        if self.max_rounds <= 0:
            raise ConfigError("max_rounds", f"must be positive, got {self.max_rounds}")
        if not (0.0 < self.confidence < 1.0):
            raise ConfigError("confidence", f"must lie in (0, 1), got {self.confidence}")
        if self.rng != RNG_NAME:
            raise ConfigError("rng", f"only {RNG_NAME} is supported, got {self.rng!r}")
        return self

    @property
    def protocols(self) -> tuple[str, ...]:
        return PROTOCOLS if self.protocol == "both" else (self.protocol,)

    def radio(self) -> RadioParams:
        return RadioParams(self.e_elec, self.eps_fs, self.eps_mp, self.e_da, self.packet_bits, self.initial_energy)

    def field_spec(self) -> FieldSpec:
        return FieldSpec(self.field_width, self.field_height, (self.sink_x, self.sink_y))

    def regions(self) -> RegionMap:
        return build_regions(self.field_spec(), self.region_quotas)

    def drop_model(self) -> DropModel:
        return DropModel(self.drop_probability)

    def leach_params(self) -> LeachParams:
        return LeachParams(self.leach_p)

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


def _format(value) -> str:
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(key: str, raw: str, kind):
    raw = raw.strip()
    try:
        if kind in ("float", float):
            return float(raw)
        if kind in ("int", int):
            return int(raw)
        if kind in ("str", str):
            return raw
        # tuple[int, ...]
        return tuple(int(tok) for tok in raw.replace(" ", "").split(",") if tok)
    except ValueError:
        raise ConfigError(key, f"cannot parse {raw!r}") from None


_KINDS = {f.name: f.type for f in fields(ExperimentConfig)}


def apply_overrides(config: ExperimentConfig, pairs: dict[str, str]) -> ExperimentConfig:
    changes = {}
    for key, raw in pairs.items():
        if key not in _KINDS:
            raise ConfigError(key, "unknown configuration key")
        changes[key] = _parse(key, raw, _KINDS[key])
    return config.replace(**changes)


def parse_config_text(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    pairs = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        pairs[key.strip()] = value
    return apply_overrides(base or ExperimentConfig(), pairs)


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config_text(fh.read())


def dump_config(config: ExperimentConfig) -> str:
    lines = [f"{f.name} = {_format(getattr(config, f.name))}" for f in fields(config)]
    return "\n".join(lines) + "\n"
