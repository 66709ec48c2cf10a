"""Seeded simulator for REECH-ME and LEACH clustering in wireless sensor networks."""
from .channel import DropModel, filter_packets
from .config import ConfigError, ExperimentConfig
from .energy import RadioParams, aggregation_energy, crossover_distance, rx_energy, tx_energy
from .engine import RunSummary, extract_milestones, run_simulation
from .stats import AggregateStats, aggregate
from .topology import FieldSpec, build_regions, deploy_nodes, locate_region

__version__ = "0.1.0"
