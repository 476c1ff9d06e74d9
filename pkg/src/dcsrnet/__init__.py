"""Partitioned spiking-network state: text fileset codec, validation,
geometric repartitioning, format export, and a deterministic reference
simulator with checkpoint/restart."""

from .model import (
    EDGE,
    NONE_MODEL,
    VERTEX,
    Distribution,
    Event,
    ModelDef,
    ModelTable,
    Network,
    PartitionBlock,
    in_csr,
    in_degree,
    owner_of,
    undirected_pair_count,
)
from .textio import FormatError, format_float, format_int
from .validate import ValidationReport, Violation, validate
from .fileset import FilesetPath, fileset_bytes, load_network, save_network
from .export import export_edgelist, export_metis, parse_metis_graph, undirected_rows
from .partition import (
    Assignment,
    PartitionMetrics,
    assignment_from_file,
    current_assignment,
    metrics,
    redistribute,
    renumbering,
    voxel_partition,
)
from .generate import GenSpec, generate, parse_config, scaling_run, spec_from_mapping
from .simulate import (
    LifParams,
    SimConfig,
    SimState,
    Simulation,
    checkpoint,
    embed,
    lif_step,
    restore,
    run,
    spikes_text,
    state_of,
)
from .cli import main, run_cli

__version__ = "1.0.0"

__all__ = [
    "EDGE",
    "NONE_MODEL",
    "VERTEX",
    "Distribution",
    "Event",
    "ModelDef",
    "ModelTable",
    "Network",
    "PartitionBlock",
    "in_csr",
    "in_degree",
    "owner_of",
    "undirected_pair_count",
    "FormatError",
    "format_float",
    "format_int",
    "ValidationReport",
    "Violation",
    "validate",
    "FilesetPath",
    "fileset_bytes",
    "load_network",
    "save_network",
    "export_edgelist",
    "export_metis",
    "parse_metis_graph",
    "undirected_rows",
    "Assignment",
    "PartitionMetrics",
    "assignment_from_file",
    "current_assignment",
    "metrics",
    "redistribute",
    "renumbering",
    "voxel_partition",
    "GenSpec",
    "generate",
    "parse_config",
    "scaling_run",
    "spec_from_mapping",
    "LifParams",
    "SimConfig",
    "SimState",
    "Simulation",
    "checkpoint",
    "embed",
    "lif_step",
    "restore",
    "run",
    "spikes_text",
    "state_of",
    "main",
    "run_cli",
    "__version__",
]
