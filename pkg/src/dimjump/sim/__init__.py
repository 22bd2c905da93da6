"""Stabilizer circuits, detector models, decoding and Monte Carlo."""

from .circuit import CircuitBuilder, CliffordCircuit, Instruction, NoiseModel
from .coloring import bipartite_edge_coloring, cnot_layers
from .decoder import BpOsdDecoder, osd0
from .dem import DetectorModel, NondeterministicDetector, build_detector_model, decode_bp_osd
from .experiments import (
    MonteCarloResult,
    SingleShotDecoder,
    TeleportPair,
    TeleportReport,
    build_syndrome_extraction,
    build_teleport_circuit,
    memory_circuit,
    monte_carlo,
    normalized_rate,
    right_inverse,
    single_shot_repair,
    teleport_pair,
    verify_teleport_logical_action,
)
from .frame import FrameResult, fault_locations, propagate_frames, sample_fault_pattern
from .tableau import NonCliffordError, StabilizerTableau, TableauRun, tableau_run

__all__ = [
    "BpOsdDecoder",
    "CircuitBuilder",
    "CliffordCircuit",
    "DetectorModel",
    "FrameResult",
    "Instruction",
    "MonteCarloResult",
    "NoiseModel",
    "NonCliffordError",
    "NondeterministicDetector",
    "SingleShotDecoder",
    "StabilizerTableau",
    "TableauRun",
    "TeleportPair",
    "TeleportReport",
    "bipartite_edge_coloring",
    "build_detector_model",
    "build_syndrome_extraction",
    "build_teleport_circuit",
    "cnot_layers",
    "decode_bp_osd",
    "fault_locations",
    "memory_circuit",
    "monte_carlo",
    "normalized_rate",
    "osd0",
    "propagate_frames",
    "right_inverse",
    "sample_fault_pattern",
    "single_shot_repair",
    "tableau_run",
    "teleport_pair",
    "verify_teleport_logical_action",
]
