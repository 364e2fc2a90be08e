"""Magnon-mediated two-qubit gates for superconducting transmons.

End-to-end simulator: device parameters and magnet geometry to coupling
constants, dissipative Lindblad dynamics, and average gate fidelities
for iSWAP, CZ and iCNOT gates.
"""

from .config import RunConfig, default_config, load_config
from .device import (
    DeviceConfig,
    Environment,
    MagnetSpec,
    TransmonDesign,
)
from .fidelity import average_gate_fidelity, haar_mc_fidelity, tomography
from .lindblad import GateChannel, LindbladProblem, gate_channel, liouvillian, propagate
from .models import GateKind, GateScenario, ModelSpec
from .operators import SpaceLayout
from .sweep import SweepRow, build_scenario, find_optimum, run_point, run_scenarios, run_sweep

__version__ = "0.1.0"

__all__ = [
    "DeviceConfig",
    "Environment",
    "GateChannel",
    "GateKind",
    "GateScenario",
    "LindbladProblem",
    "MagnetSpec",
    "ModelSpec",
    "RunConfig",
    "SpaceLayout",
    "SweepRow",
    "TransmonDesign",
    "average_gate_fidelity",
    "build_scenario",
    "default_config",
    "find_optimum",
    "gate_channel",
    "haar_mc_fidelity",
    "liouvillian",
    "load_config",
    "propagate",
    "run_point",
    "run_scenarios",
    "run_sweep",
    "tomography",
    "__version__",
]
