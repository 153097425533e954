"""Shortest-path holonomic single-qubit gates on a driven three-level system.

Synthesis of the circular-path, orange-slice, sine-squared and square-pulse
control schemes, plus Schrodinger/Lindblad propagation for verifying gate
durations, fidelities and robustness against static control errors.
"""

from . import dynamics, experiments, gates, geometry, schemes
from ._backend import backend_name
from .dynamics import DecoherenceRates, ErrorInjection
from .errors import DomainError, InvariantError, SingularSchemeError, SolverError
from .gates import NAMED_GATES, NamedGate, average_fidelity, state_fidelity, target_unitary
from .schemes import (
    GateSpec,
    PulseSchedule,
    duration_for_ceiling,
    synth_circular,
    synth_circular_fixed_tau,
    synth_oss,
    synth_snhqc,
    synth_square,
)

__version__ = "0.1.0"

__all__ = [
    "DecoherenceRates", "DomainError", "ErrorInjection", "GateSpec",
    "InvariantError", "NAMED_GATES", "NamedGate", "PulseSchedule",
    "SingularSchemeError", "SolverError", "average_fidelity", "backend_name",
    "duration_for_ceiling", "dynamics", "experiments", "gates", "geometry",
    "schemes", "state_fidelity", "synth_circular", "synth_circular_fixed_tau",
    "synth_oss", "synth_snhqc", "synth_square", "target_unitary",
    "__version__",
]
