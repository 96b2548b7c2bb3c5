"""Surface-code fault-tolerance laboratory."""

__version__ = "0.1.0"

from .pauli import PauliString, pauli_multiply, commutes, conjugate_through_gate
from .tableau import StabilizerTableau, tableau_run
from .circuit import (
    Circuit,
    Element,
    FaultLocation,
    enumerate_locations,
    frame_run,
    validate_layers,
    circuit_to_text,
    circuit_from_text,
)
