"""Mixed-dimension qudit circuit simulator and ancilla gate constructions."""

from .algebra import (
    check_dimension,
    conjugate_state,
    controlled,
    controlled_phase,
    fourier,
    is_unitary,
    omega,
    pauli_x,
    pauli_z,
    phase_gate,
    sum_gate,
    swap_cr,
    swap_gate,
    zero_controlled,
)
from .constructions import (
    ConstructionReport,
    adqc_direct_circuit,
    adqc_entangle_circuit,
    adqc_interaction,
    adqc_local_circuit,
    adqc_program_circuit,
    batch_rotation_circuit,
    count_interactions,
    format_report,
    geometric_phase_circuit,
    measured_phase_circuit,
    minimal_control_circuit,
    standalone_circuit,
    swapcz_entangle_circuit,
    swapcz_local_circuit,
    toffoli_circuit,
)
from .engine import (
    Affine,
    Circuit,
    ControlledU,
    Fourier,
    GateSpec,
    LocalU,
    Measure,
    PauliX,
    PauliZ,
    PhaseR,
    RegisterLayout,
    SizeCapError,
    SplitMix64,
    StateVector,
    Sum,
    Swap,
    SwapCR,
    amp_index,
    apply_op,
    init_register,
    measure,
    product_state,
    reduced_purity,
    run,
    unindex,
)
from .fileio import ParseError, dumps_circuit, loads_circuit
from .oracle import (
    AncillaEntangledError,
    Branch,
    FidelityVerdict,
    branch_enumerate,
    circuit_unitary,
    embed_unitary,
    equal_up_to_global_phase,
    verify_construction,
)

__version__ = "0.1.0"
