"""Amplitude-encoding state preparation toolkit.

Compiles a classical data set into a flag-rotation circuit over a
3n-qubit register, simulates it exactly, post-selects on the flag
qubit, and verifies the prepared amplitudes and all analytic
predictions (success probability, error bounds, density scaling,
resource counts).
"""

__version__ = "0.1.0"

from .analysis import (
    EncodingReport,
    encoding_report,
    estimate_norm_from_success,
    fidelity,
    ideal_target_state,
    max_abs_relative_error,
    oracle_final_state,
    relative_error,
    success_bound,
    success_probability,
    time_model,
)
from .circuit_ir import (
    Circuit,
    ClassicalCondition,
    Gate,
    RegisterLayout,
    ResourceReport,
    compression_tree_depth,
    depth,
    from_text,
    gate_list_depth,
    layout_for,
    resource_report,
    to_text,
)
from .compiler import (
    CompiledProtocol,
    KBlock,
    build_controlled_rotations,
    build_initializer,
    build_match_compute,
    build_match_uncompute,
    build_multi_controlled,
    compile_protocol,
    match_qubit,
)
from .data_model import (
    ClassicalMemory,
    DataSet,
    FixedPointValue,
    MemoryRegister,
    ProtocolParams,
    build_memory,
    choose_rotation_scale,
    decode_bits,
    density,
    encode_value,
    implied_error_budget,
    pad_to_power_of_two,
)
from .simulator import (
    StateVector,
    TrialStats,
    ancilla_leakage,
    apply_gate,
    basis_index,
    cpu_permutation,
    flag_probability,
    measure_flag_postselect,
    run,
    run_blocks,
    sample_trials,
)

__all__ = [name for name in dir() if not name.startswith("_")]
