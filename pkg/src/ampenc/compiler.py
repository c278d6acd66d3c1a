"""Compiler from a data set to the full encoding circuit.

The emitted circuit is, in order:

1. initializer: H on every CPU qubit (uniform superposition over |k>);
2. for every register k, one block of
   a. parity stage: CX(cpu_m -> parity_m) followed by an X on parity_m
      conditioned on index bit m of register k being 0, so that
      parity_m = 1 iff the CPU qubit agrees with the register index bit;
   b. compression stage: a Toffoli tree folding the n parity qubits into
      one match qubit (n-1 Toffolis over ceil(log2 n) layers);
   c. flag rotations: for every set value bit l of c_k, a CRY by
      2**(L-l)/R on the flag controlled by the match qubit, so the |k>
      branch accumulates a total flag rotation of 2*c_k/R;
   d. the exact mirror of (b) then (a), returning all ancillas to |0>;
3. a measurement marker on the flag qubit.

Blocks for different k touch the flag in disjoint CPU branches, so they
commute and the sequential emission order is arbitrary. One physical
memory query suffices on the envisioned hardware; the enumeration over k
here is an artifact of gate-level simulation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .circuit_ir import (
    Circuit,
    ClassicalCondition,
    Gate,
    RegisterLayout,
    ccx,
    cry,
    cx,
    h,
    layout_for,
    x,
)
from .data_model import ClassicalMemory, DataSet, ProtocolParams, build_memory
from .errors import ConfigurationError


def build_initializer(layout: RegisterLayout) -> tuple[Gate, ...]:
    """H on every CPU qubit; flag and ancillas stay in |0>."""
    return tuple(h(q) for q in layout.cpu)


def match_qubit(layout: RegisterLayout) -> int:
    """Qubit holding the full CPU/index matching condition.

    The root of the compression tree for n >= 2; the lone parity qubit
    itself for n = 1.
    """
    return layout.compression[-1] if layout.n >= 2 else layout.parity[0]


def _parity_stage(k: int, layout: RegisterLayout) -> tuple[Gate, ...]:
    gates: list[Gate] = []
    for m, (cpu_q, parity_q) in enumerate(zip(layout.cpu, layout.parity)):
        gates.append(cx(cpu_q, parity_q))
        # parity_m = NOT(cpu_m XOR k_m): flip only where the index bit is 0
        gates.append(x(parity_q, condition=ClassicalCondition(k, "index", m, 0)))
    return tuple(gates)


def _compression_tree(
    controls: Sequence[int], ancillas: Sequence[int]
) -> tuple[tuple[Gate, ...], int]:
    """Fold controls pairwise with Toffolis; returns (gates, root qubit).

    Each layer halves the control count, promoting an unpaired qubit
    unchanged; len(controls) - 1 fresh ancillas are consumed in total.
    """
    gates: list[Gate] = []
    level = list(controls)
    next_ancilla = 0
    while len(level) > 1:
        folded: list[int] = []
        for i in range(0, len(level) - 1, 2):
            if next_ancilla >= len(ancillas):
                raise ConfigurationError(
                    f"need {len(controls) - 1} ancillas to compress "
                    f"{len(controls)} controls, have {len(ancillas)}"
                )
            anc = ancillas[next_ancilla]
            next_ancilla += 1
            gates.append(ccx(level[i], level[i + 1], anc))
            folded.append(anc)
        if len(level) % 2:
            folded.append(level[-1])
        level = folded
    return tuple(gates), level[0]


def build_match_compute(k: int, layout: RegisterLayout) -> tuple[Gate, ...]:
    """Parity stage plus compression tree for register k.

    Afterwards the match qubit is 1 exactly in the CPU branch |k>.
    """
    tree, _ = _compression_tree(layout.parity, layout.compression)
    return _parity_stage(k, layout) + tree


def build_match_uncompute(k: int, layout: RegisterLayout) -> tuple[Gate, ...]:
    """Exact mirror of :func:`build_match_compute`; all gates are involutions."""
    return tuple(reversed(build_match_compute(k, layout)))


def build_controlled_rotations(
    k: int, data: DataSet, params: ProtocolParams, layout: RegisterLayout
) -> tuple[Gate, ...]:
    """Flag rotations for register k, one CRY per set value bit.

    Bit l contributes the angle ``2**(L-l) / R``; the set bits sum to a
    total rotation of ``2*c_k/R``, i.e. flag amplitudes
    (cos(c_k/R), sin(c_k/R)) in the matching branch. Unset bits emit
    nothing (they would be identities).
    """
    root = match_qubit(layout)
    value = data.values[k]
    gates: list[Gate] = []
    for l in range(data.L):
        if value.bit(l):
            angle = 2.0 ** (data.L - l) / params.R
            gates.append(
                cry(angle, root, layout.flag,
                    condition=ClassicalCondition(k, "value", l, 1))
            )
    return tuple(gates)


def build_multi_controlled(
    controls: Sequence[int], operation: Gate, ancillas: Sequence[int]
) -> tuple[Gate, ...]:
    """Apply ``operation`` conditioned on all K controls being |1>.

    Compression tree (K-1 Toffolis, ceil(log2 K) layers), the operation
    with the tree root as an added control, then the mirrored tree. For
    K = 1 the operation is controlled directly and no ancilla is used.
    """
    if len(controls) == 0:
        raise ConfigurationError("at least one control qubit is required")
    if len(ancillas) < len(controls) - 1:
        raise ConfigurationError(
            f"need {len(controls) - 1} ancillas for {len(controls)} controls, "
            f"have {len(ancillas)}"
        )
    tree, root = _compression_tree(controls, ancillas)
    return tree + (_with_added_control(operation, root),) + tuple(reversed(tree))


def _with_added_control(gate: Gate, control: int) -> Gate:
    promoted = {"X": "CX", "CX": "CCX", "RY": "CRY"}.get(gate.kind)
    if promoted is None:
        raise ConfigurationError(f"cannot add a quantum control to {gate.kind}")
    return Gate(
        promoted,
        (control, *gate.quantum_controls),
        gate.target,
        angle=gate.angle,
        condition=gate.condition,
    )


@dataclass(frozen=True)
class KBlock:
    """The compiled gates handling one memory register."""

    k: int
    parity_stage: tuple[Gate, ...]
    compression_stage: tuple[Gate, ...]
    rotations: tuple[Gate, ...]
    uncompression_stage: tuple[Gate, ...]
    unparity_stage: tuple[Gate, ...]

    @property
    def gates(self) -> tuple[Gate, ...]:
        return (
            self.parity_stage
            + self.compression_stage
            + self.rotations
            + self.uncompression_stage
            + self.unparity_stage
        )


@dataclass(frozen=True)
class CompiledProtocol:
    """Compiled circuit plus the structure the tests and reports rely on.

    ``angle_table`` maps (k, l) to the CRY angle emitted for set bit l of
    register k; its row sums satisfy sum_l = 2*c_k/R.
    """

    circuit: Circuit
    params: ProtocolParams
    data: DataSet
    angle_table: dict[tuple[int, int], float]
    init_gates: tuple[Gate, ...]
    blocks: tuple[KBlock, ...]


def compile_protocol(data: DataSet, params: ProtocolParams) -> CompiledProtocol:
    """Emit the full circuit: init, one block per register, flag marker."""
    layout = layout_for(data.n)
    memory = build_memory(data)
    init = build_initializer(layout)
    tree, _ = _compression_tree(layout.parity, layout.compression)

    gates: list[Gate] = list(init)
    blocks: list[KBlock] = []
    angle_table: dict[tuple[int, int], float] = {}
    for k in range(data.N):
        parity = _parity_stage(k, layout)
        rotations = build_controlled_rotations(k, data, params, layout)
        for g in rotations:
            angle_table[(k, g.condition.bit)] = g.angle
        block = KBlock(
            k=k,
            parity_stage=parity,
            compression_stage=tree,
            rotations=rotations,
            uncompression_stage=tuple(reversed(tree)),
            unparity_stage=tuple(reversed(parity)),
        )
        blocks.append(block)
        gates.extend(block.gates)

    circuit = Circuit(
        layout=layout,
        gates=tuple(gates),
        memory=memory,
        measured_qubit=layout.flag,
    )
    return CompiledProtocol(
        circuit=circuit,
        params=params,
        data=data,
        angle_table=angle_table,
        init_gates=init,
        blocks=tuple(blocks),
    )
