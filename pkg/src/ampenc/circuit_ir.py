"""Gate-level intermediate representation.

A circuit is an ordered list of gates over a fixed register layout:
n CPU qubits, one flag qubit, n parity ancillas and n-1 compression
ancillas (3n qubits total, 2n beyond the CPU register). Gates may carry
a classical condition referencing one memory bit; a gate whose condition
is unsatisfied acts as the identity.

The module also provides static accounting (ASAP depth, gate counts,
memory footprint) and a stable line-oriented text serialization used by
golden-file tests and the ``--dump-circuit`` CLI flag.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .data_model import ClassicalMemory, DataSet
from .errors import InputDomainError

GATE_KINDS = ("H", "X", "CX", "CCX", "CRY", "RY")

_CONTROL_COUNT = {"H": 0, "X": 0, "RY": 0, "CX": 1, "CRY": 1, "CCX": 2}
_ANGLED = frozenset({"CRY", "RY"})

TEXT_FORMAT_VERSION = "ampenc-circuit v1"


@dataclass(frozen=True)
class RegisterLayout:
    """Contiguous qubit id assignment for a CPU register of width n.

    ids: cpu = [0, n), flag = n, parity = [n+1, 2n+1),
    compression = [2n+1, 3n). For n = 1 the compression block is empty
    and the single parity qubit doubles as the match qubit.
    """

    n: int
    cpu: tuple[int, ...]
    flag: int
    parity: tuple[int, ...]
    compression: tuple[int, ...]
    total_quantum: int

    @property
    def extra_qubits(self) -> int:
        """Qubits beyond the CPU register: always 2n."""
        return self.total_quantum - self.n


def layout_for(n: int) -> RegisterLayout:
    """Allocate the 3n-qubit layout for a CPU register of width n."""
    if n < 1:
        raise InputDomainError(f"CPU width must be >= 1, got {n}")
    return RegisterLayout(
        n=n,
        cpu=tuple(range(n)),
        flag=n,
        parity=tuple(range(n + 1, 2 * n + 1)),
        compression=tuple(range(2 * n + 1, 3 * n)),
        total_quantum=3 * n,
    )


@dataclass(frozen=True)
class ClassicalCondition:
    """Requirement that one memory bit holds a given value.

    ``role`` selects the index or value part of register ``register``;
    ``bit`` is the MSB-first position within that part.
    """

    register: int
    role: str  # "index" | "value"
    bit: int
    value: int

    def __post_init__(self) -> None:
        if self.role not in ("index", "value"):
            raise InputDomainError(f"unknown condition role {self.role!r}")
        if self.value not in (0, 1):
            raise InputDomainError(f"condition value must be 0 or 1, got {self.value}")


@dataclass(frozen=True)
class Gate:
    """One gate: kind, quantum controls, target, optional angle and condition."""

    kind: str
    quantum_controls: tuple[int, ...] = ()
    target: int = 0
    angle: float | None = None
    condition: ClassicalCondition | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise InputDomainError(f"unknown gate kind {self.kind!r}")
        if len(self.quantum_controls) != _CONTROL_COUNT[self.kind]:
            raise InputDomainError(
                f"{self.kind} takes {_CONTROL_COUNT[self.kind]} quantum "
                f"control(s), got {len(self.quantum_controls)}"
            )
        if self.target in self.quantum_controls:
            raise InputDomainError("target cannot also be a control")
        if len(set(self.quantum_controls)) != len(self.quantum_controls):
            raise InputDomainError("duplicate control qubit")
        if (self.angle is None) == (self.kind in _ANGLED):
            raise InputDomainError(f"angle is required iff kind is CRY/RY ({self.kind})")

    @property
    def support(self) -> tuple[int, ...]:
        """Quantum qubits the gate touches."""
        return (*self.quantum_controls, self.target)


def h(target: int) -> Gate:
    return Gate("H", (), target)


def x(target: int, condition: ClassicalCondition | None = None) -> Gate:
    return Gate("X", (), target, condition=condition)


def cx(control: int, target: int) -> Gate:
    return Gate("CX", (control,), target)


def ccx(control_a: int, control_b: int, target: int) -> Gate:
    return Gate("CCX", (control_a, control_b), target)


def ry(angle: float, target: int) -> Gate:
    return Gate("RY", (), target, angle=angle)


def cry(angle: float, control: int, target: int,
        condition: ClassicalCondition | None = None) -> Gate:
    return Gate("CRY", (control,), target, angle=angle, condition=condition)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over a layout, referencing a fixed classical memory.

    ``measured_qubit`` marks the final flag measurement; it is not a gate.
    """

    layout: RegisterLayout
    gates: tuple[Gate, ...]
    memory: ClassicalMemory
    measured_qubit: int | None = None

    def __post_init__(self) -> None:
        total = self.layout.total_quantum
        n_registers = len(self.memory.registers)
        for g in self.gates:
            for q in g.support:
                if not 0 <= q < total:
                    raise InputDomainError(f"qubit id {q} outside layout (0..{total - 1})")
            cond = g.condition
            if cond is not None:
                if not 0 <= cond.register < n_registers:
                    raise InputDomainError(
                        f"condition references register {cond.register}, "
                        f"memory has {n_registers}"
                    )
                reg = self.memory.registers[cond.register]
                width = len(reg.index_bits if cond.role == "index" else reg.value_bits)
                if not 0 <= cond.bit < width:
                    raise InputDomainError(
                        f"condition bit {cond.bit} outside {cond.role} part "
                        f"of width {width}"
                    )
        if self.measured_qubit is not None and not 0 <= self.measured_qubit < total:
            raise InputDomainError(f"measured qubit {self.measured_qubit} outside layout")


def gate_list_depth(gates: Iterable[Gate]) -> int:
    """ASAP depth of a bare gate list.

    Two gates share a layer iff their quantum supports are disjoint;
    classical conditions never conflict.
    """
    frontier: dict[int, int] = {}
    total = 0
    for g in gates:
        layer = 1 + max((frontier.get(q, 0) for q in g.support), default=0)
        for q in g.support:
            frontier[q] = layer
        if layer > total:
            total = layer
    return total


def depth(circuit: Circuit) -> int:
    """ASAP layer count of the circuit (measurement marker excluded)."""
    return gate_list_depth(circuit.gates)


def compression_tree_depth(n: int) -> int:
    """Layers needed to compress n parity qubits into one: ceil(log2 n)."""
    if n < 1:
        raise InputDomainError(f"CPU width must be >= 1, got {n}")
    return (n - 1).bit_length() if n >= 2 else 0


@dataclass(frozen=True)
class ResourceReport:
    """Static resource accounting for one compiled circuit.

    ``simulation_gate_total`` counts the sequential-over-k compiled gate
    list actually executed by the simulator. ``query_model_gate_total``
    is the single-query cost model n + L, where the whole register bank
    is touched by one physical memory query; the exact constants of both
    counts are artifact-defined.
    """

    quantum_qubits: int
    classical_memory_bits: int
    gate_counts: dict[str, int] = field(default_factory=dict)
    simulation_gate_total: int = 0
    query_model_gate_total: int = 0
    depth_total: int = 0
    compression_depth: int = 0


def resource_report(circuit: Circuit, data: DataSet) -> ResourceReport:
    """Count qubits, memory bits, gates and depth for a compiled circuit."""
    layout = circuit.layout
    counts = Counter(g.kind for g in circuit.gates)
    return ResourceReport(
        quantum_qubits=layout.total_quantum,
        classical_memory_bits=data.N * (data.n + data.L),
        gate_counts={kind: counts[kind] for kind in GATE_KINDS if counts[kind]},
        simulation_gate_total=len(circuit.gates),
        query_model_gate_total=data.n + data.L,
        depth_total=depth(circuit),
        compression_depth=compression_tree_depth(layout.n),
    )


# --- text serialization -----------------------------------------------------
#
# Line 1: format version. Line 2: "layout n=<n>". Then one gate per line:
#
#   KIND [angle] [controls...] target [? mem[K].ROLE[B]=V]
#
# and finally "measure <qubit>" if the circuit carries the marker. The
# angle is printed with repr() so the round trip is bit-exact.

_CONDITION_RE = re.compile(r"^mem\[(\d+)\]\.(index|value)\[(\d+)\]=([01])$")


def _gate_to_line(gate: Gate) -> str:
    parts = [gate.kind]
    if gate.angle is not None:
        parts.append(repr(gate.angle))
    parts.extend(str(q) for q in gate.quantum_controls)
    parts.append(str(gate.target))
    if gate.condition is not None:
        c = gate.condition
        parts.append("?")
        parts.append(f"mem[{c.register}].{c.role}[{c.bit}]={c.value}")
    return " ".join(parts)


def _gate_from_line(line: str) -> Gate:
    head, _, cond_text = line.partition(" ? ")
    tokens = head.split()
    kind = tokens[0]
    if kind not in GATE_KINDS:
        raise InputDomainError(f"unknown gate kind in line: {line!r}")
    rest = tokens[1:]
    angle = None
    if kind in _ANGLED:
        angle = float(rest[0])
        rest = rest[1:]
    expected = _CONTROL_COUNT[kind] + 1
    if len(rest) != expected:
        raise InputDomainError(f"malformed gate line: {line!r}")
    qubits = [int(t) for t in rest]
    condition = None
    if cond_text:
        m = _CONDITION_RE.match(cond_text.strip())
        if m is None:
            raise InputDomainError(f"malformed condition in line: {line!r}")
        condition = ClassicalCondition(
            register=int(m.group(1)),
            role=m.group(2),
            bit=int(m.group(3)),
            value=int(m.group(4)),
        )
    return Gate(kind, tuple(qubits[:-1]), qubits[-1], angle=angle, condition=condition)


def to_text(circuit: Circuit) -> str:
    """Serialize a circuit to the stable line-oriented format."""
    lines = [TEXT_FORMAT_VERSION, f"layout n={circuit.layout.n}"]
    lines.extend(_gate_to_line(g) for g in circuit.gates)
    if circuit.measured_qubit is not None:
        lines.append(f"measure {circuit.measured_qubit}")
    return "\n".join(lines) + "\n"


def from_text(text: str, memory: ClassicalMemory) -> Circuit:
    """Parse the text format back into a circuit over the given memory."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines or lines[0] != TEXT_FORMAT_VERSION:
        raise InputDomainError("missing or unsupported circuit format header")
    m = re.match(r"^layout n=(\d+)$", lines[1]) if len(lines) > 1 else None
    if m is None:
        raise InputDomainError("missing layout line")
    layout = layout_for(int(m.group(1)))
    gates = []
    measured = None
    for line in lines[2:]:
        if line.startswith("measure "):
            measured = int(line.split()[1])
            continue
        gates.append(_gate_from_line(line))
    return Circuit(layout=layout, gates=tuple(gates), memory=memory,
                   measured_qubit=measured)
