"""Exact dense state-vector execution of compiled circuits.

Basis-index convention: qubit id q contributes the bit of weight 2**q to
the amplitude index. CPU qubit m (id m) holds bit 2**(n-1-m) of the
encoded integer k, so the CPU ket |k> sits at the bit-reversed flat
index within the CPU block; :func:`basis_index` and
:func:`cpu_permutation` make the mapping explicit.

Gate kernels update disjoint amplitude pairs with numpy strided views,
so results are bitwise identical to a sequential sweep regardless of how
the backend parallelizes the arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit_ir import Gate, RegisterLayout
from .compiler import CompiledProtocol
from .data_model import ClassicalMemory
from .errors import (
    AncillaEntanglementError,
    InputDomainError,
    ZeroSuccessProbabilityError,
)

# Tolerances used throughout simulation and verification.
UNITARITY_TOL = 1e-12   # norm drift and ancilla leakage
ORACLE_MATCH_TOL = 1e-10  # gate-level state vs analytic oracle
ZERO_PROBABILITY_TOL = 1e-15  # below this, post-selection is impossible

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass
class StateVector:
    """Dense complex amplitudes over the 3n quantum qubits of a layout."""

    amplitudes: np.ndarray
    layout: RegisterLayout

    @classmethod
    def zero(cls, layout: RegisterLayout) -> "StateVector":
        """The all-zeros computational basis state |0...0>."""
        amplitudes = np.zeros(1 << layout.total_quantum, dtype=np.complex128)
        amplitudes[0] = 1.0
        return cls(amplitudes=amplitudes, layout=layout)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def _grid(self) -> np.ndarray:
        # axis total-1-q holds qubit q (first axis = highest qubit id)
        return self.amplitudes.reshape((2,) * self.layout.total_quantum)


def basis_index(
    layout: RegisterLayout,
    k: int = 0,
    flag: int = 0,
    parity: int = 0,
    compression: int = 0,
) -> int:
    """Flat amplitude index of |k> on the CPU with the given ancilla bits.

    ``parity`` / ``compression`` are little integers whose bit j sets the
    j-th qubit of the respective block.
    """
    n = layout.n
    index = flag << layout.flag
    for m in range(n):
        index |= ((k >> (n - 1 - m)) & 1) << m
    for j, q in enumerate(layout.parity):
        index |= ((parity >> j) & 1) << q
    for j, q in enumerate(layout.compression):
        index |= ((compression >> j) & 1) << q
    return index


def cpu_permutation(n: int) -> np.ndarray:
    """perm[k] = flat index of CPU ket |k> within the 2**n CPU block."""
    perm = np.empty(1 << n, dtype=np.intp)
    for k in range(1 << n):
        perm[k] = int(format(k, f"0{n}b")[::-1], 2)
    return perm


def apply_gate(state: StateVector, gate: Gate, memory: ClassicalMemory) -> StateVector:
    """Apply one gate in place; a gate with an unsatisfied condition is a no-op."""
    cond = gate.condition
    if cond is not None and memory.bit(cond.register, cond.role, cond.bit) != cond.value:
        return state

    total = state.layout.total_quantum
    grid = state._grid()
    index: list = [slice(None)] * total
    for ctl in gate.quantum_controls:
        index[total - 1 - ctl] = 1
    target_axis = total - 1 - gate.target
    index[target_axis] = 0
    lo = grid[tuple(index)]
    index[target_axis] = 1
    hi = grid[tuple(index)]

    kind = gate.kind
    if kind in ("X", "CX", "CCX"):
        swapped = lo.copy()
        lo[...] = hi
        hi[...] = swapped
    elif kind == "H":
        new_lo = (lo + hi) * _INV_SQRT2
        hi[...] = (lo - hi) * _INV_SQRT2
        lo[...] = new_lo
    else:  # RY / CRY, half-angle convention: Ry(a)|0> = cos(a/2)|0> + sin(a/2)|1>
        c = math.cos(gate.angle / 2.0)
        s = math.sin(gate.angle / 2.0)
        new_lo = c * lo - s * hi
        hi[...] = s * lo + c * hi
        lo[...] = new_lo
    return state


def run_blocks(protocol: CompiledProtocol):
    """Yield (k, state) after the initializer plus each completed k-block.

    The yielded state is live and shared; callers must treat it as
    read-only between iterations.
    """
    state = StateVector.zero(protocol.circuit.layout)
    memory = protocol.circuit.memory
    for gate in protocol.init_gates:
        apply_gate(state, gate, memory)
    for block in protocol.blocks:
        for gate in block.gates:
            apply_gate(state, gate, memory)
        yield block.k, state


def run(protocol: CompiledProtocol) -> StateVector:
    """Execute the full circuit from |0...0>; returns the pre-measurement state."""
    state = StateVector.zero(protocol.circuit.layout)
    for _, state in run_blocks(protocol):
        pass
    return state


def ancilla_leakage(state: StateVector) -> float:
    """Probability weight outside the parity/compression |0...0> subspace."""
    layout = state.layout
    grid = state._grid()
    n_ancilla = len(layout.parity) + len(layout.compression)
    # ancillas occupy the highest qubit ids, hence the leading axes
    block = grid[(0,) * n_ancilla]
    total = float(np.sum(np.abs(state.amplitudes) ** 2))
    kept = float(np.sum(np.abs(block) ** 2))
    return max(total - kept, 0.0)


def flag_probability(state: StateVector) -> float:
    """Total probability of measuring the flag qubit in |1>."""
    layout = state.layout
    grid = state._grid()
    index: list = [slice(None)] * layout.total_quantum
    index[layout.total_quantum - 1 - layout.flag] = 1
    return float(np.sum(np.abs(grid[tuple(index)]) ** 2))


def measure_flag_postselect(state: StateVector) -> tuple[np.ndarray, float]:
    """Project onto flag = 1 and renormalize the CPU register.

    Returns (cpu_state, p_success) with cpu_state[k] the amplitude of
    |k>. Raises if the ancillas are entangled or the success outcome has
    no weight.
    """
    layout = state.layout
    leakage = ancilla_leakage(state)
    if leakage >= UNITARITY_TOL:
        raise AncillaEntanglementError(
            f"ancillae entangled: leakage {leakage:.3e} >= {UNITARITY_TOL:.0e}"
        )
    grid = state._grid()
    n_ancilla = len(layout.parity) + len(layout.compression)
    # within the ancilla |0..0> block the leading axis is the flag qubit,
    # the remaining axes are CPU qubits in descending id order
    flag_one = grid[(0,) * n_ancilla][1]
    p_success = float(np.sum(np.abs(flag_one) ** 2))
    if p_success < ZERO_PROBABILITY_TOL:
        raise ZeroSuccessProbabilityError(
            f"zero success probability ({p_success:.3e})"
        )
    cpu_state = flag_one.reshape(-1)[cpu_permutation(layout.n)] / math.sqrt(p_success)
    return np.ascontiguousarray(cpu_state), p_success


@dataclass(frozen=True)
class TrialStats:
    """Outcome tally of seeded repeat-until-success sampling."""

    trials: int
    successes: int
    empirical_p: float
    expected_trials: float | None
    seed: int


def sample_trials(
    protocol: CompiledProtocol,
    trials: int,
    seed: int,
    resimulate: bool = False,
) -> TrialStats:
    """Draw flag outcomes for ``trials`` independent protocol runs.

    Trial i consumes the i-th uniform variate of the PCG64 stream seeded
    with ``seed``, so results do not depend on batching. By default the
    analytic success probability of one simulation is reused across
    trials (they are i.i.d.); ``resimulate`` forces a full state-vector
    run per trial instead.
    """
    if trials < 1:
        raise InputDomainError(f"trials must be >= 1, got {trials}")
    draws = np.random.default_rng(seed).random(trials)
    if resimulate:
        successes = 0
        for i in range(trials):
            p = flag_probability(run(protocol))
            if draws[i] < p:
                successes += 1
    else:
        p = flag_probability(run(protocol))
        successes = int(np.count_nonzero(draws < p))
    empirical_p = successes / trials
    expected = trials / successes if successes > 0 else None
    return TrialStats(
        trials=trials,
        successes=successes,
        empirical_p=empirical_p,
        expected_trials=expected,
        seed=seed,
    )
