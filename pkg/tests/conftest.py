"""Shared test helpers: random instances and a reference gate kernel."""

import numpy as np
import pytest

from ampenc import pad_to_power_of_two

GATE_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
GATE_X = np.array([[0, 1], [1, 0]], dtype=complex)


def rotation_matrix(angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def naive_apply_gate(vec, gate, total, memory=None):
    """Index-by-index reference gate application, independent of the
    strided kernel in ampenc.simulator."""
    if gate.condition is not None:
        cond = gate.condition
        if memory.bit(cond.register, cond.role, cond.bit) != cond.value:
            return vec.copy()
    if gate.kind == "H":
        m = GATE_H
    elif gate.kind in ("X", "CX", "CCX"):
        m = GATE_X
    else:
        m = rotation_matrix(gate.angle)
    out = vec.copy()
    for i in range(1 << total):
        if (i >> gate.target) & 1:
            continue
        if any(not (i >> c) & 1 for c in gate.quantum_controls):
            continue
        j = i | (1 << gate.target)
        a0, a1 = vec[i], vec[j]
        out[i] = m[0, 0] * a0 + m[0, 1] * a1
        out[j] = m[1, 0] * a0 + m[1, 1] * a1
    return out


def random_state(rng, total: int) -> np.ndarray:
    vec = rng.standard_normal(1 << total) + 1j * rng.standard_normal(1 << total)
    return vec / np.linalg.norm(vec)


def random_instance(rng, n_min=1, n_max=5, L_max=8, r_lo=1.0, r_hi=100.0):
    """Random padded data set (at least one nonzero value) and a rotation
    scale drawn uniformly from [r_lo * c_max, r_hi * c_max]."""
    n = int(rng.integers(n_min, n_max + 1))
    L = int(rng.integers(1, L_max + 1))
    values = rng.integers(0, 1 << L, size=1 << n)
    if not values.any():
        values[int(rng.integers(0, 1 << n))] = (1 << L) - 1
    data = pad_to_power_of_two([int(v) for v in values], L)
    R = float(rng.uniform(r_lo, r_hi) * data.c_max)
    return data, R


@pytest.fixture
def make_instance():
    return random_instance
