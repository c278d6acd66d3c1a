"""Classical side of the protocol: fixed-point values, padded data sets,
the read-only memory register bank, and the run parameters (rotation
scale R, error budget epsilon).

Conventions fixed here and relied on everywhere else:

* values are unsigned L-bit integers, bit ``l`` (l = 0 .. L-1) carries
  weight ``2**(L-1-l)`` (most significant bit first);
* a data set is always padded with zeros to ``2**n`` entries, with
  ``n = ceil(log2(max(len, 2)))``, so there is at least one CPU qubit;
* memory register ``k`` stores the n index bits of ``k`` followed by the
  L value bits of ``c_k``, and never changes during a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AllZeroDataError, InputDomainError

MODES = ("faithful", "oracle")


@dataclass(frozen=True)
class FixedPointValue:
    """Unsigned integer together with its bit width.

    Satisfies ``raw == sum(bit(l) * 2**(L-1-l) for l in range(L))``.
    """

    raw: int
    L: int

    def __post_init__(self) -> None:
        if self.L < 1:
            raise InputDomainError(f"bit width must be >= 1, got {self.L}")
        if not 0 <= self.raw < (1 << self.L):
            raise InputDomainError(
                f"value {self.raw} out of range for {self.L} bits"
            )

    @property
    def bits(self) -> str:
        """MSB-first bit string of length L."""
        return format(self.raw, f"0{self.L}b")

    def bit(self, l: int) -> int:
        """Bit of weight ``2**(L-1-l)``."""
        if not 0 <= l < self.L:
            raise InputDomainError(f"bit position {l} out of range")
        return (self.raw >> (self.L - 1 - l)) & 1


def encode_value(c: int, L: int) -> FixedPointValue:
    """Encode an unsigned integer as an L-bit fixed-point value."""
    return FixedPointValue(int(c), int(L))


def decode_bits(bits: str) -> int:
    """Inverse of :attr:`FixedPointValue.bits`."""
    if not bits or any(b not in "01" for b in bits):
        raise InputDomainError(f"not a bit string: {bits!r}")
    return int(bits, 2)


@dataclass(frozen=True)
class DataSet:
    """A zero-padded data set of ``2**n`` L-bit values.

    ``c_max`` is the largest stored value; padding never changes it.
    Construct through :func:`pad_to_power_of_two`.
    """

    values: tuple[FixedPointValue, ...]
    L: int
    n: int
    c_max: int

    def __post_init__(self) -> None:
        if len(self.values) != 1 << self.n:
            raise InputDomainError(
                f"expected {1 << self.n} values for n={self.n}, "
                f"got {len(self.values)}"
            )
        if any(v.L != self.L for v in self.values):
            raise InputDomainError("all values must share the same bit width")
        if self.c_max != max(v.raw for v in self.values):
            raise InputDomainError("c_max does not match the stored values")

    @property
    def N(self) -> int:
        """Number of entries after padding, ``2**n``."""
        return 1 << self.n

    def raw(self) -> tuple[int, ...]:
        return tuple(v.raw for v in self.values)

    def as_array(self) -> np.ndarray:
        """Values as a float array, for the analytic formulas."""
        return np.array([v.raw for v in self.values], dtype=np.float64)


def pad_to_power_of_two(values: Sequence[int], L: int) -> DataSet:
    """Pad a nonempty list of L-bit integers with zeros to ``2**n`` entries.

    ``n = ceil(log2(max(len, 2)))``; a singleton list is padded to two
    entries so the CPU register has at least one qubit.
    """
    if len(values) == 0:
        raise InputDomainError("data set must contain at least one value")
    encoded = [encode_value(v, L) for v in values]
    n = max(1, (len(encoded) - 1).bit_length())
    padding = (1 << n) - len(encoded)
    encoded.extend(FixedPointValue(0, L) for _ in range(padding))
    return DataSet(
        values=tuple(encoded),
        L=L,
        n=n,
        c_max=max(v.raw for v in encoded),
    )


@dataclass(frozen=True)
class MemoryRegister:
    """One classical memory register: index bits of k, then value bits of c_k."""

    index_bits: str
    value_bits: str


@dataclass(frozen=True)
class ClassicalMemory:
    """The full register bank, immutable for the lifetime of a run."""

    registers: tuple[MemoryRegister, ...]

    def bit(self, register: int, role: str, position: int) -> int:
        """Read one memory bit; ``role`` is ``"index"`` or ``"value"``."""
        reg = self.registers[register]
        bits = reg.index_bits if role == "index" else reg.value_bits
        return 1 if bits[position] == "1" else 0


def build_memory(data: DataSet) -> ClassicalMemory:
    """Lay the data set out as ``2**n`` registers of n+L classical bits."""
    registers = tuple(
        MemoryRegister(
            index_bits=format(k, f"0{data.n}b"),
            value_bits=v.bits,
        )
        for k, v in enumerate(data.values)
    )
    return ClassicalMemory(registers=registers)


def choose_rotation_scale(c_max: int, epsilon: float) -> float:
    """Smallest rotation scale keeping every relative amplitude error <= epsilon.

    Returns ``c_max / sqrt(6 * epsilon)``; any larger R also satisfies the
    error budget but lowers the success probability.
    """
    if c_max == 0:
        raise AllZeroDataError("all-zero data set: no valid rotation scale")
    if c_max < 0:
        raise InputDomainError(f"c_max must be nonnegative, got {c_max}")
    if not 0 < epsilon < 1:
        raise InputDomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    return c_max / math.sqrt(6.0 * epsilon)


def implied_error_budget(c_max: int, R: float) -> float:
    """Tightest epsilon guaranteed by a given rotation scale, ``(c_max/R)**2 / 6``.

    Inverse of :func:`choose_rotation_scale`; exceeds 1 in the wraparound
    regime R < c_max, where the budget interpretation breaks down.
    """
    if c_max == 0:
        raise AllZeroDataError("all-zero data set: no valid rotation scale")
    if R <= 0:
        raise InputDomainError(f"rotation scale must be positive, got {R}")
    return (c_max / R) ** 2 / 6.0


def density(data: DataSet) -> float:
    """Non-sparsity measure ``(1/2**n) * sum_k (c_k / c_max)**2``.

    Equals 1 exactly when all values are equal and nonzero, and
    ``2**-n`` for a one-hot data set.
    """
    if data.c_max == 0:
        raise AllZeroDataError("all-zero data set: density undefined")
    c = data.as_array()
    return float(np.mean((c / data.c_max) ** 2))


@dataclass(frozen=True)
class ProtocolParams:
    """Run parameters: rotation scale, error budget, execution mode, seed."""

    R: float
    epsilon: float
    mode: str = "faithful"
    postselect: bool = True
    seed: int = 0

    def __post_init__(self) -> None:
        if self.R <= 0:
            raise InputDomainError(f"rotation scale must be positive, got {self.R}")
        if not 0 < self.epsilon < 1:
            raise InputDomainError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.mode not in MODES:
            raise InputDomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.seed < 0:
            raise InputDomainError(f"seed must be nonnegative, got {self.seed}")

    @classmethod
    def from_error_budget(cls, data: DataSet, epsilon: float, **kwargs) -> "ProtocolParams":
        """Auto-select R at the equality point of the error bound."""
        return cls(R=choose_rotation_scale(data.c_max, epsilon), epsilon=epsilon, **kwargs)
