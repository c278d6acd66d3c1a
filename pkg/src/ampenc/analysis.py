"""Analytic oracles and quantitative predictions.

Everything here is closed-form and independent of the gate-level
simulator, so the two can cross-check each other. All formulas use the
exact sine, never its small-angle series, and therefore stay valid in
the wraparound regime R < c_max.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data_model import DataSet, density, implied_error_budget
from .errors import AllZeroDataError, InputDomainError, ZeroSuccessProbabilityError


def ideal_target_state(data: DataSet) -> np.ndarray:
    """The desired CPU state: amplitudes c_k / sqrt(sum c_j**2)."""
    if data.c_max == 0:
        raise AllZeroDataError("all-zero data set: target state undefined")
    c = data.as_array()
    return c / np.linalg.norm(c)


def oracle_final_state(data: DataSet, R: float) -> np.ndarray:
    """The exactly prepared CPU state: normalized sin(c_k / R).

    No small-angle approximation; for c_k/R > pi the sine wraps around
    and the amplitude can vanish or change sign.
    """
    if R <= 0:
        raise InputDomainError(f"rotation scale must be positive, got {R}")
    sines = np.sin(data.as_array() / R)
    norm = np.linalg.norm(sines)
    if norm == 0.0:
        raise ZeroSuccessProbabilityError("zero success probability: all sines vanish")
    return sines / norm


def success_probability(data: DataSet, R: float) -> float:
    """Probability of finding the flag in |1>: (1/2**n) sum_k sin(c_k/R)**2."""
    if R <= 0:
        raise InputDomainError(f"rotation scale must be positive, got {R}")
    return float(np.mean(np.sin(data.as_array() / R) ** 2))


def relative_error(c: float, R: float) -> float:
    """Relative amplitude error sin(x)/x - 1 at x = c/R; 0 at c = 0.

    Expands to -(x**2)/6 + O(x**4); nonpositive for 0 <= x <= pi.
    """
    if R <= 0:
        raise InputDomainError(f"rotation scale must be positive, got {R}")
    if c < 0:
        raise InputDomainError(f"value must be nonnegative, got {c}")
    if c == 0:
        return 0.0
    x = c / R
    return math.sin(x) / x - 1.0


def max_abs_relative_error(data: DataSet, R: float) -> float:
    """Largest |relative_error| over the nonzero values of the data set."""
    return max(
        (abs(relative_error(v, R)) for v in data.raw() if v > 0),
        default=0.0,
    )


def success_bound(data: DataSet, epsilon: float) -> float:
    """Upper bound 6 * epsilon * rho on the success probability.

    Valid whenever R >= c_max / sqrt(6 epsilon), i.e. whenever the error
    budget epsilon is respected.
    """
    if epsilon <= 0:
        raise InputDomainError(f"epsilon must be positive, got {epsilon}")
    return 6.0 * epsilon * density(data)


def time_model(n: int, rho: float, epsilon: float) -> float:
    """Dimensionless expected-time index log2(n) / (rho * epsilon).

    Proportionality model with the constant absorbed; defined for n >= 2.
    """
    if n < 2:
        raise InputDomainError(f"time model requires n >= 2, got {n}")
    if rho <= 0 or epsilon <= 0:
        raise InputDomainError("rho and epsilon must be positive")
    return math.log2(n) / (rho * epsilon)


def estimate_norm_from_success(p_hat: float, n: int, R: float) -> float:
    """Estimate sum_k c_k**2 from a measured success probability.

    Small-angle inversion p ~ (1/2**n) sum (c_k/R)**2, hence the
    estimate p_hat * 2**n * R**2; a one-sided underestimate since
    sin(x) <= x.
    """
    if not 0.0 <= p_hat <= 1.0:
        raise InputDomainError(f"p_hat must lie in [0, 1], got {p_hat}")
    if R <= 0:
        raise InputDomainError(f"rotation scale must be positive, got {R}")
    return p_hat * (1 << n) * R * R


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Squared overlap |<a|b>|**2 of two unit vectors."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise InputDomainError(f"length mismatch: {a.shape} vs {b.shape}")
    return float(np.abs(np.vdot(a, b)) ** 2)


@dataclass(frozen=True)
class EncodingReport:
    """Analytic summary of one encoding instance.

    ``epsilon_bound`` is the error budget implied by the actual R, i.e.
    (c_max/R)**2 / 6; ``max_relative_error`` is the largest observed
    |sin(x)/x - 1|; ``time_model`` is None for n = 1, where the
    log-depth model is not defined.
    """

    target_state: np.ndarray
    oracle_state: np.ndarray
    p_success: float
    rho: float
    epsilon_bound: float
    max_relative_error: float
    fidelity_prepared_vs_target: float
    expected_trials: float
    time_model: float | None


def encoding_report(
    data: DataSet, R: float, prepared_state: np.ndarray | None = None
) -> EncodingReport:
    """Assemble the analytic report; ``prepared_state`` defaults to the oracle."""
    target = ideal_target_state(data)
    oracle = oracle_final_state(data, R)
    p = success_probability(data, R)
    rho = density(data)
    eps_bound = implied_error_budget(data.c_max, R)
    prepared = oracle if prepared_state is None else np.asarray(prepared_state)
    return EncodingReport(
        target_state=target,
        oracle_state=oracle,
        p_success=p,
        rho=rho,
        epsilon_bound=eps_bound,
        max_relative_error=max_abs_relative_error(data, R),
        fidelity_prepared_vs_target=fidelity(prepared, target),
        expected_trials=1.0 / p,
        time_model=time_model(data.n, rho, eps_bound) if data.n >= 2 else None,
    )
