"""Request/response models shared by the HTTP endpoints and the CLI.

Responses are fully deterministic: no timestamps, fixed field order, and
every report carries a provenance block echoing the resolved parameters
and the package defaults.
"""

from __future__ import annotations

from typing import Any, Literal, Union

from pydantic import BaseModel, Field, model_validator

DEFAULT_EPSILON = 1e-3
DEFAULT_TRIALS = 100_000
DEFAULT_SEED = 0
DEFAULT_MAX_N = 8

# Column order of the sweep CSV table (golden-tested).
SWEEP_COLUMNS = (
    "n", "L", "density", "rho", "epsilon", "R",
    "p_success", "expected_trials", "depth", "time_model",
)


class DataInput(BaseModel):
    """A raw data set: unsigned integers below 2**L."""

    values: list[int]
    L: int = Field(ge=1)

    @model_validator(mode="after")
    def _check_values(self) -> "DataInput":
        if not self.values:
            raise ValueError("values must be nonempty")
        limit = 1 << self.L
        for i, v in enumerate(self.values):
            if not 0 <= v < limit:
                raise ValueError(
                    f"value {v} at index {i} out of range [0, {limit}) for L={self.L}"
                )
        return self


class ScaledRequest(DataInput):
    """Adds the rotation-scale source: an error budget or an explicit R."""

    epsilon: float | None = Field(default=None, gt=0, lt=1)
    R: float | None = Field(default=None, gt=0)
    max_n: int = Field(default=DEFAULT_MAX_N, ge=1)

    @model_validator(mode="after")
    def _single_scale_source(self) -> "ScaledRequest":
        if self.epsilon is not None and self.R is not None:
            raise ValueError("give either epsilon or R, not both")
        return self


class EncodeRequest(ScaledRequest):
    mode: Literal["faithful", "oracle"] = "faithful"
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    postselect: bool = True
    include_circuit: bool = False


class SampleRequest(ScaledRequest):
    trials: int = Field(default=DEFAULT_TRIALS, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    resimulate: bool = False


class ResourcesRequest(ScaledRequest):
    include_circuit: bool = False


class AnalyzeRequest(ScaledRequest):
    pass


class SweepRequest(BaseModel):
    """Grid sweep over CPU width, error budget and data density family."""

    ns: list[int] = Field(min_length=1)
    epsilons: list[float] = Field(default=[DEFAULT_EPSILON], min_length=1)
    densities: list[Union[Literal["uniform", "onehot"], float]] = Field(
        default=["uniform"], min_length=1
    )
    L: int = Field(default=5, ge=1)
    value: int | None = Field(default=None, ge=1)
    mode: Literal["faithful", "oracle"] = "oracle"
    max_n: int = Field(default=DEFAULT_MAX_N, ge=1)
    jobs: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_grid(self) -> "SweepRequest":
        for n in self.ns:
            if n < 1:
                raise ValueError(f"n must be >= 1, got {n}")
        for eps in self.epsilons:
            if not 0 < eps < 1:
                raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
        for d in self.densities:
            if isinstance(d, float) and not 0 < d <= 1:
                raise ValueError(f"density fraction must lie in (0, 1], got {d}")
        if self.value is not None and self.value >= (1 << self.L):
            raise ValueError(f"value {self.value} out of range for L={self.L}")
        return self


class ResolvedParams(BaseModel):
    """Parameters actually used for the run, after defaulting."""

    R: float
    epsilon: float
    epsilon_bound: float
    mode: str
    seed: int | None = None
    postselect: bool | None = None
    trials: int | None = None
    resimulate: bool | None = None


class Defaults(BaseModel):
    epsilon: float = DEFAULT_EPSILON
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    max_n: int = DEFAULT_MAX_N


class Provenance(BaseModel):
    package: str
    version: str
    command: str
    parameters: ResolvedParams | None = None
    defaults: Defaults = Defaults()


class InputEcho(BaseModel):
    """The padded data set the run actually used."""

    n: int
    L: int
    c_max: int
    values: list[int]


class AnalysisBlock(BaseModel):
    rho: float
    epsilon_bound: float
    success_probability: float
    expected_trials: float
    max_relative_error: float
    success_bound: float
    time_model: float | None
    target_state: list[float]
    oracle_state: list[float]


class SimulationBlock(BaseModel):
    p_success: float
    ancilla_leakage: float
    prepared_state: list[float] | None


class FidelityBlock(BaseModel):
    oracle_vs_target: float
    prepared_vs_target: float | None = None
    prepared_vs_oracle: float | None = None


class ResourcesBlock(BaseModel):
    quantum_qubits: int
    classical_memory_bits: int
    gate_counts: dict[str, int]
    simulation_gate_total: int
    query_model_gate_total: int
    depth_total: int
    compression_depth: int


class EncodeResponse(BaseModel):
    provenance: Provenance
    input: InputEcho
    analysis: AnalysisBlock
    simulation: SimulationBlock | None
    fidelities: FidelityBlock
    resources: ResourcesBlock
    circuit_text: str | None = None
    warnings: list[str] = []


class TrialStatsBlock(BaseModel):
    trials: int
    successes: int
    empirical_p: float
    expected_trials: float | None
    seed: int


class SampleResponse(BaseModel):
    provenance: Provenance
    input: InputEcho
    analytic_p: float
    stats: TrialStatsBlock
    warnings: list[str] = []


class ResourcesResponse(BaseModel):
    provenance: Provenance
    input: InputEcho
    resources: ResourcesBlock
    circuit_text: str | None = None
    warnings: list[str] = []


class AnalyzeResponse(BaseModel):
    provenance: Provenance
    input: InputEcho
    analysis: AnalysisBlock
    warnings: list[str] = []


class SweepRow(BaseModel):
    n: int
    L: int
    density: str
    rho: float
    epsilon: float
    R: float
    p_success: float
    expected_trials: float
    depth: int
    time_model: float | None


class SweepResponse(BaseModel):
    provenance: Provenance
    rows: list[SweepRow]
    warnings: list[str] = []


class ErrorBody(BaseModel):
    """Uniform error payload for non-2xx responses."""

    error: str
    detail: str


def error_payload(code: str, exc: Exception) -> dict[str, Any]:
    return ErrorBody(error=code, detail=str(exc)).model_dump()
