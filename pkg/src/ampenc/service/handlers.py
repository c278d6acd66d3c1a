"""Command handlers: one implementation behind both the HTTP API and the CLI.

Each handler takes a validated request model and returns a response
model; domain failures surface as :mod:`ampenc.errors` exceptions, which
the app maps to HTTP statuses and the CLI maps to exit codes.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .. import __version__, analysis, circuit_ir, compiler, simulator
from ..data_model import (
    DataSet,
    ProtocolParams,
    choose_rotation_scale,
    implied_error_budget,
    pad_to_power_of_two,
)
from ..errors import InputDomainError
from . import schemas
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    EncodeRequest,
    EncodeResponse,
    Provenance,
    ResolvedParams,
    ResourcesRequest,
    ResourcesResponse,
    SampleRequest,
    SampleResponse,
    SweepRequest,
    SweepResponse,
    SweepRow,
)


def _provenance(command: str, params: ResolvedParams | None) -> Provenance:
    return Provenance(
        package="ampenc",
        version=__version__,
        command=command,
        parameters=params,
    )


def _dataset(req: schemas.DataInput, max_n: int | None = None) -> DataSet:
    data = pad_to_power_of_two(req.values, req.L)
    if max_n is not None and data.n > max_n:
        raise InputDomainError(
            f"n={data.n} exceeds the configured maximum {max_n}; "
            f"raise max_n to allow larger instances"
        )
    return data


def _resolve_scale(data: DataSet, req: schemas.ScaledRequest) -> tuple[float, float, list[str]]:
    """Returns (R, epsilon, warnings); exactly one of epsilon/R is the source."""
    warnings: list[str] = []
    if req.R is not None:
        R = req.R
        epsilon = req.epsilon if req.epsilon is not None else schemas.DEFAULT_EPSILON
        if R < data.c_max:
            warnings.append(
                f"rotation scale R={R} is below c_max={data.c_max}: wraparound "
                f"regime, amplitudes follow sin(c/R) with possible sign changes"
            )
    else:
        epsilon = req.epsilon if req.epsilon is not None else schemas.DEFAULT_EPSILON
        R = choose_rotation_scale(data.c_max, epsilon)
    return R, epsilon, warnings


def _input_echo(data: DataSet) -> schemas.InputEcho:
    return schemas.InputEcho(
        n=data.n, L=data.L, c_max=data.c_max, values=list(data.raw())
    )


def _analysis_block(data: DataSet, R: float) -> schemas.AnalysisBlock:
    report = analysis.encoding_report(data, R)
    return schemas.AnalysisBlock(
        rho=report.rho,
        epsilon_bound=report.epsilon_bound,
        success_probability=report.p_success,
        expected_trials=report.expected_trials,
        max_relative_error=report.max_relative_error,
        success_bound=analysis.success_bound(data, report.epsilon_bound),
        time_model=report.time_model,
        target_state=[float(a) for a in report.target_state],
        oracle_state=[float(a) for a in report.oracle_state],
    )


def _resources_block(protocol: compiler.CompiledProtocol) -> schemas.ResourcesBlock:
    report = circuit_ir.resource_report(protocol.circuit, protocol.data)
    return schemas.ResourcesBlock(
        quantum_qubits=report.quantum_qubits,
        classical_memory_bits=report.classical_memory_bits,
        gate_counts=report.gate_counts,
        simulation_gate_total=report.simulation_gate_total,
        query_model_gate_total=report.query_model_gate_total,
        depth_total=report.depth_total,
        compression_depth=report.compression_depth,
    )


def encode(req: EncodeRequest) -> EncodeResponse:
    """Compile, simulate (unless mode=oracle), post-select and cross-check."""
    data = _dataset(req, req.max_n)
    R, epsilon, warnings = _resolve_scale(data, req)
    params = ProtocolParams(
        R=R, epsilon=epsilon, mode=req.mode, postselect=req.postselect, seed=req.seed
    )
    protocol = compiler.compile_protocol(data, params)
    analysis_block = _analysis_block(data, R)

    target = np.array(analysis_block.target_state)
    oracle = np.array(analysis_block.oracle_state)
    fidelities = schemas.FidelityBlock(
        oracle_vs_target=analysis.fidelity(oracle, target)
    )

    simulation = None
    if req.mode == "faithful":
        state = simulator.run(protocol)
        leakage = simulator.ancilla_leakage(state)
        if req.postselect:
            cpu_state, p_sim = simulator.measure_flag_postselect(state)
            prepared = [float(a.real) for a in cpu_state]
            fidelities.prepared_vs_target = analysis.fidelity(cpu_state, target)
            fidelities.prepared_vs_oracle = analysis.fidelity(cpu_state, oracle)
        else:
            cpu_state, prepared = None, None
            p_sim = simulator.flag_probability(state)
        simulation = schemas.SimulationBlock(
            p_success=p_sim, ancilla_leakage=leakage, prepared_state=prepared
        )

    resolved = ResolvedParams(
        R=R,
        epsilon=epsilon,
        epsilon_bound=implied_error_budget(data.c_max, R),
        mode=req.mode,
        seed=req.seed,
        postselect=req.postselect,
    )
    return EncodeResponse(
        provenance=_provenance("encode", resolved),
        input=_input_echo(data),
        analysis=analysis_block,
        simulation=simulation,
        fidelities=fidelities,
        resources=_resources_block(protocol),
        circuit_text=circuit_ir.to_text(protocol.circuit) if req.include_circuit else None,
        warnings=warnings,
    )


def sample(req: SampleRequest) -> SampleResponse:
    """Seeded repeat-until-success sampling of the flag measurement."""
    data = _dataset(req, req.max_n)
    R, epsilon, warnings = _resolve_scale(data, req)
    params = ProtocolParams(R=R, epsilon=epsilon, seed=req.seed)
    protocol = compiler.compile_protocol(data, params)
    stats = simulator.sample_trials(
        protocol, trials=req.trials, seed=req.seed, resimulate=req.resimulate
    )
    resolved = ResolvedParams(
        R=R,
        epsilon=epsilon,
        epsilon_bound=implied_error_budget(data.c_max, R),
        mode="faithful",
        seed=req.seed,
        trials=req.trials,
        resimulate=req.resimulate,
    )
    return SampleResponse(
        provenance=_provenance("sample", resolved),
        input=_input_echo(data),
        analytic_p=analysis.success_probability(data, R),
        stats=schemas.TrialStatsBlock(
            trials=stats.trials,
            successes=stats.successes,
            empirical_p=stats.empirical_p,
            expected_trials=stats.expected_trials,
            seed=stats.seed,
        ),
        warnings=warnings,
    )


def resources(req: ResourcesRequest) -> ResourcesResponse:
    """Compile only; report static resource counts."""
    data = _dataset(req, req.max_n)
    R, epsilon, warnings = _resolve_scale(data, req)
    params = ProtocolParams(R=R, epsilon=epsilon)
    protocol = compiler.compile_protocol(data, params)
    resolved = ResolvedParams(
        R=R,
        epsilon=epsilon,
        epsilon_bound=implied_error_budget(data.c_max, R),
        mode="faithful",
    )
    return ResourcesResponse(
        provenance=_provenance("resources", resolved),
        input=_input_echo(data),
        resources=_resources_block(protocol),
        circuit_text=circuit_ir.to_text(protocol.circuit) if req.include_circuit else None,
        warnings=warnings,
    )


def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
    """Analytic report only; no circuit is compiled."""
    data = _dataset(req)
    R, epsilon, warnings = _resolve_scale(data, req)
    resolved = ResolvedParams(
        R=R,
        epsilon=epsilon,
        epsilon_bound=implied_error_budget(data.c_max, R),
        mode="oracle",
    )
    return AnalyzeResponse(
        provenance=_provenance("analyze", resolved),
        input=_input_echo(data),
        analysis=_analysis_block(data, R),
        warnings=warnings,
    )


def _sweep_dataset(n: int, L: int, density_spec, value: int | None) -> DataSet:
    peak = value if value is not None else (1 << L) - 1
    size = 1 << n
    if density_spec == "uniform":
        values = [peak] * size
    elif density_spec == "onehot":
        values = [peak] + [0] * (size - 1)
    else:
        occupied = min(size, max(1, round(float(density_spec) * size)))
        values = [peak] * occupied + [0] * (size - occupied)
    return pad_to_power_of_two(values, L)


def _sweep_point(n: int, epsilon: float, density_spec, req: SweepRequest) -> SweepRow:
    data = _sweep_dataset(n, req.L, density_spec, req.value)
    R = choose_rotation_scale(data.c_max, epsilon)
    params = ProtocolParams(R=R, epsilon=epsilon, mode=req.mode)
    protocol = compiler.compile_protocol(data, params)
    if req.mode == "faithful":
        p = simulator.flag_probability(simulator.run(protocol))
    else:
        p = analysis.success_probability(data, R)
    rho = analysis.density(data)
    return SweepRow(
        n=n,
        L=req.L,
        density=str(density_spec),
        rho=rho,
        epsilon=epsilon,
        R=R,
        p_success=p,
        expected_trials=1.0 / p,
        depth=circuit_ir.depth(protocol.circuit),
        time_model=analysis.time_model(n, rho, epsilon) if n >= 2 else None,
    )


def _density_sort_key(spec: str):
    if spec == "uniform":
        return (0, 0.0)
    if spec == "onehot":
        return (1, 0.0)
    return (2, float(spec))


def sweep(req: SweepRequest) -> SweepResponse:
    """Evaluate the grid; rows are sorted by (n, L, density, epsilon)."""
    for n in req.ns:
        if n > req.max_n:
            raise InputDomainError(
                f"n={n} exceeds the configured maximum {req.max_n}"
            )
    grid = [
        (n, eps, dens)
        for n in req.ns
        for eps in req.epsilons
        for dens in req.densities
    ]
    if req.jobs > 1:
        with ThreadPoolExecutor(max_workers=req.jobs) as pool:
            rows = list(pool.map(lambda g: _sweep_point(g[0], g[1], g[2], req), grid))
    else:
        rows = [_sweep_point(n, eps, dens, req) for n, eps, dens in grid]
    rows.sort(key=lambda r: (r.n, r.L, _density_sort_key(r.density), r.epsilon))
    return SweepResponse(
        provenance=_provenance("sweep", None),
        rows=rows,
    )
