"""Batch command-line front-end.

A thin client over the service handlers: flags are parsed into the same
request models the HTTP API accepts, and reports are the same response
models serialized to JSON (or flattened CSV).

Exit codes: 0 ok, 2 invalid input, 3 zero success probability,
1 internal error.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click
from pydantic import BaseModel, ValidationError

from .errors import (
    AllZeroDataError,
    AncillaEntanglementError,
    ConfigurationError,
    EncoderError,
    InputDomainError,
    ZeroSuccessProbabilityError,
)
from .service import handlers, schemas

EXIT_INVALID_INPUT = 2
EXIT_ZERO_SUCCESS = 3
EXIT_INTERNAL = 1


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _run(handler, request_cls, fields: dict):
    try:
        request = request_cls(**fields)
    except ValidationError as exc:
        first = exc.errors()[0]
        _fail(EXIT_INVALID_INPUT, first.get("msg", str(exc)))
    try:
        return handler(request)
    except (AllZeroDataError, ZeroSuccessProbabilityError) as exc:
        _fail(EXIT_ZERO_SUCCESS, str(exc))
    except (InputDomainError, ConfigurationError) as exc:
        _fail(EXIT_INVALID_INPUT, str(exc))
    except AncillaEntanglementError as exc:
        _fail(EXIT_INTERNAL, str(exc))
    except EncoderError as exc:
        _fail(EXIT_INTERNAL, str(exc))


def _load_data(path: str, input_format: str | None, L: int | None) -> tuple[list[int], int]:
    """Read {"L":..,"values":[..]} JSON or one-integer-per-line CSV."""
    p = Path(path)
    if input_format is None:
        input_format = "csv" if p.suffix.lower() == ".csv" else "json"
    try:
        text = p.read_text()
    except OSError as exc:
        _fail(EXIT_INVALID_INPUT, f"cannot read {path}: {exc}")
    if input_format == "json":
        try:
            payload = json.loads(text)
            values = list(payload["values"])
            file_L = int(payload["L"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            _fail(EXIT_INVALID_INPUT, f"cannot parse {path} as data JSON: {exc}")
        if L is not None and L != file_L:
            _fail(EXIT_INVALID_INPUT, f"--L {L} conflicts with L={file_L} in {path}")
        return values, file_L
    # CSV: one unsigned integer per line, bit width from --L
    if L is None:
        _fail(EXIT_INVALID_INPUT, "--L is required for CSV input")
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(int(line))
        except ValueError:
            _fail(EXIT_INVALID_INPUT, f"{path}:{lineno}: not an integer: {line!r}")
    return values, L


def _flatten(prefix: str, obj, rows: list[tuple[str, str]]) -> None:
    if isinstance(obj, dict):
        for key, val in obj.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), val, rows)
    elif isinstance(obj, list):
        rows.append((prefix, ";".join("" if v is None else repr(v) if isinstance(v, float) else str(v) for v in obj)))
    elif isinstance(obj, float):
        rows.append((prefix, repr(obj)))
    elif obj is None:
        rows.append((prefix, ""))
    else:
        rows.append((prefix, str(obj)))


def _report_csv(response: BaseModel) -> str:
    rows: list[tuple[str, str]] = []
    _flatten("", response.model_dump(), rows)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["field", "value"])
    writer.writerows(rows)
    return out.getvalue()


def _sweep_csv(response: schemas.SweepResponse) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(schemas.SWEEP_COLUMNS)
    for row in response.rows:
        dumped = row.model_dump()
        writer.writerow(
            ["" if dumped[col] is None else
             repr(dumped[col]) if isinstance(dumped[col], float) else str(dumped[col])
             for col in schemas.SWEEP_COLUMNS]
        )
    return out.getvalue()


def _emit(response: BaseModel, output: str | None, output_format: str,
          dump_circuit: str | None = None) -> None:
    for warning in getattr(response, "warnings", []):
        click.echo(f"warning: {warning}", err=True)
    if dump_circuit is not None:
        circuit_text = getattr(response, "circuit_text", None)
        if circuit_text is not None:
            Path(dump_circuit).write_text(circuit_text)
            response = response.model_copy(update={"circuit_text": None})
    if output_format == "csv":
        text = (_sweep_csv(response) if isinstance(response, schemas.SweepResponse)
                else _report_csv(response))
    else:
        text = response.model_dump_json(indent=2) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


def _parse_floats(spec: str) -> list[float]:
    return [float(tok) for tok in spec.split(",") if tok.strip()]


def _parse_ints(spec: str) -> list[int]:
    """Comma list and/or colon ranges: "2,3" or "2:6" (inclusive)."""
    out: list[int] = []
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if ":" in tok:
            lo, hi = tok.split(":", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(tok))
    return out


_data_options = [
    click.option("--data", "data_path", required=True, type=click.Path(),
                 help="Input data file (JSON or CSV)."),
    click.option("--input-format", type=click.Choice(["json", "csv"]), default=None,
                 help="Input format; inferred from the extension by default."),
    click.option("--L", "L", type=int, default=None,
                 help="Bit width of the values (required for CSV input)."),
]

_scale_options = [
    click.option("--epsilon", type=float, default=None,
                 help=f"Error budget; picks R = c_max/sqrt(6*eps). "
                      f"[default: {schemas.DEFAULT_EPSILON}]"),
    click.option("-R", "--rotation-scale", "R", type=float, default=None,
                 help="Explicit rotation scale (mutually exclusive with --epsilon; "
                      "values below c_max enter the wraparound regime)."),
    click.option("--max-n", type=int, default=schemas.DEFAULT_MAX_N, show_default=True,
                 help="Refuse instances with a CPU register wider than this."),
]

_output_options = [
    click.option("--output", type=click.Path(), default=None,
                 help="Write the report here instead of stdout."),
    click.option("--output-format", type=click.Choice(["json", "csv"]), default=None,
                 help="Report format. [default: json; sweep: csv]"),
]


def _with(options):
    def wrap(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn
    return wrap


@click.group()
@click.version_option(package_name="ampenc")
def main() -> None:
    """Amplitude-encoding protocol: compile, simulate, post-select, analyze.

    Defaults: epsilon=0.001, trials=100000, seed=0, max-n=8.
    """


@main.command()
@_with(_data_options)
@_with(_scale_options)
@click.option("--mode", type=click.Choice(["faithful", "oracle"]), default="faithful",
              show_default=True, help="oracle skips simulation, reports analytics only.")
@click.option("--seed", type=int, default=schemas.DEFAULT_SEED, show_default=True)
@click.option("--no-postselect", "postselect", flag_value=False, default=True,
              help="Report the pre-measurement flag statistics without projecting.")
@click.option("--dump-circuit", type=click.Path(), default=None,
              help="Also write the compiled circuit in the text format.")
@_with(_output_options)
def encode(data_path, input_format, L, epsilon, R, max_n, mode, seed, postselect,
           dump_circuit, output, output_format):
    """Prepare the encoded state and verify it against the analytic oracles."""
    values, L = _load_data(data_path, input_format, L)
    response = _run(handlers.encode, schemas.EncodeRequest, dict(
        values=values, L=L, epsilon=epsilon, R=R, max_n=max_n, mode=mode,
        seed=seed, postselect=postselect, include_circuit=dump_circuit is not None,
    ))
    _emit(response, output, output_format or "json", dump_circuit)


@main.command()
@_with(_data_options)
@_with(_scale_options)
@click.option("--trials", type=int, default=schemas.DEFAULT_TRIALS, show_default=True)
@click.option("--seed", type=int, default=schemas.DEFAULT_SEED, show_default=True)
@click.option("--resimulate", is_flag=True, default=False,
              help="Re-run the full simulation for every trial.")
@_with(_output_options)
def sample(data_path, input_format, L, epsilon, R, max_n, trials, seed, resimulate,
           output, output_format):
    """Repeat-until-success sampling of the flag measurement."""
    values, L = _load_data(data_path, input_format, L)
    response = _run(handlers.sample, schemas.SampleRequest, dict(
        values=values, L=L, epsilon=epsilon, R=R, max_n=max_n,
        trials=trials, seed=seed, resimulate=resimulate,
    ))
    _emit(response, output, output_format or "json")


@main.command()
@_with(_data_options)
@_with(_scale_options)
@click.option("--dump-circuit", type=click.Path(), default=None,
              help="Also write the compiled circuit in the text format.")
@_with(_output_options)
def resources(data_path, input_format, L, epsilon, R, max_n, dump_circuit,
              output, output_format):
    """Static resource counts of the compiled circuit."""
    values, L = _load_data(data_path, input_format, L)
    response = _run(handlers.resources, schemas.ResourcesRequest, dict(
        values=values, L=L, epsilon=epsilon, R=R, max_n=max_n,
        include_circuit=dump_circuit is not None,
    ))
    _emit(response, output, output_format or "json", dump_circuit)


@main.command()
@_with(_data_options)
@click.option("--epsilon", type=float, default=None,
              help=f"Error budget. [default: {schemas.DEFAULT_EPSILON}]")
@click.option("-R", "--rotation-scale", "R", type=float, default=None,
              help="Explicit rotation scale (mutually exclusive with --epsilon).")
@_with(_output_options)
def analyze(data_path, input_format, L, epsilon, R, output, output_format):
    """Analytic report only: states, probabilities, bounds, time model."""
    values, L = _load_data(data_path, input_format, L)
    response = _run(handlers.analyze, schemas.AnalyzeRequest, dict(
        values=values, L=L, epsilon=epsilon, R=R,
    ))
    _emit(response, output, output_format or "json")


@main.command()
@click.option("--n", "ns", required=True,
              help='CPU widths, e.g. "2:6" or "2,4,8".')
@click.option("--epsilons", default=str(schemas.DEFAULT_EPSILON), show_default=True,
              help='Comma list of error budgets, e.g. "1e-2,1e-3".')
@click.option("--densities", default="uniform", show_default=True,
              help='Comma list of "uniform", "onehot", or fractions in (0,1].')
@click.option("--L", "L", type=int, default=5, show_default=True)
@click.option("--value", type=int, default=None,
              help="Peak value used by the synthetic data families. [default: 2^L-1]")
@click.option("--mode", type=click.Choice(["faithful", "oracle"]), default="oracle",
              show_default=True, help="faithful simulates every grid point.")
@click.option("--max-n", type=int, default=schemas.DEFAULT_MAX_N, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Evaluate grid points in this many threads.")
@_with(_output_options)
def sweep(ns, epsilons, densities, L, value, mode, max_n, jobs, output, output_format):
    """Scaling table over CPU width, error budget and data density."""
    try:
        parsed_ns = _parse_ints(ns)
        parsed_eps = _parse_floats(epsilons)
        parsed_dens = [tok.strip() if tok.strip() in ("uniform", "onehot")
                       else float(tok) for tok in densities.split(",") if tok.strip()]
    except ValueError as exc:
        _fail(EXIT_INVALID_INPUT, f"cannot parse sweep ranges: {exc}")
    response = _run(handlers.sweep, schemas.SweepRequest, dict(
        ns=parsed_ns, epsilons=parsed_eps, densities=parsed_dens, L=L,
        value=value, mode=mode, max_n=max_n, jobs=jobs,
    ))
    _emit(response, output, output_format or "csv")


if __name__ == "__main__":
    main()
