"""FastAPI application exposing the encoder as an HTTP service.

Error statuses: 400 for domain-invalid input, 409 when the requested run
can never post-select successfully, 422 for malformed request bodies
(FastAPI validation), 500 for internal invariant violations.
"""

from __future__ import annotations

import click
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (
    AllZeroDataError,
    AncillaEntanglementError,
    ConfigurationError,
    InputDomainError,
    ZeroSuccessProbabilityError,
)
from . import handlers, schemas

app = FastAPI(
    title="ampenc",
    version=__version__,
    description=(
        "Amplitude-encoding state preparation: compile a classical data set "
        "into the flag-rotation circuit, simulate it exactly, post-select, "
        "and report analytic predictions and resource counts."
    ),
)


@app.exception_handler(InputDomainError)
@app.exception_handler(ConfigurationError)
async def _invalid_input(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=400, content=schemas.error_payload("invalid_input", exc))


@app.exception_handler(AllZeroDataError)
@app.exception_handler(ZeroSuccessProbabilityError)
async def _zero_success(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(
        status_code=409, content=schemas.error_payload("zero_success_probability", exc)
    )


@app.exception_handler(AncillaEntanglementError)
async def _internal(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=500, content=schemas.error_payload("internal_error", exc))


@app.get("/health")
def health() -> dict:
    return {
        "status": "ok",
        "package": "ampenc",
        "version": __version__,
        "defaults": schemas.Defaults().model_dump(),
    }


@app.post("/encode", response_model=schemas.EncodeResponse)
def encode(req: schemas.EncodeRequest) -> schemas.EncodeResponse:
    return handlers.encode(req)


@app.post("/sample", response_model=schemas.SampleResponse)
def sample(req: schemas.SampleRequest) -> schemas.SampleResponse:
    return handlers.sample(req)


@app.post("/resources", response_model=schemas.ResourcesResponse)
def resources(req: schemas.ResourcesRequest) -> schemas.ResourcesResponse:
    return handlers.resources(req)


@app.post("/analyze", response_model=schemas.AnalyzeResponse)
def analyze(req: schemas.AnalyzeRequest) -> schemas.AnalyzeResponse:
    return handlers.analyze(req)


@app.post("/sweep", response_model=schemas.SweepResponse)
def sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    return handlers.sweep(req)


@click.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host: str, port: int) -> None:
    """Run the HTTP service with uvicorn."""
    import uvicorn

    uvicorn.run("ampenc.service.app:app", host=host, port=port)
