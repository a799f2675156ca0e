"""FastAPI service over the CLI commands.

Endpoints
---------
GET  /health            Liveness check with the tool version.
GET  /wigner/{kind}     Exact 3j / 6j / CG value; ``?args=1,3/2,...`` (six values).
GET  /lmatrix           L matrix by every method; ``?j1=..&j2=..&method=..``.
GET  /geometry/{N}      Vertices and regions of 3 x N (``samples`` needs ``seed``).
POST /classify          Detection protocol and verdict for one invariant state.
GET  /metrics           Prometheus metrics (requests, verdicts, latency, errors).

Responses are the same OutputRecord documents the CLI writes.  Invalid input
is a 400; malformed bodies are a 422.

Environment variables
---------------------
SPININV_CONFIG_DIR   Directory holding numerics.yaml and sampling.yaml.
"""

from __future__ import annotations

import asyncio
import logging
import time
from collections.abc import Callable
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse
from prometheus_client import (
    CONTENT_TYPE_LATEST,
    REGISTRY,
    Counter,
    Histogram,
    generate_latest,
)
from pydantic import BaseModel

from src import __version__
from src.cli.commands import (
    CommandResult,
    cmd_classify,
    cmd_geometry,
    cmd_lmatrix,
    cmd_wigner,
)
from src.cli.records import OutputRecord
from src.config import get_settings

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Prometheus metrics
# ---------------------------------------------------------------------------


def _get_or_create(metric_cls, name, doc, **kwargs):
    """Return an existing metric or create a new one.

    Prometheus raises if the same metric name is registered twice, which
    happens when tests re-import this module.
    """
    existing = REGISTRY._names_to_collectors.get(name)  # type: ignore[attr-defined]
    if existing is not None:
        return existing
    return metric_cls(name, doc, **kwargs)


REQUEST_LATENCY = _get_or_create(
    Histogram,
    "spininv_request_latency_seconds",
    "Per-request latency",
    labelnames=["endpoint"],
    buckets=[0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0],
)
REQUESTS_TOTAL = _get_or_create(
    Counter, "spininv_requests_total", "Requests served", labelnames=["endpoint"]
)
ERRORS_TOTAL = _get_or_create(
    Counter, "spininv_request_errors_total", "Failed requests", labelnames=["endpoint"]
)
VERDICTS_TOTAL = _get_or_create(
    Counter, "spininv_verdicts_total", "Classification verdicts", labelnames=["verdict"]
)

# ---------------------------------------------------------------------------
# Lifespan: fail fast on a broken config
# ---------------------------------------------------------------------------


@asynccontextmanager
async def lifespan(app: FastAPI):  # noqa: ARG001
    settings = get_settings()
    logger.info(
        "Loaded settings: region_tol=%g, certification_samples=%d",
        settings.numerics.region_tol,
        settings.sampling.certification_samples,
    )
    yield


app = FastAPI(title="spininv", version=__version__, lifespan=lifespan)


class ClassifyRequest(BaseModel):
    N: int
    p: list[float] | None = None
    beta: list[float] | None = None
    samples: int = 0
    seed: int | None = None
    scheme: str | None = None


def _execute(endpoint: str, build: Callable[[], CommandResult]) -> CommandResult:
    REQUESTS_TOTAL.labels(endpoint=endpoint).inc()
    start = time.perf_counter()
    try:
        return build()
    except (ValueError, TypeError) as exc:
        ERRORS_TOTAL.labels(endpoint=endpoint).inc()
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except Exception as exc:
        ERRORS_TOTAL.labels(endpoint=endpoint).inc()
        logger.exception("%s failed", endpoint)
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    finally:
        REQUEST_LATENCY.labels(endpoint=endpoint).observe(time.perf_counter() - start)


# ---------------------------------------------------------------------------
# Routes
# ---------------------------------------------------------------------------


@app.get("/health")
async def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/wigner/{kind}", response_model=OutputRecord)
async def wigner(kind: str, args: str = Query(..., description="Six comma-separated spins")):
    values = [a for a in args.split(",") if a.strip()]
    result = await asyncio.to_thread(
        _execute, "wigner", lambda: cmd_wigner(kind, values)
    )
    return result.record


@app.get("/lmatrix", response_model=OutputRecord)
async def lmatrix(j1: str, j2: str, method: str = "six_j"):
    result = await asyncio.to_thread(
        _execute, "lmatrix", lambda: cmd_lmatrix(j1, j2, method=method)
    )
    return result.record


@app.get("/geometry/{n}", response_model=OutputRecord)
async def geometry(
    n: int, samples: int = 0, seed: int | None = None, scheme: str | None = None
):
    result = await asyncio.to_thread(
        _execute,
        "geometry",
        lambda: cmd_geometry(n, samples=samples, seed=seed, scheme=scheme),
    )
    return result.record


@app.post("/classify", response_model=OutputRecord)
async def classify(request: ClassifyRequest):
    result = await asyncio.to_thread(
        _execute,
        "classify",
        lambda: cmd_classify(
            request.N,
            p=request.p,
            beta=request.beta,
            samples=request.samples,
            seed=request.seed,
            scheme=request.scheme,
        ),
    )
    VERDICTS_TOTAL.labels(verdict=result.record.results["verdict"]).inc()
    return result.record


@app.get("/metrics", response_class=PlainTextResponse)
async def metrics() -> PlainTextResponse:
    return PlainTextResponse(generate_latest(), media_type=CONTENT_TYPE_LATEST)
