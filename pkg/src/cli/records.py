"""Output records shared by the CLI and the HTTP service.

Every record echoes the tool version, the command, its full inputs, the seed
(if any) and the tolerance in force, so that re-running with the echoed
inputs reproduces ``results`` exactly.

JSON   One document; floats are emitted as shortest round-trip doubles.
CSV    A ``# {...}`` header line carrying the record metadata as JSON,
       followed by the command's flat table (17 significant digits).
"""

from __future__ import annotations

import io
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Literal

import pandas as pd
from pydantic import BaseModel, Field

from src import __version__

UTC = timezone.utc  # datetime.UTC alias (Python 3.11+)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
OutputFormat = Literal["json", "csv"]


def _now() -> str:
    return datetime.now(UTC).isoformat(timespec="seconds")


class OutputRecord(BaseModel):
    schema_version: int = SCHEMA_VERSION
    tool: str = "spininv"
    version: str = __version__
    command: str
    inputs: dict[str, Any]
    seed: int | None = None
    tolerance: float
    results: dict[str, Any]
    created_at: str = Field(default_factory=_now)

    def metadata(self) -> dict[str, Any]:
        return self.model_dump(exclude={"results"})


def render_json(record: OutputRecord) -> str:
    return json.dumps(record.model_dump(), indent=2, allow_nan=False)


def render_csv(record: OutputRecord, table: pd.DataFrame) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(record.metadata(), allow_nan=False) + "\n")
    table.to_csv(buf, index=False, float_format="%.17g")
    return buf.getvalue()


def write_record(
    record: OutputRecord,
    table: pd.DataFrame,
    fmt: OutputFormat = "json",
    out: Path | None = None,
) -> str:
    """Render *record* and write it to *out* (stdout when None).

    Args:
        record: Metadata and results of one command.
        table: Rows for the CSV body; ignored for JSON.
        fmt: ``json`` or ``csv``.
        out: Destination file. Parent directories are created.

    Returns:
        The rendered text.
    """
    if fmt == "json":
        text = render_json(record) + "\n"
    elif fmt == "csv":
        text = render_csv(record, table)
    else:
        raise ValueError(f"format must be json or csv, got {fmt!r}")

    if out is None:
        print(text, end="")
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        logger.info("Wrote %s record for %r to %s", fmt, record.command, out)
    return text


def read_csv_record(path: Path) -> tuple[dict[str, Any], pd.DataFrame]:
    """Inverse of ``render_csv``: metadata header plus table."""
    with open(path) as f:
        header = f.readline()
        if not header.startswith("# "):
            raise ValueError(f"{path} has no record header line")
        table = pd.read_csv(f)
    return json.loads(header[2:]), table
