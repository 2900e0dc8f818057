"""CSV artifacts.

Every file starts with one comment line ``#schema=<name>/<version>`` followed by
space-separated ``key=value`` metadata, then a header row and the data rows.
Floats are written with 9 significant digits.
"""

import logging
from pathlib import Path
from typing import Any

import pandas as pd

from neural_linucb.exceptions import ArtifactError
from neural_linucb.harness.models import (
    AGGREGATE_DTYPES,
    TRACE_DTYPES,
    RegretAggregate,
    RegretTrace,
)

logger = logging.getLogger(__name__)

TRACE_SCHEMA = "neural-linucb-trace/1"
AGGREGATE_SCHEMA = "neural-linucb-aggregate/1"
GRAM_SCHEMA = "neural-linucb-ntk-gram/1"
SWEEP_SCHEMA = "neural-linucb-gram-sweep/1"
FLOAT_FORMAT = "%.9g"


def _schema_line(schema: str, metadata: dict[str, Any]) -> str:
    fields = [f"#schema={schema}"]
    for key, value in metadata.items():
        text = str(value)
        if not text or any(c.isspace() or c == "=" for c in text):
            raise ArtifactError(f"metadata value for {key!r} cannot be stored: {text!r}")
        fields.append(f"{key}={text}")
    return " ".join(fields) + "\n"


def emit_table(frame: pd.DataFrame, path: Path | str, schema: str, **metadata: Any) -> Path:
    """Write frame under a schema line; parent directories are created."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as f:
            f.write(_schema_line(schema, metadata))
            frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise ArtifactError(f"cannot write {path}: {e.strerror or e}", path=path) from e
    logger.debug("wrote %s (%d rows)", path, len(frame))
    return path


def emit_csv(result: RegretTrace | RegretAggregate, path: Path | str) -> Path:
    if isinstance(result, RegretTrace):
        return emit_table(
            result.frame,
            path,
            TRACE_SCHEMA,
            algorithm=result.algorithm,
            seed=result.seed,
            config_hash=result.config_hash,
        )
    return emit_table(
        result.frame,
        path,
        AGGREGATE_SCHEMA,
        algorithm=result.algorithm,
        config_hash=result.config_hash,
    )


def read_table(path: Path | str) -> tuple[str, dict[str, str], pd.DataFrame]:
    """Schema name, metadata and rows of an artifact written by emit_table."""
    path = Path(path)
    try:
        with path.open() as f:
            first = f.readline()
            frame = pd.read_csv(f)
    except FileNotFoundError as e:
        raise ArtifactError(f"artifact not found: {path}", path=path) from e
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ArtifactError(f"cannot read {path}: {e}", path=path) from e
    if not first.startswith("#schema="):
        raise ArtifactError(f"{path} has no #schema= line", path=path)
    schema, *fields = first[1:].split()
    metadata = {key: value for key, _, value in (field.partition("=") for field in fields)}
    return schema.removeprefix("schema="), metadata, frame


def _expect(path: Path | str, schema: str, expected: str) -> None:
    if schema != expected:
        raise ArtifactError(f"{path} holds {schema}, expected {expected}", path=path)


def read_trace(path: Path | str) -> RegretTrace:
    schema, metadata, frame = read_table(path)
    _expect(path, schema, TRACE_SCHEMA)
    try:
        return RegretTrace(
            algorithm=metadata["algorithm"],
            seed=int(metadata["seed"]),
            config_hash=metadata["config_hash"],
            frame=frame.astype(TRACE_DTYPES),
        )
    except (KeyError, ValueError) as e:
        raise ArtifactError(f"malformed trace {path}: {e}", path=path) from e


def read_aggregate(path: Path | str) -> RegretAggregate:
    schema, metadata, frame = read_table(path)
    _expect(path, schema, AGGREGATE_SCHEMA)
    try:
        return RegretAggregate(
            algorithm=metadata["algorithm"],
            config_hash=metadata["config_hash"],
            frame=frame.astype(AGGREGATE_DTYPES),
        )
    except (KeyError, ValueError) as e:
        raise ArtifactError(f"malformed aggregate {path}: {e}", path=path) from e
