"""Run checkpoints for resuming an interrupted run.

A checkpoint is a pickle of ``{"format", "version", "checkpoint"}``. Only load
checkpoints this package wrote: unpickling runs arbitrary code.
"""

import logging
import pickle
from pathlib import Path

from neural_linucb.exceptions import ArtifactError
from neural_linucb.harness.models import RunCheckpoint

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "neural-linucb-checkpoint"
CHECKPOINT_VERSION = 1


def save_checkpoint(checkpoint: RunCheckpoint, path: Path | str) -> Path:
    """Write atomically: a crash mid-write leaves the previous checkpoint intact."""
    path = Path(path)
    partial = path.with_name(path.name + ".partial")
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "checkpoint": checkpoint,
    }
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with partial.open("wb") as f:
            pickle.dump(payload, f, protocol=pickle.HIGHEST_PROTOCOL)
        partial.replace(path)
    except OSError as e:
        raise ArtifactError(f"cannot write {path}: {e.strerror or e}", path=path) from e
    logger.debug("checkpoint %s at round %d", path, checkpoint.round)
    return path


def load_checkpoint(path: Path | str) -> RunCheckpoint:
    path = Path(path)
    try:
        with path.open("rb") as f:
            payload = pickle.load(f)
    except FileNotFoundError as e:
        raise ArtifactError(f"checkpoint not found: {path}", path=path) from e
    except (OSError, pickle.UnpicklingError, EOFError, AttributeError, ImportError) as e:
        raise ArtifactError(f"cannot read checkpoint {path}: {e}", path=path) from e

    if not isinstance(payload, dict) or payload.get("format") != CHECKPOINT_FORMAT:
        raise ArtifactError(f"{path} is not a {CHECKPOINT_FORMAT} file", path=path)
    if payload.get("version") != CHECKPOINT_VERSION:
        raise ArtifactError(
            f"{path} has checkpoint version {payload.get('version')}, "
            f"expected {CHECKPOINT_VERSION}",
            path=path,
        )
    checkpoint = payload.get("checkpoint")
    if not isinstance(checkpoint, RunCheckpoint):
        raise ArtifactError(f"{path} holds no run checkpoint", path=path)
    return checkpoint
