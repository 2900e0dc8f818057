from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from neural_linucb.exceptions import BanditConfigError
from neural_linucb.network.models import NetworkParams, NetworkShape

SNAPSHOT_FORMAT = "neural-linucb-weights"
SNAPSHOT_VERSION = 1


class WeightSnapshot(BaseModel):
    """On-disk layout of a network: shape header, column-major layers, theta.

    Layer l is stored as the flat column-major vec(W_l), the same order the
    gradients use.
    """

    model_config = ConfigDict(extra="ignore", frozen=True)

    format: Literal["neural-linucb-weights"] = SNAPSHOT_FORMAT
    version: Literal[1] = SNAPSHOT_VERSION
    shape: NetworkShape
    layers: list[list[float]]
    theta: list[float]
    # hash of the experiment config that produced the weights, if any
    config_hash: str | None = None

    @classmethod
    def from_params(cls, params: NetworkParams, config_hash: str | None = None) -> "WeightSnapshot":
        return cls(
            shape=params.shape,
            layers=[w.ravel(order="F").tolist() for w in params.weights],
            theta=params.theta.tolist(),
            config_hash=config_hash,
        )

    def to_params(self) -> NetworkParams:
        dims = self.shape.layer_dims
        if len(self.layers) != len(dims):
            raise ValueError(f"snapshot holds {len(self.layers)} layers, shape needs {len(dims)}")
        weights = []
        for layer, (flat, (rows, cols)) in enumerate(zip(self.layers, dims), start=1):
            if len(flat) != rows * cols:
                raise ValueError(f"layer {layer} has {len(flat)} entries, expected {rows * cols}")
            weights.append(np.asarray(flat, dtype=np.float64).reshape((rows, cols), order="F"))
        return NetworkParams(
            shape=self.shape,
            weights=tuple(weights),
            theta=np.asarray(self.theta, dtype=np.float64),
        )


def dump_params(params: NetworkParams, path: Path | str, config_hash: str | None = None) -> Path:
    """Write params as a versioned JSON snapshot and return the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(WeightSnapshot.from_params(params, config_hash).model_dump_json())
    return path


def load_params(path: Path | str) -> NetworkParams:
    """Read a snapshot written by dump_params."""
    path = Path(path)
    try:
        return WeightSnapshot.model_validate_json(path.read_text()).to_params()
    except (ValidationError, ValueError) as e:
        raise BanditConfigError(f"invalid weight snapshot {path}: {e}") from e
