from enum import Enum
from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class HistoryMode(str, Enum):
    """Which replay data an epoch retraining sees."""

    FULL = "full-history"
    EPOCH = "epoch-only"


class NetworkShape(BaseModel):
    """Layer sizes of the uniform-width ReLU network.

    Layer dimensions are m_0 = d, m_1 = ... = m_{L-1} = m and m_L = d.
    """

    model_config = ConfigDict(frozen=True)

    input_dim: int = Field(gt=0)
    width: int = Field(gt=0)
    depth: int = Field(ge=2)

    @model_validator(mode="after")
    def _check_block_structure(self) -> "NetworkShape":
        if self.input_dim % 2:
            raise ValueError(f"input_dim must be even, got {self.input_dim}")
        if self.width % 2:
            raise ValueError(f"width must be even, got {self.width}")
        if self.width < self.input_dim:
            raise ValueError(f"width {self.width} must be at least input_dim {self.input_dim}")
        return self

    @property
    def layer_dims(self) -> list[tuple[int, int]]:
        """(rows, cols) of W_1 .. W_L."""
        d, m, depth = self.input_dim, self.width, self.depth
        return [(m, d)] + [(m, m)] * (depth - 2) + [(d, m)]

    @property
    def num_weights(self) -> int:
        """p = (L - 2) m^2 + 2 m d."""
        return (self.depth - 2) * self.width**2 + 2 * self.width * self.input_dim


class NetworkParams(BaseModel):
    """Hidden weights W_1..W_L plus the output weight theta.

    Arrays are stored read-only; training returns a new instance.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    shape: NetworkShape
    weights: tuple[np.ndarray, ...]
    theta: np.ndarray

    @model_validator(mode="after")
    def _check_dims(self) -> "NetworkParams":
        expected = self.shape.layer_dims
        if len(self.weights) != len(expected):
            raise ValueError(f"expected {len(expected)} weight matrices, got {len(self.weights)}")
        for layer, (w, dims) in enumerate(zip(self.weights, expected), start=1):
            if w.shape != dims:
                raise ValueError(f"W_{layer} has shape {w.shape}, expected {dims}")
            w.flags.writeable = False
        if self.theta.shape != (self.shape.input_dim,):
            raise ValueError(
                f"theta has shape {self.theta.shape}, expected ({self.shape.input_dim},)"
            )
        self.theta.flags.writeable = False
        return self

    @cached_property
    def flat_weights(self) -> np.ndarray:
        """w = (vec(W_1), ..., vec(W_L)) with column-major vec."""
        return np.concatenate([w.ravel(order="F") for w in self.weights])

    def with_weights(self, weights: list[np.ndarray] | tuple[np.ndarray, ...]) -> "NetworkParams":
        return NetworkParams(shape=self.shape, weights=tuple(weights), theta=self.theta)

    def with_theta(self, theta: np.ndarray) -> "NetworkParams":
        return NetworkParams(shape=self.shape, weights=self.weights, theta=theta)


class TrainConfig(BaseModel):
    """Gradient-descent settings for epoch retraining."""

    model_config = ConfigDict(frozen=True)

    step_size: float = Field(default=1e-5, ge=0.0)
    max_iter: int = Field(default=200, ge=0)
    early_stop: float = Field(default=1e-6, ge=0.0)
    history_mode: HistoryMode = HistoryMode.FULL
    # each epoch restarts from the initial weights; False continues from the previous epoch
    restart_from_init: bool = True

    @model_validator(mode="after")
    def _check_step(self) -> "TrainConfig":
        if self.max_iter > 0 and self.step_size <= 0:
            raise ValueError("step_size must be positive when max_iter > 0")
        return self


class TrainResult(BaseModel):
    """Outcome of one retraining call."""

    model_config = ConfigDict(frozen=True)

    params: NetworkParams
    losses: list[float]
    stopped_early: bool = False

    @property
    def iterations(self) -> int:
        return max(len(self.losses) - 1, 0)
