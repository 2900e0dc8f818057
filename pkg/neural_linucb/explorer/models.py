from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class AlphaMode(str, Enum):
    FIXED = "fixed"
    THEOREM = "theorem"


class RidgeState(BaseModel):
    """Last-layer ridge regression state.

    A = lam * I + sum of phi phi^T over the updates applied, a_inv is its
    maintained inverse and theta the current estimate. With shrink_to_init the
    estimate is A^-1 (b + lam * theta0), which shrinks toward the initial theta
    instead of toward zero.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lam: float = Field(gt=0.0)
    a: np.ndarray
    a_inv: np.ndarray
    b: np.ndarray
    theta: np.ndarray
    theta0: np.ndarray
    shrink_to_init: bool = False
    update_count: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_dims(self) -> "RidgeState":
        d = self.b.shape[0]
        for name in ("a", "a_inv"):
            if getattr(self, name).shape != (d, d):
                raise ValueError(f"{name} must be {d} x {d}, got {getattr(self, name).shape}")
        for name in ("b", "theta", "theta0"):
            if getattr(self, name).shape != (d,):
                raise ValueError(f"{name} must have length {d}")
        for name in ("a", "a_inv", "b", "theta", "theta0"):
            getattr(self, name).flags.writeable = False
        return self

    @property
    def dim(self) -> int:
        return int(self.b.shape[0])

    @property
    def inverse_error(self) -> float:
        """||A a_inv - I||_F, the drift of the maintained inverse."""
        return float(np.linalg.norm(self.a @ self.a_inv - np.eye(self.dim)))


class AlphaSchedule(BaseModel):
    """Exploration weight alpha_t: a constant, or the confidence radius of the regret analysis.

    Theorem mode evaluates
    nu * sqrt(2 (d log(1 + t log(H K) / lam) + log(1 / delta))) + sqrt(lam) * bound.
    """

    model_config = ConfigDict(frozen=True)

    mode: AlphaMode = AlphaMode.FIXED
    alpha: float = Field(default=0.02, ge=0.0)
    nu: float = Field(default=1.0, ge=0.0)
    dim: int = Field(default=1, gt=0)
    epoch_length: int = Field(default=100, gt=0)
    n_arms: int = Field(default=2, gt=0)
    lam: float = Field(default=1.0, gt=0.0)
    delta: float = Field(default=0.1, gt=0.0, lt=1.0)
    bound: float = Field(default=1.0, ge=0.0)

    @classmethod
    def fixed(cls, alpha: float) -> "AlphaSchedule":
        return cls(mode=AlphaMode.FIXED, alpha=alpha)
