from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

ASSUMPTION_TOL = 1e-10


class RewardKind(str, Enum):
    CLASSIFICATION = "classification"
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    COSINE = "cosine"


SYNTHETIC_KINDS = (RewardKind.LINEAR, RewardKind.QUADRATIC, RewardKind.COSINE)


class DatasetSpec(BaseModel):
    """Expected shape of a classification dataset."""

    model_config = ConfigDict(extra="ignore", frozen=True)

    name: str
    n_attributes: int = Field(gt=0)
    n_arms: int = Field(ge=2)
    n_instances: int | None = None


KNOWN_DATASETS: dict[str, DatasetSpec] = {
    "statlog": DatasetSpec(name="statlog", n_attributes=9, n_arms=7, n_instances=58000),
    "magic": DatasetSpec(name="magic", n_attributes=11, n_arms=2, n_instances=19020),
    "covertype": DatasetSpec(name="covertype", n_attributes=54, n_arms=7, n_instances=581012),
}


class RawDataset(BaseModel):
    """Numeric attributes with 0-based class labels."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    features: np.ndarray
    labels: np.ndarray
    n_arms: int = Field(ge=2)

    @model_validator(mode="after")
    def _check(self) -> "RawDataset":
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-d array")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("need one label per row")
        if not np.isfinite(self.features).all():
            raise ValueError("attributes must be finite")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.n_arms):
            raise ValueError(f"labels must lie in [0, {self.n_arms})")
        self.features.flags.writeable = False
        self.labels.flags.writeable = False
        return self

    @property
    def n_attributes(self) -> int:
        return int(self.features.shape[1])

    def __len__(self) -> int:
        return int(self.features.shape[0])


class RewardModel(BaseModel):
    """Expected reward r(x) of a context, plus the scale of the Gaussian noise."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: RewardKind
    theta_star: np.ndarray | None = None
    noise: float = Field(default=0.0, ge=0.0)

    @model_validator(mode="after")
    def _check_latent(self) -> "RewardModel":
        if self.kind is RewardKind.CLASSIFICATION:
            return self
        if self.theta_star is None:
            raise ValueError(f"{self.kind.value} rewards need theta_star")
        if abs(float(np.linalg.norm(self.theta_star)) - 1.0) > ASSUMPTION_TOL:
            raise ValueError("theta_star must have unit norm")
        self.theta_star.flags.writeable = False
        return self

    def expected(self, features: np.ndarray) -> np.ndarray:
        """r(x) for each row of features (synthetic kinds only)."""
        if self.theta_star is None:
            raise ValueError("classification rewards come from labels, not features")
        inner = features @ self.theta_star
        if self.kind is RewardKind.LINEAR:
            return inner
        if self.kind is RewardKind.QUADRATIC:
            return inner**2
        return (1.0 + np.cos(3.0 * np.pi * inner)) / 2.0


class ContextSet(BaseModel):
    """The K arm contexts of one round with their hidden expected rewards.

    Every row has unit norm and equal halves.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t: int = Field(ge=1)
    features: np.ndarray
    rewards: np.ndarray
    noise: float = Field(default=0.0, ge=0.0)

    @model_validator(mode="after")
    def _check_assumption(self) -> "ContextSet":
        if self.features.ndim != 2 or self.features.shape[0] == 0:
            raise ValueError("a round needs at least one arm context")
        k, d = self.features.shape
        if d % 2:
            raise ValueError(f"context dimension must be even, got {d}")
        if self.rewards.shape != (k,):
            raise ValueError(f"expected {k} rewards, got shape {self.rewards.shape}")
        norms = np.linalg.norm(self.features, axis=1)
        if np.any(np.abs(norms - 1.0) > ASSUMPTION_TOL):
            raise ValueError("arm contexts must have unit norm")
        if np.any(np.abs(self.features[:, : d // 2] - self.features[:, d // 2 :]) > ASSUMPTION_TOL):
            raise ValueError("arm contexts must have equal halves")
        self.features.flags.writeable = False
        self.rewards.flags.writeable = False
        return self

    @property
    def n_arms(self) -> int:
        return int(self.features.shape[0])

    @property
    def dim(self) -> int:
        return int(self.features.shape[1])

    @property
    def optimal_arm(self) -> int:
        return int(np.argmax(self.rewards))

    @property
    def optimal_reward(self) -> float:
        return float(self.rewards.max())

    def regret(self, arm: int) -> float:
        """Expected-reward gap of arm to the best arm."""
        return self.optimal_reward - float(self.rewards[arm])
