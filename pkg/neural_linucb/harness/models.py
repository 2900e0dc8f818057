import hashlib
import json
from enum import Enum
from pathlib import Path
from typing import Any, ClassVar

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from neural_linucb.environments.models import SYNTHETIC_KINDS, DatasetSpec, RewardKind
from neural_linucb.explorer.models import AlphaMode, AlphaSchedule
from neural_linucb.network.models import HistoryMode, TrainConfig
from neural_linucb.policies.base import BaseAgent
from neural_linucb.policies.models import AgentConfig, Algorithm

SYNTHETIC_PREFIX = "synthetic:"

def _digest(payload: dict[str, Any]) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


TRACE_COLUMNS = ("t", "arm", "reward", "inst_regret", "cum_regret", "epoch", "wall_ms")
AGGREGATE_COLUMNS = ("t", "mean", "std", "n")
TRACE_DTYPES = {
    "t": "int64",
    "arm": "int64",
    "reward": "float64",
    "inst_regret": "float64",
    "cum_regret": "float64",
    "epoch": "int64",
    "wall_ms": "float64",
}
AGGREGATE_DTYPES = {"t": "int64", "mean": "float64", "std": "float64", "n": "int64"}

# keys that do not change what a run computes
_UNHASHED = {"output_dir", "workers", "checkpoint_every"}


class Profile(str, Enum):
    DESK = "desk"
    FULL = "full"


PROFILE_DEFAULTS: dict[Profile, dict[str, Any]] = {
    Profile.DESK: {
        "horizon": 3000,
        "epoch_length": 100,
        "width": 128,
        "depth": 2,
        "max_iter": 200,
        "step_size": 1e-5,
        "early_stop": 1e-6,
        "lam": 1.0,
        "alpha": 0.02,
    },
    Profile.FULL: {
        "horizon": 15000,
        "epoch_length": 100,
        "width": 2000,
        "depth": 2,
        "max_iter": 1000,
        "step_size": 1e-5,
        "early_stop": 1e-6,
        "lam": 1.0,
        "alpha": 0.02,
    },
}


class ExperimentConfig(BaseModel):
    """One experiment: an environment, the agents to compare and their shared settings.

    Keys left unset take the defaults of the selected profile.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    profile: Profile = Profile.DESK
    environment: str
    dataset_path: Path | None = None
    manifest_path: Path | None = None
    # unset detects a header line in the dataset file
    dataset_header: bool | None = None
    synthetic_dim: int = Field(default=8, ge=1)
    synthetic_arms: int = Field(default=4, ge=1)
    noise: float = Field(default=0.1, ge=0.0)
    algorithms: tuple[Algorithm, ...] = (
        Algorithm.NEURAL_LINUCB,
        Algorithm.LINUCB,
        Algorithm.NEURALUCB_DIAG,
        Algorithm.NEURAL_LINEAR,
    )
    horizon: int = Field(ge=1)
    epoch_length: int = Field(ge=1)
    width: int = Field(gt=0)
    depth: int = Field(ge=2)
    lam: float = Field(gt=0.0)
    alpha: float = Field(ge=0.0)
    alpha_mode: AlphaMode = AlphaMode.FIXED
    alpha_nu: float = Field(default=1.0, ge=0.0)
    alpha_delta: float = Field(default=0.1, gt=0.0, lt=1.0)
    alpha_bound: float = Field(default=1.0, ge=0.0)
    step_size: float = Field(ge=0.0)
    max_iter: int = Field(ge=0)
    early_stop: float = Field(ge=0.0)
    history_mode: HistoryMode = HistoryMode.FULL
    restart_from_init: bool = True
    warm_start_pulls: int = Field(default=3, ge=0)
    warm_start_updates: bool = True
    shrink_to_init: bool | None = None
    repetitions: int = Field(default=10, ge=1)
    base_seed: int = 0
    output_dir: Path = Path("runs")
    workers: int = Field(default=1, ge=1)
    cycle: bool = False
    save_weights: bool = False
    # rounds between run checkpoints; 0 disables them
    checkpoint_every: int = Field(default=0, ge=0)

    @model_validator(mode="before")
    @classmethod
    def _apply_profile(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        profile = Profile(data.get("profile") or Profile.DESK)
        return {**PROFILE_DEFAULTS[profile], **{k: v for k, v in data.items() if v is not None}}

    @field_validator("algorithms", mode="before")
    @classmethod
    def _split_algorithms(cls, value: Any) -> Any:
        if isinstance(value, str):
            return tuple(part.strip() for part in value.split(",") if part.strip())
        return value

    @field_validator("algorithms")
    @classmethod
    def _check_algorithms(cls, value: tuple[Algorithm, ...]) -> tuple[Algorithm, ...]:
        if not value:
            raise ValueError("at least one algorithm is required")
        if len(set(value)) != len(value):
            raise ValueError("algorithms must not repeat")
        return value

    @field_validator("environment")
    @classmethod
    def _check_environment(cls, value: str) -> str:
        value = value.strip()
        if value.startswith(SYNTHETIC_PREFIX):
            kind = value.removeprefix(SYNTHETIC_PREFIX)
            if kind not in {k.value for k in SYNTHETIC_KINDS}:
                raise ValueError(f"unknown synthetic reward kind {kind!r}")
        elif not value:
            raise ValueError("environment must name a dataset or synthetic:<kind>")
        return value

    @property
    def synthetic_kind(self) -> RewardKind | None:
        if not self.environment.startswith(SYNTHETIC_PREFIX):
            return None
        return RewardKind(self.environment.removeprefix(SYNTHETIC_PREFIX))

    @property
    def config_hash(self) -> str:
        """SHA-256 over every key that affects results."""
        return _digest(self.model_dump(mode="json", exclude=_UNHASHED))

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            step_size=self.step_size,
            max_iter=self.max_iter,
            early_stop=self.early_stop,
            history_mode=self.history_mode,
            restart_from_init=self.restart_from_init,
        )

    def alpha_schedule(self, n_arms: int, dim: int) -> AlphaSchedule:
        return AlphaSchedule(
            mode=self.alpha_mode,
            alpha=self.alpha,
            nu=self.alpha_nu,
            dim=dim,
            epoch_length=self.epoch_length,
            n_arms=n_arms,
            lam=self.lam,
            delta=self.alpha_delta,
            bound=self.alpha_bound,
        )

    def agent_config(self, algorithm: Algorithm, n_arms: int, dim: int, seed: int) -> AgentConfig:
        return AgentConfig(
            algorithm=algorithm,
            n_arms=n_arms,
            dim=dim,
            epoch_length=self.epoch_length,
            alpha=self.alpha_schedule(n_arms, dim),
            lam=self.lam,
            width=self.width,
            depth=self.depth,
            train=self.train_config(),
            warm_start_pulls=self.warm_start_pulls,
            warm_start_updates=self.warm_start_updates,
            shrink_to_init=self.shrink_to_init,
            seed=seed,
        )


class NTKSettings(BaseModel):
    """Inputs of one ``ntk`` command; its hash is stamped on gram.csv and gram_sweep.csv."""

    model_config = ConfigDict(frozen=True)

    depth: int = Field(ge=1)
    widths: tuple[int, ...] = ()
    seeds: int = Field(default=5, ge=1)
    preprocess: bool = False
    points_sha256: str

    @classmethod
    def for_points(cls, points: np.ndarray, **values: Any) -> "NTKSettings":
        raw = np.ascontiguousarray(points, dtype=np.float64)
        digest = hashlib.sha256(str(raw.shape).encode() + raw.tobytes()).hexdigest()
        return cls(points_sha256=digest, **values)

    @property
    def config_hash(self) -> str:
        return _digest(self.model_dump(mode="json"))


class ResolvedEnvironment(BaseModel):
    """What a validated config runs against."""

    model_config = ConfigDict(frozen=True)

    name: str
    kind: RewardKind
    n_arms: int = Field(ge=1)
    dim: int = Field(gt=0)
    path: Path | None = None
    spec: DatasetSpec | None = None
    header: bool | None = None


class _Frame(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    columns: ClassVar[tuple[str, ...]] = ()

    algorithm: str
    config_hash: str
    frame: pd.DataFrame

    @model_validator(mode="after")
    def _check_columns(self) -> "_Frame":
        if tuple(self.frame.columns) != self.columns:
            raise ValueError(f"expected columns {self.columns}, got {tuple(self.frame.columns)}")
        return self

    def __len__(self) -> int:
        return len(self.frame)


class RegretTrace(_Frame):
    """Per-round record of one run: t, arm, reward, inst_regret, cum_regret, epoch, wall_ms."""

    columns = TRACE_COLUMNS

    seed: int

    @classmethod
    def from_rows(
        cls, rows: list[tuple[Any, ...]], *, algorithm: str, seed: int, config_hash: str
    ) -> "RegretTrace":
        frame = pd.DataFrame(rows, columns=list(TRACE_COLUMNS))
        frame = frame.astype(TRACE_DTYPES)
        return cls(algorithm=algorithm, seed=seed, config_hash=config_hash, frame=frame)

    @property
    def final_regret(self) -> float:
        return float(self.frame["cum_regret"].iloc[-1]) if len(self) else 0.0


class RegretAggregate(_Frame):
    """Mean and standard deviation of cumulative regret per round over runs."""

    columns = AGGREGATE_COLUMNS

    @property
    def n_runs(self) -> int:
        return int(self.frame["n"].max()) if len(self) else 0


class RunFailure(BaseModel):
    model_config = ConfigDict(frozen=True)

    algorithm: str
    seed: int
    message: str
    rounds_completed: int


class SuiteResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    config_hash: str
    output_dir: Path
    traces: list[Path]
    aggregates: list[RegretAggregate]
    failures: list[RunFailure] = Field(default_factory=list)


TraceRow = tuple[int, int, float, float, float, int, float]


class RunCheckpoint(BaseModel):
    """State of a run after `round` rounds: agent, reward-noise generator and rows so far."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    algorithm: str
    seed: int
    config_hash: str
    round: int = Field(ge=0)
    agent: BaseAgent
    rng_state: dict[str, Any]
    rows: list[TraceRow]

    @model_validator(mode="after")
    def _check_rows(self) -> "RunCheckpoint":
        if len(self.rows) != self.round:
            raise ValueError(f"checkpoint at round {self.round} holds {len(self.rows)} rows")
        return self
