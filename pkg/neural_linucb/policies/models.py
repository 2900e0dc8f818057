from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from neural_linucb.explorer.models import AlphaSchedule
from neural_linucb.network.models import HistoryMode, NetworkShape, TrainConfig


class Algorithm(str, Enum):
    """Agent tags as they appear in configs and artifact names."""

    NEURAL_LINUCB = "neural-linucb"
    LINUCB = "linucb"
    NEURALUCB_DIAG = "neuralucb-diag"
    NEURAL_LINEAR = "neural-linear"
    UNIFORM = "uniform"

    @property
    def is_neural(self) -> bool:
        return self in (Algorithm.NEURAL_LINUCB, Algorithm.NEURALUCB_DIAG, Algorithm.NEURAL_LINEAR)


class AgentConfig(BaseModel):
    """Everything an agent needs besides the context stream."""

    model_config = ConfigDict(frozen=True)

    algorithm: Algorithm
    n_arms: int = Field(ge=1)
    dim: int = Field(gt=0)
    epoch_length: int = Field(default=100, ge=1)
    alpha: AlphaSchedule = Field(default_factory=lambda: AlphaSchedule.fixed(0.02))
    lam: float = Field(default=1.0, gt=0.0)
    width: int = Field(default=128, gt=0)
    depth: int = Field(default=2, ge=2)
    train: TrainConfig = Field(default_factory=TrainConfig)
    warm_start_pulls: int = Field(default=3, ge=0)
    # feed warm-start rounds into the ridge statistics
    warm_start_updates: bool = True
    # None: on for agents with a learned representation, off otherwise
    shrink_to_init: bool | None = None
    seed: int = 0

    @property
    def network_shape(self) -> NetworkShape:
        return NetworkShape(input_dim=self.dim, width=self.width, depth=self.depth)

    @property
    def warm_start_rounds(self) -> int:
        return self.warm_start_pulls * self.n_arms

    @property
    def shrinks_to_init(self) -> bool:
        if self.shrink_to_init is None:
            return self.algorithm.is_neural
        return self.shrink_to_init


@dataclass
class ReplayBuffer:
    """Observed (context, reward, theta label, round) tuples in arrival order."""

    contexts: list[np.ndarray] = field(default_factory=list)
    rewards: list[float] = field(default_factory=list)
    thetas: list[np.ndarray] = field(default_factory=list)
    rounds: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rewards)

    def append(self, x: np.ndarray, reward: float, theta: np.ndarray, t: int) -> None:
        self.contexts.append(x)
        self.rewards.append(reward)
        self.thetas.append(theta)
        self.rounds.append(t)

    def _select(self, mode: HistoryMode, t: int, epoch_length: int) -> list[int]:
        if mode is HistoryMode.FULL:
            return list(range(len(self)))
        return [i for i, s in enumerate(self.rounds) if t - epoch_length < s <= t]

    def labelled(
        self, mode: HistoryMode, t: int, epoch_length: int
    ) -> list[tuple[np.ndarray, float, np.ndarray]]:
        """(x_i, r_i, theta_i) triples for retraining at round t."""
        return [
            (self.contexts[i], self.rewards[i], self.thetas[i])
            for i in self._select(mode, t, epoch_length)
        ]

    def unlabelled(
        self, mode: HistoryMode, t: int, epoch_length: int
    ) -> list[tuple[np.ndarray, float]]:
        return [(self.contexts[i], self.rewards[i]) for i in self._select(mode, t, epoch_length)]
