import logging
import math
from abc import ABC, abstractmethod

import numpy as np

from neural_linucb.environments.models import ContextSet
from neural_linucb.exceptions import BanditConfigError, DimensionError, NumericalError
from neural_linucb.policies.models import AgentConfig

logger = logging.getLogger(__name__)


class BaseAgent(ABC):
    """Select arm, observe reward, retrain at epoch boundaries.

    Rounds are numbered from 1. The first warm_start_pulls * K rounds pull
    arms round-robin, arm (t - 1) mod K at round t. Afterwards the arm with
    the highest score wins, ties going to the lowest index.
    """

    def __init__(self, config: AgentConfig) -> None:
        self.config = config
        self.retrain_count = 0

    @property
    def n_arms(self) -> int:
        return self.config.n_arms

    def in_warm_start(self, t: int) -> bool:
        return t <= self.config.warm_start_rounds

    def _check_contexts(self, contexts: ContextSet) -> None:
        if contexts.n_arms != self.n_arms or contexts.dim != self.config.dim:
            raise DimensionError(
                f"round {contexts.t} has {contexts.n_arms} arms of dimension {contexts.dim}, "
                f"agent expects {self.n_arms} of dimension {self.config.dim}"
            )

    def select_arm(self, contexts: ContextSet) -> int:
        self._check_contexts(contexts)
        if self.in_warm_start(contexts.t):
            return (contexts.t - 1) % self.n_arms
        return self._choose(contexts)

    def _choose(self, contexts: ContextSet) -> int:
        return int(np.argmax(self.scores(contexts)))

    def scores(self, contexts: ContextSet) -> np.ndarray:
        """Per-arm selection scores at round contexts.t."""
        raise NotImplementedError(f"{type(self).__name__} does not score arms")

    def observe(self, contexts: ContextSet, arm: int, reward: float) -> None:
        self._check_contexts(contexts)
        if not 0 <= arm < self.n_arms:
            raise DimensionError(f"arm {arm} out of range for {self.n_arms} arms")
        if not math.isfinite(reward):
            raise NumericalError(f"non-finite reward {reward} at round {contexts.t}", "reward")
        warm = self.in_warm_start(contexts.t)
        self._observe(contexts, arm, reward, update=not warm or self.config.warm_start_updates)

    @abstractmethod
    def _observe(self, contexts: ContextSet, arm: int, reward: float, *, update: bool) -> None: ...

    def maybe_retrain(self, t: int) -> bool:
        """Retrain when t closes an epoch; returns whether training ran."""
        if t < 1:
            raise BanditConfigError(f"round index must be at least 1, got {t}")
        if t % self.config.epoch_length:
            return False
        if not self._retrain(t):
            return False
        self.retrain_count += 1
        logger.debug("%s retrained at round %d", self.config.algorithm.value, t)
        return True

    def _retrain(self, t: int) -> bool:
        return False
