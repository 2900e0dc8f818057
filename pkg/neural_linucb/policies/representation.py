from collections.abc import Callable

import numpy as np

from neural_linucb.environments.models import ContextSet
from neural_linucb.explorer.ridge import ridge_init, ridge_update
from neural_linucb.network.mlp import init_params, phi_batch
from neural_linucb.network.models import NetworkParams
from neural_linucb.network.training import train_epoch
from neural_linucb.policies.base import BaseAgent
from neural_linucb.policies.models import AgentConfig, ReplayBuffer

FeatureMap = Callable[[np.ndarray], np.ndarray]


def spawn_seeds(seed: int) -> tuple[int, np.random.SeedSequence]:
    """Network initialization seed and the agent's own sampling stream."""
    init_seq, sampling_seq = np.random.SeedSequence(seed).spawn(2)
    return int(init_seq.generate_state(1)[0]), sampling_seq


class RepresentationAgent(BaseAgent):
    """Shared state of agents that explore on the last layer of a trained network.

    Keeps the initial and current network, the ridge state over phi(x; w) and
    the replay buffer. Hidden weights only change in maybe_retrain, so every
    round of an epoch sees the same feature map.
    """

    def __init__(
        self,
        config: AgentConfig,
        *,
        params: NetworkParams | None = None,
        feature_map: FeatureMap | None = None,
    ) -> None:
        super().__init__(config)
        init_seed, self._sampling_seed = spawn_seeds(config.seed)
        self.initial_params = params or init_params(config.network_shape, init_seed)
        self.params = self.initial_params
        self._feature_map = feature_map
        self.ridge = ridge_init(
            config.dim,
            config.lam,
            self.initial_params.theta,
            shrink_to_init=config.shrinks_to_init,
        )
        self.buffer = ReplayBuffer()

    def features(self, xs: np.ndarray) -> np.ndarray:
        """phi(x; w) under the current hidden weights, one row per context."""
        if self._feature_map is not None:
            return np.atleast_2d(self._feature_map(np.atleast_2d(xs)))
        return phi_batch(self.params, xs)

    def _observe(self, contexts: ContextSet, arm: int, reward: float, *, update: bool) -> None:
        x = contexts.features[arm]
        if update:
            self.ridge = ridge_update(self.ridge, self.features(x)[0], reward)
        self.buffer.append(x, reward, self.ridge.theta, contexts.t)

    def _retrain(self, t: int) -> bool:
        if self._feature_map is not None:
            return False
        train = self.config.train
        data = self.buffer.labelled(train.history_mode, t, self.config.epoch_length)
        if not data:
            return False
        start = self.initial_params if train.restart_from_init else self.params
        self.params = train_epoch(start, data, train).params
        return True
