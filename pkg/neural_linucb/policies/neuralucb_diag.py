import numpy as np

from neural_linucb.environments.models import ContextSet
from neural_linucb.explorer.ridge import alpha_at
from neural_linucb.network.mlp import grad_f_batch, init_params
from neural_linucb.network.models import NetworkParams
from neural_linucb.network.training import train_full
from neural_linucb.policies.base import BaseAgent
from neural_linucb.policies.models import AgentConfig, ReplayBuffer
from neural_linucb.policies.representation import spawn_seeds


class NeuralUCBDiagAgent(BaseAgent):
    """UCB over the whole network gradient with a diagonal design matrix.

    Score f(x) + alpha_t * sqrt(sum_j g_j^2 / (m z_j)) with g the gradient of f
    with respect to (theta, w); z starts at lam and grows by g^2 / m for each
    pulled arm. The network (theta included) is retrained on the squared error
    of f at epoch boundaries.
    """

    def __init__(self, config: AgentConfig, *, params: NetworkParams | None = None) -> None:
        super().__init__(config)
        init_seed, _ = spawn_seeds(config.seed)
        self.initial_params = params or init_params(config.network_shape, init_seed)
        self.params = self.initial_params
        self.z = np.full(config.dim + config.network_shape.num_weights, config.lam)
        self.buffer = ReplayBuffer()
        self._cached: tuple[int, np.ndarray] | None = None

    def scores(self, contexts: ContextSet) -> np.ndarray:
        values, grads = grad_f_batch(self.params, contexts.features)
        self._cached = (contexts.t, grads)
        width = self.config.width
        bonus = np.sqrt(np.sum(grads**2 / (width * self.z), axis=1))
        return values + alpha_at(self.config.alpha, contexts.t) * bonus

    def _gradient(self, contexts: ContextSet, arm: int) -> np.ndarray:
        if self._cached is not None and self._cached[0] == contexts.t:
            return self._cached[1][arm]
        _, grads = grad_f_batch(self.params, contexts.features[arm])
        return grads[0]

    def _observe(self, contexts: ContextSet, arm: int, reward: float, *, update: bool) -> None:
        if update:
            self.z += self._gradient(contexts, arm) ** 2 / self.config.width
        self._cached = None
        self.buffer.append(contexts.features[arm], reward, self.params.theta, contexts.t)

    def _retrain(self, t: int) -> bool:
        train = self.config.train
        data = self.buffer.unlabelled(train.history_mode, t, self.config.epoch_length)
        if not data:
            return False
        start = self.initial_params if train.restart_from_init else self.params
        self.params = train_full(start, data, train).params
        return True
