import numpy as np

from neural_linucb.environments.models import ContextSet
from neural_linucb.policies.base import BaseAgent
from neural_linucb.policies.models import AgentConfig
from neural_linucb.policies.representation import spawn_seeds


class UniformAgent(BaseAgent):
    """Pulls an arm uniformly at random after the warm start."""

    def __init__(self, config: AgentConfig) -> None:
        super().__init__(config)
        _, sampling_seed = spawn_seeds(config.seed)
        self.rng = np.random.default_rng(sampling_seed)

    def _choose(self, contexts: ContextSet) -> int:
        return int(self.rng.integers(self.n_arms))

    def _observe(self, contexts: ContextSet, arm: int, reward: float, *, update: bool) -> None:
        pass
