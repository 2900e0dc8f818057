import numpy as np

from neural_linucb.environments.models import ContextSet
from neural_linucb.explorer.models import RidgeState
from neural_linucb.explorer.ridge import alpha_at, ridge_init, ridge_update, ucb_score
from neural_linucb.policies.base import BaseAgent
from neural_linucb.policies.models import AgentConfig


class LinUCBAgent(BaseAgent):
    """LinUCB on the contexts themselves.

    Disjoint mode keeps one ridge model per arm and only updates the pulled
    arm's model; otherwise a single model is shared by all arms.
    """

    def __init__(self, config: AgentConfig, *, disjoint: bool = True) -> None:
        super().__init__(config)
        self.disjoint = disjoint
        shrink = config.shrinks_to_init
        self.models: list[RidgeState] = [
            ridge_init(config.dim, config.lam, shrink_to_init=shrink)
            for _ in range(config.n_arms if disjoint else 1)
        ]

    def model_for(self, arm: int) -> RidgeState:
        return self.models[arm if self.disjoint else 0]

    def scores(self, contexts: ContextSet) -> np.ndarray:
        alpha = alpha_at(self.config.alpha, contexts.t)
        return np.array(
            [ucb_score(self.model_for(k), contexts.features[k], alpha) for k in range(self.n_arms)]
        )

    def _observe(self, contexts: ContextSet, arm: int, reward: float, *, update: bool) -> None:
        if not update:
            return
        index = arm if self.disjoint else 0
        self.models[index] = ridge_update(self.models[index], contexts.features[arm], reward)
