import numpy as np

from neural_linucb.environments.models import ContextSet
from neural_linucb.explorer.ridge import alpha_at, ucb_scores
from neural_linucb.policies.representation import RepresentationAgent


class NeuralLinUCBAgent(RepresentationAgent):
    """UCB on the last layer: theta^T phi + alpha_t * ||phi||_{A^-1} over phi(x; w)."""

    def scores(self, contexts: ContextSet) -> np.ndarray:
        alpha = alpha_at(self.config.alpha, contexts.t)
        return ucb_scores(self.ridge, self.features(contexts.features), alpha)
