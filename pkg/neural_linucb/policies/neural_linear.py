import numpy as np

from neural_linucb.environments.models import ContextSet
from neural_linucb.explorer.ridge import alpha_at
from neural_linucb.network.models import NetworkParams
from neural_linucb.policies.models import AgentConfig
from neural_linucb.policies.representation import FeatureMap, RepresentationAgent


class NeuralLinearAgent(RepresentationAgent):
    """Posterior sampling on the last layer: theta~ ~ N(theta, alpha^2 A^-1), greedy on theta~."""

    def __init__(
        self,
        config: AgentConfig,
        *,
        params: NetworkParams | None = None,
        feature_map: FeatureMap | None = None,
    ) -> None:
        super().__init__(config, params=params, feature_map=feature_map)
        self.rng = np.random.default_rng(self._sampling_seed)

    def sample_theta(self, alpha: float) -> np.ndarray:
        if alpha == 0:
            return np.asarray(self.ridge.theta)
        return self.rng.multivariate_normal(
            self.ridge.theta, alpha**2 * self.ridge.a_inv, method="cholesky"
        )

    def scores(self, contexts: ContextSet) -> np.ndarray:
        theta = self.sample_theta(alpha_at(self.config.alpha, contexts.t))
        return self.features(contexts.features) @ theta
