from neural_linucb.policies.base import BaseAgent
from neural_linucb.policies.linucb import LinUCBAgent
from neural_linucb.policies.models import AgentConfig, Algorithm
from neural_linucb.policies.neural_linear import NeuralLinearAgent
from neural_linucb.policies.neural_linucb import NeuralLinUCBAgent
from neural_linucb.policies.neuralucb_diag import NeuralUCBDiagAgent
from neural_linucb.policies.uniform import UniformAgent

AGENTS: dict[Algorithm, type[BaseAgent]] = {
    Algorithm.NEURAL_LINUCB: NeuralLinUCBAgent,
    Algorithm.LINUCB: LinUCBAgent,
    Algorithm.NEURALUCB_DIAG: NeuralUCBDiagAgent,
    Algorithm.NEURAL_LINEAR: NeuralLinearAgent,
    Algorithm.UNIFORM: UniformAgent,
}


def make_agent(config: AgentConfig) -> BaseAgent:
    return AGENTS[config.algorithm](config)
