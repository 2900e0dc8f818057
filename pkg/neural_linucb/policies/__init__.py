from neural_linucb.policies.base import BaseAgent
from neural_linucb.policies.factory import AGENTS, make_agent
from neural_linucb.policies.linucb import LinUCBAgent
from neural_linucb.policies.models import AgentConfig, Algorithm, ReplayBuffer
from neural_linucb.policies.neural_linear import NeuralLinearAgent
from neural_linucb.policies.neural_linucb import NeuralLinUCBAgent
from neural_linucb.policies.neuralucb_diag import NeuralUCBDiagAgent
from neural_linucb.policies.representation import RepresentationAgent
from neural_linucb.policies.uniform import UniformAgent

__all__ = [
    "AGENTS",
    "AgentConfig",
    "Algorithm",
    "BaseAgent",
    "LinUCBAgent",
    "NeuralLinUCBAgent",
    "NeuralLinearAgent",
    "NeuralUCBDiagAgent",
    "ReplayBuffer",
    "RepresentationAgent",
    "UniformAgent",
    "make_agent",
]
