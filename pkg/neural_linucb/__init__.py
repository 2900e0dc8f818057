from neural_linucb._version import __version__
from neural_linucb.exceptions import (
    ArtifactError,
    BanditConfigError,
    BanditError,
    ConvergenceError,
    DatasetError,
    DimensionError,
    NumericalError,
    RunError,
    TrainingDivergedError,
)
from neural_linucb.policies import Algorithm, make_agent

__all__ = [
    "__version__",
    "Algorithm",
    "make_agent",
    "BanditError",
    "BanditConfigError",
    "DimensionError",
    "NumericalError",
    "TrainingDivergedError",
    "ConvergenceError",
    "DatasetError",
    "RunError",
    "ArtifactError",
]
