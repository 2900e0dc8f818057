from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from neural_linucb.harness.models import RegretTrace


class BanditError(Exception):
    """Base exception for all neural_linucb errors."""

    pass


class BanditConfigError(BanditError):
    """Raised when a configuration or parameter set is invalid."""

    pass


class DimensionError(BanditError):
    """Vector or matrix size does not match what the model expects."""

    def __init__(
        self, message: str, expected: int | None = None, actual: int | None = None
    ) -> None:
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class NumericalError(BanditError):
    """Non-finite values or a broken positive-definiteness invariant."""

    def __init__(self, message: str, quantity: str | None = None) -> None:
        super().__init__(message)
        self.quantity = quantity


class TrainingDivergedError(NumericalError):
    """Gradient descent produced a non-finite loss or gradient."""

    def __init__(self, message: str, iteration: int, losses: list[float]) -> None:
        super().__init__(message, quantity="loss")
        self.iteration = iteration
        self.losses = losses


class ConvergenceError(BanditError):
    """An iterative solver reached its iteration cap."""

    def __init__(self, message: str, iterations: int) -> None:
        super().__init__(message)
        self.iterations = iterations


class DatasetError(BanditError):
    """Dataset file, manifest or label problems."""

    def __init__(
        self,
        message: str,
        path: Path | str | None = None,
        line_number: int | None = None,
    ) -> None:
        super().__init__(message)
        self.path = Path(path) if path is not None else None
        self.line_number = line_number


class RunError(BanditError):
    """A bandit run aborted; carries the trace recorded so far."""

    def __init__(
        self,
        message: str,
        trace: "RegretTrace | None" = None,
        cause: Exception | None = None,
    ) -> None:
        super().__init__(message)
        self.trace = trace
        self.__cause__ = cause


class ArtifactError(BanditError):
    """A result file could not be written or read back."""

    def __init__(self, message: str, path: Path | str | None = None) -> None:
        super().__init__(message)
        self.path = Path(path) if path is not None else None
