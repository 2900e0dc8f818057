import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

SYMMETRY_RTOL = 1e-12


class KernelPair(BaseModel):
    """Kernel recursion for one pair of inputs, levels 0..depth.

    sigma holds Sigma^(l)(x, y), sigma_xx and sigma_yy the diagonal values
    Sigma^(l)(x, x) and Sigma^(l)(y, y), sigma_dot the derivative kernel at
    levels 1..depth and sigma_tilde the accumulated tangent kernel.
    """

    model_config = ConfigDict(frozen=True)

    depth: int = Field(ge=0)
    sigma: tuple[float, ...]
    sigma_xx: tuple[float, ...]
    sigma_yy: tuple[float, ...]
    sigma_dot: tuple[float, ...]
    sigma_tilde: tuple[float, ...]

    @model_validator(mode="after")
    def _check_levels(self) -> "KernelPair":
        levels = self.depth + 1
        for name in ("sigma", "sigma_xx", "sigma_yy", "sigma_tilde"):
            if len(getattr(self, name)) != levels:
                raise ValueError(f"{name} needs {levels} levels")
        if len(self.sigma_dot) != self.depth:
            raise ValueError(f"sigma_dot needs {self.depth} levels")
        return self

    @property
    def ntk(self) -> float:
        """H(x, y) = (sigma_tilde^(L) + sigma^(L)) / 2."""
        return 0.5 * (self.sigma_tilde[-1] + self.sigma[-1])


class NTKGram(BaseModel):
    """N x N tangent kernel matrix over a set of unit inputs."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    depth: int = Field(ge=0)
    matrix: np.ndarray

    @model_validator(mode="after")
    def _check_symmetric(self) -> "NTKGram":
        h = self.matrix
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"gram matrix must be square, got shape {h.shape}")
        if not np.isfinite(h).all():
            raise ValueError("gram matrix has non-finite entries")
        scale = max(float(np.abs(h).max(initial=0.0)), 1.0)
        if np.abs(h - h.T).max(initial=0.0) > SYMMETRY_RTOL * scale:
            raise ValueError("gram matrix must be symmetric")
        h.flags.writeable = False
        return self

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])


class MonteCarloEstimate(BaseModel):
    """Sample means of relu(u) relu(v) and relu'(u) relu'(v) with their standard errors."""

    model_config = ConfigDict(frozen=True)

    relu: float
    relu_se: float = Field(ge=0.0)
    step: float
    step_se: float = Field(ge=0.0)
    samples: int = Field(gt=1)


class GramError(BaseModel):
    """Frobenius distance of one empirical gradient Gram to its kernel limit."""

    model_config = ConfigDict(frozen=True)

    width: int
    seed: int
    frob_error: float = Field(ge=0.0)
