"""Empirical gradient Gram of the initialized network against its kernel limit.

On inputs with equal halves the network output vanishes at initialization,
so the theta block of the gradient is zero and only the hidden weights
contribute. The (1/m)-scaled Gram of those gradients converges, as m grows,
to ||theta_0||^2 * sigma_tilde^(L-1)(x, y) for a network with L weight layers.
"""

import logging
import math
from collections.abc import Iterable, Sequence

import numpy as np
from pydantic import ValidationError

from neural_linucb.exceptions import BanditConfigError
from neural_linucb.network.mlp import grad_f_batch, init_params
from neural_linucb.network.models import NetworkParams, NetworkShape
from neural_linucb.ntk.kernel import UNIT_TOL, kernel_levels
from neural_linucb.ntk.models import GramError

logger = logging.getLogger(__name__)


def _check_points(points: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    d = points.shape[1]
    if d % 2 or np.any(np.abs(points[:, : d // 2] - points[:, d // 2 :]) > UNIT_TOL):
        raise BanditConfigError("gram convergence needs inputs with two equal halves")
    return points


def empirical_gram(params: NetworkParams, points: np.ndarray) -> np.ndarray:
    """Psi Psi^T with rows psi_i = grad_beta f(x_i) / sqrt(m)."""
    _, grads = grad_f_batch(params, points)
    psi = grads / math.sqrt(params.shape.width)
    return psi @ psi.T


def limit_gram(points: np.ndarray, depth: int, theta: np.ndarray) -> np.ndarray:
    """Infinite-width limit of empirical_gram for a depth-layer network with last layer theta."""
    _, sigma_tilde = kernel_levels(points, depth - 1)
    return float(theta @ theta) * sigma_tilde[-1]


def gram_convergence(
    points: np.ndarray,
    depth: int,
    widths: Iterable[int],
    seeds: Sequence[int],
) -> list[GramError]:
    """Frobenius error of the empirical Gram to its limit for every (width, seed)."""
    points = _check_points(points)
    rows = []
    for width in widths:
        try:
            shape = NetworkShape(input_dim=points.shape[1], width=width, depth=depth)
        except ValidationError as e:
            raise BanditConfigError(f"width {width}: {e.errors()[0]['msg']}") from e
        for seed in seeds:
            params = init_params(shape, seed)
            error = np.linalg.norm(
                empirical_gram(params, points) - limit_gram(points, depth, params.theta)
            )
            rows.append(GramError(width=width, seed=seed, frob_error=float(error)))
        logger.debug("gram error at width %d: %.4g", width, mean_errors(rows)[width])
    return rows


def mean_errors(rows: Iterable[GramError]) -> dict[int, float]:
    """Mean Frobenius error per width."""
    by_width: dict[int, list[float]] = {}
    for row in rows:
        by_width.setdefault(row.width, []).append(row.frob_error)
    return {width: float(np.mean(errors)) for width, errors in by_width.items()}
