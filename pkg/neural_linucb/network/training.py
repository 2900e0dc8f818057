import logging
import math
from collections.abc import Callable, Sequence

import numpy as np

from neural_linucb.exceptions import BanditConfigError, DimensionError, TrainingDivergedError
from neural_linucb.network.mlp import ForwardCache, forward
from neural_linucb.network.models import NetworkParams, TrainConfig, TrainResult

logger = logging.getLogger(__name__)

TrainingDatum = tuple[np.ndarray, float, np.ndarray]

# (params) -> (loss, weight gradients, theta gradient or None)
_Objective = Callable[[NetworkParams], tuple[float, list[np.ndarray], np.ndarray | None]]


def _summed_grads(
    params: NetworkParams,
    cache: ForwardCache,
    upstream: np.ndarray,
) -> list[np.ndarray]:
    """Gradients of sum_i upstream_i^T phi(x_i) with respect to each W_l."""
    delta = math.sqrt(params.shape.width) * upstream * cache.active[-1]
    grads: list[np.ndarray] = [np.empty(0)] * len(params.weights)
    for layer in range(len(params.weights) - 1, -1, -1):
        grads[layer] = delta.T @ cache.hidden[layer]
        if layer > 0:
            delta = (delta @ params.weights[layer]) * cache.active[layer - 1]
    return grads


def _descend(
    params0: NetworkParams,
    objective: _Objective,
    cfg: TrainConfig,
) -> TrainResult:
    params = params0
    loss, grads, theta_grad = objective(params)
    losses = [loss]
    stopped_early = False
    for step in range(1, cfg.max_iter + 1):
        if not math.isfinite(loss) or not all(np.isfinite(g).all() for g in grads):
            raise TrainingDivergedError(
                f"non-finite loss or gradient at iteration {step - 1} (loss={loss})",
                iteration=step - 1,
                losses=losses,
            )
        weights = [w - cfg.step_size * g for w, g in zip(params.weights, grads)]
        params = params.with_weights(weights)
        if theta_grad is not None:
            params = params.with_theta(params.theta - cfg.step_size * theta_grad)

        previous = loss
        loss, grads, theta_grad = objective(params)
        losses.append(loss)
        if not math.isfinite(loss):
            raise TrainingDivergedError(
                f"non-finite loss at iteration {step}", iteration=step, losses=losses
            )
        if abs(loss - previous) < cfg.early_stop:
            stopped_early = True
            break

    logger.debug(
        "trained %d iterations: loss %.6g -> %.6g%s",
        len(losses) - 1,
        losses[0],
        losses[-1],
        " (early stop)" if stopped_early else "",
    )
    return TrainResult(params=params, losses=losses, stopped_early=stopped_early)


def _stack(params: NetworkParams, xs: Sequence[np.ndarray]) -> np.ndarray:
    batch = np.asarray(xs, dtype=np.float64)
    d = params.shape.input_dim
    if batch.ndim != 2 or batch.shape[1] != d:
        raise DimensionError(
            f"training inputs must be n x {d}, got {batch.shape}", expected=d
        )
    return batch


def train_epoch(
    params0: NetworkParams,
    data: Sequence[TrainingDatum],
    cfg: TrainConfig,
) -> TrainResult:
    """Full-batch gradient descent on L(w) = sum_i (theta_i^T phi(x_i; w) - r_i)^2.

    Only the hidden weights move; the theta field of params0 is returned untouched.
    Stops after cfg.max_iter steps or once consecutive losses differ by less than
    cfg.early_stop.
    """
    if cfg.max_iter == 0:
        return TrainResult(params=params0, losses=[])
    if not data:
        raise BanditConfigError("train_epoch needs at least one datum when max_iter > 0")

    xs = _stack(params0, [x for x, _, _ in data])
    rewards = np.asarray([r for _, r, _ in data], dtype=np.float64)
    thetas = np.asarray([t for _, _, t in data], dtype=np.float64)
    if thetas.shape != xs.shape:
        raise DimensionError(
            f"per-datum theta must have length {xs.shape[1]}", expected=xs.shape[1]
        )
    scale = math.sqrt(params0.shape.width)

    def objective(params: NetworkParams) -> tuple[float, list[np.ndarray], None]:
        cache = forward(params, xs)
        residual = np.einsum("ij,ij->i", thetas, scale * cache.phi_unscaled) - rewards
        upstream = 2.0 * residual[:, np.newaxis] * thetas
        return float(residual @ residual), _summed_grads(params, cache, upstream), None

    return _descend(params0, objective, cfg)


def train_full(
    params0: NetworkParams,
    data: Sequence[tuple[np.ndarray, float]],
    cfg: TrainConfig,
) -> TrainResult:
    """Gradient descent on sum_i (f(x_i; theta, w) - r_i)^2 over both theta and w."""
    if cfg.max_iter == 0:
        return TrainResult(params=params0, losses=[])
    if not data:
        raise BanditConfigError("train_full needs at least one datum when max_iter > 0")

    xs = _stack(params0, [x for x, _ in data])
    rewards = np.asarray([r for _, r in data], dtype=np.float64)
    scale = math.sqrt(params0.shape.width)

    def objective(params: NetworkParams) -> tuple[float, list[np.ndarray], np.ndarray]:
        cache = forward(params, xs)
        phi = scale * cache.phi_unscaled
        residual = phi @ params.theta - rewards
        upstream = 2.0 * residual[:, np.newaxis] * params.theta[np.newaxis, :]
        theta_grad = 2.0 * residual @ phi
        return float(residual @ residual), _summed_grads(params, cache, upstream), theta_grad

    return _descend(params0, objective, cfg)
