"""Forward evaluation and analytic gradients of the bias-free ReLU network.

phi(x; w) = sqrt(m) * relu(W_L relu(W_{L-1} ... relu(W_1 x))) and f(x; theta, w) = theta^T phi.

Gradients flatten the hidden weights as w = (vec(W_1), ..., vec(W_L)) with
column-major vec, so entry (r, c) of W_l sits at offset_l + r + c * rows(W_l).

Preactivations within _KINK_RTOL of the magnitude of their summands are snapped
to exactly zero, and relu'(0) is taken as 1 (the right derivative). The
block-symmetric initialization cancels the output layer exactly on inputs with
equal halves; both rules keep that cancellation exact and the gradient alive.
"""

import math
from dataclasses import dataclass

import numpy as np

from neural_linucb.exceptions import DimensionError
from neural_linucb.network.models import NetworkParams, NetworkShape

_KINK_RTOL = 1e-12


@dataclass
class ForwardCache:
    """Per-layer activations of a batch; hidden[0] is the input."""

    hidden: list[np.ndarray]
    active: list[np.ndarray]

    @property
    def phi_unscaled(self) -> np.ndarray:
        return self.hidden[-1]


def init_params(shape: NetworkShape, rng_seed: int) -> NetworkParams:
    """Block-symmetric Gaussian initialization.

    W_l = [[W, 0], [0, W]] with W ~ N(0, 4/m) for l < L, W_L = [V, -V] with
    V ~ N(0, 2/m), theta ~ N(0, 1/d).
    """
    rng = np.random.default_rng(rng_seed)
    d, m = shape.input_dim, shape.width
    weights: list[np.ndarray] = []
    for rows, cols in shape.layer_dims[:-1]:
        block = rng.normal(0.0, math.sqrt(4.0 / m), size=(rows // 2, cols // 2))
        w = np.zeros((rows, cols))
        w[: rows // 2, : cols // 2] = block
        w[rows // 2 :, cols // 2 :] = block
        weights.append(w)
    v = rng.normal(0.0, math.sqrt(2.0 / m), size=(d, m // 2))
    weights.append(np.hstack([v, -v]))
    theta = rng.normal(0.0, math.sqrt(1.0 / d), size=d)
    return NetworkParams(shape=shape, weights=tuple(weights), theta=theta)


def _as_batch(params: NetworkParams, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    batch = x[np.newaxis, :] if x.ndim == 1 else x
    d = params.shape.input_dim
    if batch.ndim != 2 or batch.shape[1] != d:
        raise DimensionError(
            f"input has {batch.shape[-1]} features, network expects {d}",
            expected=d,
            actual=int(batch.shape[-1]),
        )
    return batch


def forward(params: NetworkParams, xs: np.ndarray) -> ForwardCache:
    """Run a batch (rows are inputs) through the hidden layers."""
    h = _as_batch(params, xs)
    hidden = [h]
    active = []
    for w in params.weights:
        z = h @ w.T
        z[np.abs(z) <= _KINK_RTOL * (np.abs(h) @ np.abs(w).T)] = 0.0
        active.append(z >= 0.0)
        h = np.maximum(z, 0.0)
        hidden.append(h)
    return ForwardCache(hidden=hidden, active=active)


def phi_batch(params: NetworkParams, xs: np.ndarray) -> np.ndarray:
    return math.sqrt(params.shape.width) * forward(params, xs).phi_unscaled


def forward_phi(params: NetworkParams, x: np.ndarray) -> np.ndarray:
    """Last-hidden-layer features phi(x; w), a length-d vector."""
    if np.asarray(x).ndim != 1:
        raise DimensionError("forward_phi takes a single feature vector")
    return phi_batch(params, x)[0]


def forward_f(params: NetworkParams, x: np.ndarray) -> float:
    """Network output f(x; theta, w) = theta^T phi(x; w)."""
    return float(params.theta @ forward_phi(params, x))


def backprop(
    params: NetworkParams,
    cache: ForwardCache,
    upstream: np.ndarray,
) -> list[np.ndarray]:
    """Per-example gradients of upstream^T phi with respect to each W_l.

    upstream has one row per batch input (shape n x d). Returns, per layer, an
    array n x rows x cols holding d(upstream_i^T phi(x_i)) / dW_l.
    """
    scale = math.sqrt(params.shape.width)
    delta = scale * upstream * cache.active[-1]
    grads: list[np.ndarray] = [np.empty(0)] * len(params.weights)
    for layer in range(len(params.weights) - 1, -1, -1):
        grads[layer] = delta[:, :, np.newaxis] * cache.hidden[layer][:, np.newaxis, :]
        if layer > 0:
            delta = (delta @ params.weights[layer]) * cache.active[layer - 1]
    return grads


def _flatten_per_example(grads: list[np.ndarray]) -> np.ndarray:
    # column-major vec of each n x rows x cols slab
    return np.concatenate([g.transpose(0, 2, 1).reshape(g.shape[0], -1) for g in grads], axis=1)


def grad_phi(params: NetworkParams, x: np.ndarray) -> np.ndarray:
    """Jacobian g(x; w) of phi with respect to w, a d x p matrix."""
    cache = forward(params, np.asarray(x, dtype=np.float64).reshape(1, -1))
    d = params.shape.input_dim
    # one backward pass per output coordinate, batched as d copies of the same input
    tiled = ForwardCache(
        hidden=[np.repeat(h, d, axis=0) for h in cache.hidden],
        active=[np.repeat(a, d, axis=0) for a in cache.active],
    )
    return _flatten_per_example(backprop(params, tiled, np.eye(d)))


def grad_f_batch(params: NetworkParams, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Outputs f and full gradients (phi, theta^T g) for each row of xs."""
    cache = forward(params, xs)
    n = cache.hidden[0].shape[0]
    phi = math.sqrt(params.shape.width) * cache.phi_unscaled
    upstream = np.broadcast_to(params.theta, (n, params.shape.input_dim))
    grads = _flatten_per_example(backprop(params, cache, upstream))
    return phi @ params.theta, np.hstack([phi, grads])


def grad_f_all(params: NetworkParams, x: np.ndarray) -> np.ndarray:
    """Gradient of f with respect to beta = (theta, w): (phi, theta^T g), length d + p."""
    if np.asarray(x).ndim != 1:
        raise DimensionError("grad_f_all takes a single feature vector")
    _, grads = grad_f_batch(params, x)
    return grads[0]
