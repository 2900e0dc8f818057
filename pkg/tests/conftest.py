from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from neural_linucb.network.mlp import forward
from neural_linucb.network.models import NetworkParams, NetworkShape


def duplicated_unit(raw: np.ndarray) -> np.ndarray:
    raw = np.asarray(raw, dtype=np.float64)
    half = raw / np.linalg.norm(raw)
    return np.concatenate([half, half]) / np.sqrt(2.0)


def random_params(shape: NetworkShape, seed: int) -> NetworkParams:
    """Dense Gaussian weights with no block structure, for gradient checks."""
    rng = np.random.default_rng(seed)
    weights = tuple(
        rng.normal(0.0, np.sqrt(2.0 / cols), size=(rows, cols)) for rows, cols in shape.layer_dims
    )
    theta = rng.normal(0.0, 1.0, size=shape.input_dim)
    return NetworkParams(shape=shape, weights=weights, theta=theta)


def min_preactivation(params: NetworkParams, x: np.ndarray) -> float:
    """Distance of the closest hidden unit to its ReLU kink at input x."""
    cache = forward(params, x)
    return min(
        float(np.min(np.abs(h @ w.T))) for h, w in zip(cache.hidden[:-1], params.weights)
    )


def kink_free_case(
    shape: NetworkShape, seed: int, margin: float = 1e-3
) -> tuple[NetworkParams, np.ndarray]:
    rng = np.random.default_rng(seed)
    while True:
        params = random_params(shape, int(rng.integers(2**31)))
        x = rng.normal(size=shape.input_dim)
        x /= np.linalg.norm(x)
        if min_preactivation(params, x) > margin:
            return params, x


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def small_shape() -> NetworkShape:
    return NetworkShape(input_dim=4, width=8, depth=2)


@pytest.fixture
def make_params() -> Callable[[NetworkShape, int], NetworkParams]:
    return random_params


@pytest.fixture
def make_duplicated() -> Callable[[np.ndarray], np.ndarray]:
    return duplicated_unit


def write_config(path: Path, **values: object) -> Path:
    """Flat key = value config file."""
    lines = [f"{key} = {value}" for key, value in values.items()]
    path.write_text("\n".join(lines) + "\n")
    return path


def write_classification_csv(
    path: Path, rows: int, n_attributes: int, n_classes: int, seed: int = 0
) -> Path:
    """Random positive attributes with integer labels 1..n_classes in the last column."""
    rng = np.random.default_rng(seed)
    features = rng.uniform(0.1, 1.0, size=(rows, n_attributes))
    labels = np.arange(rows) % n_classes + 1
    lines = [
        ",".join(f"{v:.6f}" for v in feature) + f",{label}"
        for feature, label in zip(features, labels, strict=True)
    ]
    path.write_text("\n".join(lines) + "\n")
    return path
