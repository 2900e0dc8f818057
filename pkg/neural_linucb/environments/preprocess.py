"""Map raw attribute vectors onto unit vectors with two equal halves.

A raw vector of length n (zero-padded to even length) is normalized to x and
emitted as [x, x] / sqrt(2), so the result has unit norm and duplicated halves.
"""

import numpy as np

from neural_linucb.exceptions import DimensionError, NumericalError


def padded_length(raw_dim: int) -> int:
    return raw_dim + raw_dim % 2


def context_dim(raw_dim: int) -> int:
    """Length of the preprocessed vector for raw vectors of length raw_dim."""
    return 2 * padded_length(raw_dim)


def preprocess_batch(raw: np.ndarray) -> np.ndarray:
    """Row-wise preprocess of an n x raw_dim array."""
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim != 2:
        raise DimensionError(f"expected a 2-d batch, got {raw.ndim} dimensions")
    if not np.isfinite(raw).all():
        raise NumericalError("raw context has non-finite entries", quantity="context")
    if raw.shape[1] % 2:
        raw = np.hstack([raw, np.zeros((raw.shape[0], 1))])
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    if np.any(norms == 0.0):
        raise NumericalError("cannot normalize an all-zero context", quantity="context")
    unit = raw / norms
    return np.hstack([unit, unit]) / np.sqrt(2.0)


def preprocess(x_raw: np.ndarray) -> np.ndarray:
    x_raw = np.asarray(x_raw, dtype=np.float64)
    if x_raw.ndim != 1:
        raise DimensionError("preprocess takes a single raw vector")
    return preprocess_batch(x_raw[np.newaxis, :])[0]


def minmax_scale(features: np.ndarray) -> np.ndarray:
    """Scale each column to [0, 1]; constant columns become 0."""
    features = np.asarray(features, dtype=np.float64)
    low = features.min(axis=0)
    span = features.max(axis=0) - low
    span[span == 0.0] = 1.0
    return (features - low) / span
