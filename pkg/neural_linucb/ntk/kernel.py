"""Closed-form tangent kernel of the bias-free ReLU network.

For (u, v) ~ N(0, [[a, c], [c, b]]) with rho = c / sqrt(ab) and angle = arccos(rho):

    2 E[relu(u) relu(v)]   = sqrt(ab) / pi * (sin(angle) + (pi - angle) cos(angle))
    2 E[relu'(u) relu'(v)] = (pi - angle) / pi

Sigma^(0)(x, y) = x^T y, Sigma^(l) is the first expectation at level l - 1,
sigma_dot^(l) the second, sigma_tilde^(0) = Sigma^(0) and
sigma_tilde^(l) = sigma_tilde^(l-1) * sigma_dot^(l) + Sigma^(l).
The tangent kernel is H = (sigma_tilde^(L) + Sigma^(L)) / 2.
"""

import math

import numpy as np
from scipy import linalg

from neural_linucb.exceptions import BanditConfigError
from neural_linucb.ntk.models import KernelPair, MonteCarloEstimate, NTKGram

UNIT_TOL = 1e-8
_PSD_TOL = 1e-12


def _check_unit(points: np.ndarray) -> None:
    norms = np.linalg.norm(points, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise BanditConfigError("kernel inputs must have unit norm")


def _arccos_step(
    cov1: np.ndarray, nngp: np.ndarray, cov2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Twice the two ReLU expectations, elementwise."""
    prod = np.sqrt(cov1 * cov2)
    rho = np.clip(np.divide(nngp, prod, out=np.zeros_like(nngp), where=prod > 0), -1.0, 1.0)
    angle = np.arccos(rho)
    relu = prod / np.pi * (np.sin(angle) + (np.pi - angle) * np.cos(angle))
    step = (np.pi - angle) / np.pi
    return relu, step


def _levels(
    cov1: np.ndarray, nngp: np.ndarray, cov2: np.ndarray, depth: int
) -> tuple[list[np.ndarray], ...]:
    sigma, sigma_xx, sigma_yy = [nngp], [cov1], [cov2]
    sigma_dot: list[np.ndarray] = []
    sigma_tilde = [nngp]
    for _ in range(depth):
        relu, step = _arccos_step(cov1, nngp, cov2)
        # on the diagonal angle = 0, so the diagonal maps to itself
        cov1, _ = _arccos_step(cov1, cov1, cov1)
        cov2, _ = _arccos_step(cov2, cov2, cov2)
        nngp = relu
        sigma.append(nngp)
        sigma_xx.append(cov1)
        sigma_yy.append(cov2)
        sigma_dot.append(step)
        sigma_tilde.append(sigma_tilde[-1] * step + nngp)
    return sigma, sigma_xx, sigma_yy, sigma_dot, sigma_tilde


def arccos_expectations(a: float, b: float, c: float) -> tuple[float, float]:
    """E[relu(u) relu(v)] and E[relu'(u) relu'(v)] for the covariance [[a, c], [c, b]]."""
    if a <= 0 or b <= 0:
        raise BanditConfigError(f"variances must be positive, got {a} and {b}")
    relu, step = _arccos_step(np.array(a), np.array(c, dtype=np.float64), np.array(b))
    return 0.5 * float(relu), 0.5 * float(step)


def ntk_pair(x: np.ndarray, y: np.ndarray, depth: int) -> KernelPair:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if depth < 0:
        raise BanditConfigError(f"kernel depth must be non-negative, got {depth}")
    if x.shape != y.shape or x.ndim != 1:
        raise BanditConfigError(
            f"kernel inputs must be vectors of equal length, got {x.shape} and {y.shape}"
        )
    _check_unit(np.stack([x, y]))

    levels = _levels(np.array(x @ x), np.array(x @ y), np.array(y @ y), depth)
    sigma, sigma_xx, sigma_yy, sigma_dot, sigma_tilde = (
        tuple(float(v) for v in values) for values in levels
    )
    return KernelPair(
        depth=depth,
        sigma=sigma,
        sigma_xx=sigma_xx,
        sigma_yy=sigma_yy,
        sigma_dot=sigma_dot,
        sigma_tilde=sigma_tilde,
    )


def kernel_levels(points: np.ndarray, depth: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Sigma^(l) and sigma_tilde^(l) matrices over all pairs of points, l = 0..depth."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if depth < 0:
        raise BanditConfigError(f"kernel depth must be non-negative, got {depth}")
    _check_unit(points)
    gram = points @ points.T
    gram = 0.5 * (gram + gram.T)
    diag = np.diag(gram)
    sigma, _, _, _, sigma_tilde = _levels(
        np.broadcast_to(diag[:, np.newaxis], gram.shape),
        gram,
        np.broadcast_to(diag[np.newaxis, :], gram.shape),
        depth,
    )
    return sigma, sigma_tilde


def ntk_matrix(points: np.ndarray, depth: int) -> NTKGram:
    """Tangent kernel over every pair of points (rows), evaluated elementwise."""
    sigma, sigma_tilde = kernel_levels(points, depth)
    h = 0.5 * (sigma_tilde[-1] + sigma[-1])
    return NTKGram(depth=depth, matrix=0.5 * (h + h.T))


def mc_expectations(a: float, b: float, c: float, samples: int, seed: int) -> MonteCarloEstimate:
    """Monte-Carlo estimate of the two ReLU expectations under N(0, [[a, c], [c, b]])."""
    cov = np.array([[a, c], [c, b]], dtype=np.float64)
    eigvals, eigvecs = linalg.eigh(cov)
    if eigvals.min() < -_PSD_TOL * max(abs(a), abs(b), 1.0):
        raise BanditConfigError(f"covariance [[{a}, {c}], [{c}, {b}]] is not positive semidefinite")
    if samples < 2:
        raise BanditConfigError(f"need at least two samples, got {samples}")
    root = eigvecs * np.sqrt(np.maximum(eigvals, 0.0))

    rng = np.random.default_rng(seed)
    uv = rng.standard_normal((samples, 2)) @ root.T
    u, v = uv[:, 0], uv[:, 1]
    relu = np.maximum(u, 0.0) * np.maximum(v, 0.0)
    step = ((u >= 0.0) & (v >= 0.0)).astype(np.float64)
    root_n = math.sqrt(samples)
    return MonteCarloEstimate(
        relu=float(relu.mean()),
        relu_se=float(relu.std(ddof=1)) / root_n,
        step=float(step.mean()),
        step_se=float(step.std(ddof=1)) / root_n,
        samples=samples,
    )
