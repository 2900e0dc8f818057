import logging

import numpy as np
from scipy import linalg

from neural_linucb.exceptions import ConvergenceError, NumericalError
from neural_linucb.ntk.models import NTKGram

logger = logging.getLogger(__name__)

EIG_TOL = 1e-8
MAX_ITER = 500
VALIDATE_UP_TO = 64
_SHIFT_EVERY = 4


def _factor(h: np.ndarray, shift: float) -> tuple[np.ndarray, bool] | None:
    try:
        return linalg.cho_factor(h - shift * np.eye(h.shape[0]))
    except linalg.LinAlgError:
        return None


def min_eigenvalue(
    gram: NTKGram | np.ndarray,
    *,
    tol: float = EIG_TOL,
    max_iter: int = MAX_ITER,
    validate: bool = True,
) -> float:
    """Smallest eigenvalue of a symmetric matrix by shifted inverse iteration.

    The shift starts below the Gershgorin lower bound, where H - shift * I is
    positive definite, and is moved towards the Rayleigh quotient only when a
    Cholesky factorization at the new shift succeeds, so it never passes the
    smallest eigenvalue. Iteration stops once ||H v - rho v|| <= tol * scale.
    Matrices of size up to VALIDATE_UP_TO are cross-checked against a dense
    eigensolver when validate is set.
    """
    h = np.asarray(gram.matrix if isinstance(gram, NTKGram) else gram, dtype=np.float64)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or not np.isfinite(h).all():
        raise NumericalError("min_eigenvalue needs a finite square matrix", quantity="gram")
    n = h.shape[0]
    scale = float(np.abs(h).max(initial=0.0))
    if n == 0:
        raise NumericalError("min_eigenvalue of an empty matrix", quantity="gram")
    if scale == 0.0:
        return 0.0
    if np.abs(h - h.T).max() > 1e-12 * scale:
        raise NumericalError("min_eigenvalue needs a symmetric matrix", quantity="gram")

    radii = np.abs(h).sum(axis=1) - np.abs(np.diag(h))
    shift = float(np.min(np.diag(h) - radii)) - 1e-3 * scale
    factor = _factor(h, shift)
    if factor is None:
        raise NumericalError("factorization failed below the Gershgorin bound", quantity="gram")

    v = np.random.default_rng(0).standard_normal(n)
    v /= np.linalg.norm(v)
    for iteration in range(1, max_iter + 1):
        w = linalg.cho_solve(factor, v)
        v = w / np.linalg.norm(w)
        hv = h @ v
        rho = float(v @ hv)
        residual = float(np.linalg.norm(hv - rho * v))
        if residual <= tol * scale:
            logger.debug("min eigenvalue %.6g after %d iterations", rho, iteration)
            break
        if iteration % _SHIFT_EVERY == 0:
            step = 0.9 * (rho - shift)
            for _ in range(3):
                moved = _factor(h, shift + step)
                if moved is not None:
                    shift, factor = shift + step, moved
                    break
                step /= 4.0
    else:
        raise ConvergenceError(
            f"inverse iteration did not reach tolerance {tol} in {max_iter} iterations",
            iterations=max_iter,
        )

    if validate and n <= VALIDATE_UP_TO:
        dense = float(linalg.eigvalsh(h, subset_by_index=[0, 0])[0])
        if abs(dense - rho) > 1e3 * tol * max(scale, 1.0):
            raise NumericalError(
                f"inverse iteration gave {rho:.10g}, dense solver {dense:.10g}", quantity="gram"
            )
    return rho
