"""Ridge regression on the last layer with a maintained inverse design matrix."""

import logging
import math

import numpy as np
from scipy import linalg

from neural_linucb.exceptions import BanditConfigError, DimensionError, NumericalError
from neural_linucb.explorer.models import AlphaMode, AlphaSchedule, RidgeState

logger = logging.getLogger(__name__)

RECOMPUTE_EVERY = 512
_RADICAND_RTOL = 1e-12


def _vector(state: RidgeState, phi: np.ndarray) -> np.ndarray:
    phi = np.asarray(phi, dtype=np.float64)
    if phi.shape[-1:] != (state.dim,):
        raise DimensionError(
            f"feature has length {phi.shape[-1] if phi.ndim else 0}, ridge state has {state.dim}",
            expected=state.dim,
            actual=int(phi.shape[-1]) if phi.ndim else None,
        )
    return phi


def _estimate(
    a_inv: np.ndarray, b: np.ndarray, lam: float, theta0: np.ndarray, shrink: bool
) -> np.ndarray:
    return a_inv @ (b + lam * theta0) if shrink else a_inv @ b


def ridge_init(
    d: int,
    lam: float,
    theta0: np.ndarray | None = None,
    *,
    shrink_to_init: bool = False,
) -> RidgeState:
    """A = lam * I, b = 0, theta = theta0 (zeros when omitted)."""
    if lam <= 0:
        raise BanditConfigError(f"ridge regularizer must be positive, got {lam}")
    theta0 = np.zeros(d) if theta0 is None else np.array(theta0, dtype=np.float64)
    if theta0.shape != (d,):
        raise DimensionError(f"theta0 must have length {d}", expected=d, actual=theta0.size)
    return RidgeState(
        lam=lam,
        a=lam * np.eye(d),
        a_inv=np.eye(d) / lam,
        b=np.zeros(d),
        theta=theta0,
        theta0=theta0.copy(),
        shrink_to_init=shrink_to_init,
    )


def ridge_update(state: RidgeState, phi: np.ndarray, reward: float) -> RidgeState:
    """Add (phi, reward) to the regression.

    a_inv follows the rank-one inverse identity and is recomputed from A by a
    Cholesky solve every RECOMPUTE_EVERY updates.
    """
    phi = _vector(state, phi)
    if phi.ndim != 1:
        raise DimensionError("ridge_update takes a single feature vector")
    if not np.isfinite(phi).all() or not math.isfinite(reward):
        raise NumericalError(f"non-finite ridge update (reward={reward})", quantity="feature")

    a = state.a + np.outer(phi, phi)
    b = state.b + reward * phi
    count = state.update_count + 1
    if count % RECOMPUTE_EVERY == 0:
        try:
            a_inv = linalg.cho_solve(linalg.cho_factor(a), np.eye(state.dim))
        except linalg.LinAlgError as e:
            raise NumericalError("design matrix lost positive definiteness", quantity="A") from e
        logger.debug("recomputed inverse after %d updates (drift %.3g)", count, state.inverse_error)
    else:
        u = state.a_inv @ phi
        a_inv = state.a_inv - np.outer(u, u) / (1.0 + phi @ u)
    a_inv = 0.5 * (a_inv + a_inv.T)

    return RidgeState(
        lam=state.lam,
        a=a,
        a_inv=a_inv,
        b=b,
        theta=_estimate(a_inv, b, state.lam, state.theta0, state.shrink_to_init),
        theta0=state.theta0,
        shrink_to_init=state.shrink_to_init,
        update_count=count,
    )


def confidence_widths(state: RidgeState, phis: np.ndarray) -> np.ndarray:
    """sqrt(phi^T A^-1 phi) for each row of phis."""
    phis = np.atleast_2d(_vector(state, phis))
    radicand = np.einsum("ij,jk,ik->i", phis, state.a_inv, phis)
    floor = -_RADICAND_RTOL * np.einsum("ij,ij->i", phis, phis) / state.lam
    if np.any(radicand < floor):
        raise NumericalError(
            f"negative confidence radicand {radicand.min():.3g}; "
            "A^-1 is no longer positive definite",
            quantity="A_inv",
        )
    return np.sqrt(np.maximum(radicand, 0.0))


def ucb_scores(state: RidgeState, phis: np.ndarray, alpha: float) -> np.ndarray:
    """theta^T phi + alpha * ||phi||_{A^-1} for each row of phis."""
    if alpha < 0:
        raise BanditConfigError(f"alpha must be non-negative, got {alpha}")
    phis = np.atleast_2d(_vector(state, phis))
    greedy = phis @ state.theta
    if alpha == 0:
        return greedy
    return greedy + alpha * confidence_widths(state, phis)


def ucb_score(state: RidgeState, phi: np.ndarray, alpha: float) -> float:
    return float(ucb_scores(state, phi, alpha)[0])


def alpha_at(schedule: AlphaSchedule, t: int) -> float:
    """Exploration weight at round t."""
    if t < 0:
        raise BanditConfigError(f"round index must be non-negative, got {t}")
    if schedule.mode is AlphaMode.FIXED:
        return schedule.alpha

    hk = schedule.epoch_length * schedule.n_arms
    if hk <= 1:
        raise BanditConfigError(f"theorem alpha needs H * K > 1, got {hk}")
    log_term = schedule.dim * math.log(1.0 + t * math.log(hk) / schedule.lam)
    radius = schedule.nu * math.sqrt(2.0 * (log_term + math.log(1.0 / schedule.delta)))
    return radius + math.sqrt(schedule.lam) * schedule.bound
