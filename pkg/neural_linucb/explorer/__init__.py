from neural_linucb.explorer.models import AlphaMode, AlphaSchedule, RidgeState
from neural_linucb.explorer.ridge import (
    RECOMPUTE_EVERY,
    alpha_at,
    confidence_widths,
    ridge_init,
    ridge_update,
    ucb_score,
    ucb_scores,
)

__all__ = [
    "RECOMPUTE_EVERY",
    "AlphaMode",
    "AlphaSchedule",
    "RidgeState",
    "alpha_at",
    "confidence_widths",
    "ridge_init",
    "ridge_update",
    "ucb_score",
    "ucb_scores",
]
