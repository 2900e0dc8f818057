import logging
from collections.abc import Iterator

import numpy as np

from neural_linucb.environments.models import (
    SYNTHETIC_KINDS,
    ContextSet,
    RawDataset,
    RewardKind,
    RewardModel,
)
from neural_linucb.environments.preprocess import minmax_scale, padded_length, preprocess_batch
from neural_linucb.exceptions import BanditConfigError, DatasetError, DimensionError

logger = logging.getLogger(__name__)


def arm_block_contexts(attributes: np.ndarray, n_arms: int) -> np.ndarray:
    """K x (K * n) raw contexts: arm k carries the attributes in block k, zeros elsewhere."""
    n = attributes.shape[0]
    raw = np.zeros((n_arms, n_arms * n))
    for k in range(n_arms):
        raw[k, k * n : (k + 1) * n] = attributes
    return raw


def make_rounds(
    dataset: RawDataset,
    horizon: int,
    seed: int,
    *,
    cycle: bool = False,
    scale: bool = True,
) -> Iterator[ContextSet]:
    """Classification bandit: each round is one instance, the reward is 1 for its label's arm.

    Instances are drawn without replacement in a seeded random order. With
    cycle the order is reshuffled after every full pass; without it a horizon
    longer than the dataset is an error.
    """
    if len(dataset) == 0:
        raise DatasetError(f"dataset {dataset.name} is empty")
    attributes = minmax_scale(dataset.features) if scale else np.asarray(dataset.features)
    labels = np.asarray(dataset.labels)
    zero = ~attributes.any(axis=1)
    if zero.any():
        # rows at every column minimum take the uniform direction
        attributes = attributes.copy()
        attributes[zero] = 1.0
        logger.info(
            "%d all-zero rows of %s mapped to the uniform direction", int(zero.sum()), dataset.name
        )
    if horizon > len(labels) and not cycle:
        raise BanditConfigError(
            f"horizon {horizon} exceeds the {len(labels)} rows of {dataset.name}; "
            "enable cycle to reuse instances"
        )

    return _classification_stream(attributes, labels, dataset.n_arms, horizon, seed)


def _classification_stream(
    attributes: np.ndarray, labels: np.ndarray, n_arms: int, horizon: int, seed: int
) -> Iterator[ContextSet]:
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(labels))
    position = 0
    for t in range(1, horizon + 1):
        if position == len(order):
            order = rng.permutation(len(labels))
            position = 0
        index = order[position]
        position += 1
        rewards = np.zeros(n_arms)
        rewards[labels[index]] = 1.0
        yield ContextSet(
            t=t,
            features=preprocess_batch(arm_block_contexts(attributes[index], n_arms)),
            rewards=rewards,
        )


def make_reward_model(
    kind: RewardKind | str, raw_dim: int, seed: int, noise: float
) -> RewardModel:
    """Synthetic reward with a random unit theta_star = [u, u] / sqrt(2)."""
    kind = RewardKind(kind)
    if kind not in SYNTHETIC_KINDS:
        raise BanditConfigError(f"{kind.value} is not a synthetic reward kind")
    rng = np.random.default_rng(seed)
    u = np.zeros(padded_length(raw_dim))
    u[:raw_dim] = rng.normal(size=raw_dim)
    u /= np.linalg.norm(u)
    return RewardModel(kind=kind, theta_star=np.concatenate([u, u]) / np.sqrt(2.0), noise=noise)


def synth_rounds(
    kind: RewardKind | str,
    raw_dim: int,
    n_arms: int,
    horizon: int,
    seed: int,
    noise: float = 0.1,
) -> Iterator[ContextSet]:
    """Contexts uniform on the sphere with linear, quadratic or cosine expected rewards.

    For x = [x', x'] / sqrt(2) the inner product with theta_star equals
    x'^T u, so rewards see the raw direction only.
    """
    try:
        kind = RewardKind(kind)
    except ValueError as e:
        raise BanditConfigError(f"unknown synthetic reward kind {kind!r}") from e
    if raw_dim < 1 or n_arms < 1:
        raise BanditConfigError("synthetic bandits need raw_dim >= 1 and n_arms >= 1")
    seeds = np.random.SeedSequence(seed).spawn(2)
    model = make_reward_model(kind, raw_dim, int(seeds[0].generate_state(1)[0]), noise)
    return _synthetic_stream(model, raw_dim, n_arms, horizon, np.random.default_rng(seeds[1]))


def _synthetic_stream(
    model: RewardModel, raw_dim: int, n_arms: int, horizon: int, rng: np.random.Generator
) -> Iterator[ContextSet]:
    noise = model.noise
    for t in range(1, horizon + 1):
        features = preprocess_batch(rng.normal(size=(n_arms, raw_dim)))
        yield ContextSet(t=t, features=features, rewards=model.expected(features), noise=noise)


def draw_reward(ctx: ContextSet, arm: int, rng: np.random.Generator) -> float:
    """Expected reward of arm plus N(0, noise^2)."""
    if not 0 <= arm < ctx.n_arms:
        raise DimensionError(f"arm {arm} out of range for {ctx.n_arms} arms")
    reward = float(ctx.rewards[arm])
    if ctx.noise == 0.0:
        return reward
    return reward + float(rng.normal(0.0, ctx.noise))
