from neural_linucb.environments.datasets import ManifestEntry, load_dataset, load_manifest
from neural_linucb.environments.models import (
    KNOWN_DATASETS,
    SYNTHETIC_KINDS,
    ContextSet,
    DatasetSpec,
    RawDataset,
    RewardKind,
    RewardModel,
)
from neural_linucb.environments.preprocess import (
    context_dim,
    minmax_scale,
    preprocess,
    preprocess_batch,
)
from neural_linucb.environments.streams import (
    arm_block_contexts,
    draw_reward,
    make_rounds,
    make_reward_model,
    synth_rounds,
)

__all__ = [
    "KNOWN_DATASETS",
    "SYNTHETIC_KINDS",
    "ContextSet",
    "DatasetSpec",
    "ManifestEntry",
    "RawDataset",
    "RewardKind",
    "RewardModel",
    "arm_block_contexts",
    "context_dim",
    "draw_reward",
    "load_dataset",
    "load_manifest",
    "make_reward_model",
    "make_rounds",
    "minmax_scale",
    "preprocess",
    "preprocess_batch",
    "synth_rounds",
]
