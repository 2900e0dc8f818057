"""Experiment configuration files.

Two encodings of the same keys are accepted. A ``.json`` file holds one object;
anything else is read as flat ``key = value`` lines. A ``#`` at the start of a
line or after whitespace starts a comment, so ``data#2.csv`` survives. Blank
lines are ignored, lists are comma-separated and an empty value means unset.
``NEURAL_LINUCB_OUTPUT_DIR`` overrides ``output_dir`` from the file; an
explicit ``output_dir`` argument overrides both.
"""

import json
import logging
import os
import re
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from neural_linucb.environments.datasets import load_dataset, load_manifest
from neural_linucb.environments.models import KNOWN_DATASETS, DatasetSpec, RewardKind
from neural_linucb.environments.preprocess import context_dim
from neural_linucb.exceptions import BanditConfigError, DatasetError
from neural_linucb.explorer.models import AlphaMode
from neural_linucb.explorer.ridge import alpha_at
from neural_linucb.harness.models import ExperimentConfig, ResolvedEnvironment
from neural_linucb.network.models import NetworkShape

logger = logging.getLogger(__name__)

ENV_OUTPUT_DIR = "NEURAL_LINUCB_OUTPUT_DIR"
_PATH_KEYS = ("dataset_path", "manifest_path")
_COMMENT = re.compile(r"(?:^|\s)#.*$")


def parse_key_values(text: str, source: Path | str = "<config>") -> dict[str, str | None]:
    values: dict[str, str | None] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = _COMMENT.sub("", line).strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise BanditConfigError(f"{source}:{number}: expected 'key = value', got {line!r}")
        if key in values:
            raise BanditConfigError(f"{source}:{number}: duplicate key {key!r}")
        values[key] = value.strip() or None
    return values


def _read_file(path: Path) -> dict[str, Any]:
    try:
        text = path.read_text()
    except FileNotFoundError as e:
        raise BanditConfigError(f"config file not found: {path}") from e
    if path.suffix.lower() != ".json":
        return dict(parse_key_values(text, path))
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise BanditConfigError(f"{path}:{e.lineno}: invalid JSON: {e.msg}") from e
    if not isinstance(payload, dict):
        raise BanditConfigError(f"{path}: expected a JSON object of config keys")
    return payload


def build_config(values: dict[str, Any], source: Path | str = "<config>") -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(values)
    except ValidationError as e:
        raise BanditConfigError(f"invalid config {source}: {e}") from e


def load_config(path: Path | str, *, output_dir: Path | str | None = None) -> ExperimentConfig:
    """Read a config file and apply the output-directory overrides.

    Relative dataset and manifest paths resolve against the config file's directory.
    """
    path = Path(path)
    values = _read_file(path)
    for key in _PATH_KEYS:
        if values.get(key) and not Path(values[key]).is_absolute():
            values[key] = path.parent / values[key]
    if env_dir := os.environ.get(ENV_OUTPUT_DIR):
        values["output_dir"] = env_dir
    if output_dir is not None:
        values["output_dir"] = output_dir
    config = build_config(values, path)
    logger.debug("loaded %s (config hash %s)", path, config.config_hash[:12])
    return config


def _dataset_source(config: ExperimentConfig) -> tuple[Path, DatasetSpec | None, bool | None]:
    name = config.environment
    if config.manifest_path is not None:
        try:
            manifest = load_manifest(config.manifest_path)
        except DatasetError as e:
            raise BanditConfigError(str(e)) from e
        if name not in manifest:
            raise BanditConfigError(
                f"dataset {name!r} is not listed in manifest {config.manifest_path}"
            )
        entry = manifest[name]
        header = entry.header if entry.header is not None else config.dataset_header
        return entry.path, entry.spec(name), header
    if config.dataset_path is not None:
        return config.dataset_path, KNOWN_DATASETS.get(name.lower()), config.dataset_header
    raise BanditConfigError(f"dataset {name!r} needs dataset_path or manifest_path")


def resolve_environment(config: ExperimentConfig) -> ResolvedEnvironment:
    """Arm count and context dimension of the configured environment."""
    kind = config.synthetic_kind
    if kind is not None:
        return ResolvedEnvironment(
            name=config.environment,
            kind=kind,
            n_arms=config.synthetic_arms,
            dim=context_dim(config.synthetic_dim),
        )

    path, spec, header = _dataset_source(config)
    if not path.is_file():
        raise BanditConfigError(f"dataset file not found: {path}")
    if spec is None:
        # no declared shape: read the file once to learn it
        try:
            raw = load_dataset(path, config.environment, header=header)
        except DatasetError as e:
            raise BanditConfigError(str(e)) from e
        spec = DatasetSpec(name=raw.name, n_attributes=raw.n_attributes, n_arms=raw.n_arms)
    return ResolvedEnvironment(
        name=spec.name,
        kind=RewardKind.CLASSIFICATION,
        n_arms=spec.n_arms,
        dim=context_dim(spec.n_arms * spec.n_attributes),
        path=path,
        spec=spec,
        header=header,
    )


def check_config(config: ExperimentConfig) -> ResolvedEnvironment:
    """Validate everything that needs the environment resolved."""
    env = resolve_environment(config)
    warm = config.warm_start_pulls * env.n_arms
    if config.horizon < warm:
        raise BanditConfigError(
            f"horizon {config.horizon} is shorter than the {warm}-round warm start"
        )
    if any(algorithm.is_neural for algorithm in config.algorithms):
        try:
            NetworkShape(input_dim=env.dim, width=config.width, depth=config.depth)
        except ValidationError as e:
            raise BanditConfigError(
                f"network width {config.width} does not fit contexts of dimension {env.dim}: "
                f"{e.errors()[0]['msg']}"
            ) from e
    if config.max_iter > 0 and config.step_size <= 0:
        raise BanditConfigError("step_size must be positive when max_iter > 0")
    if config.alpha_mode is AlphaMode.THEOREM:
        alpha_at(config.alpha_schedule(env.n_arms, env.dim), 1)
    return env
