import logging
import time
from collections.abc import Callable, Iterator
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path

import numpy as np
import pandas as pd

from neural_linucb.environments.datasets import load_dataset
from neural_linucb.environments.models import ContextSet, DatasetSpec, RawDataset
from neural_linucb.environments.streams import draw_reward, make_rounds, synth_rounds
from neural_linucb.exceptions import ArtifactError, BanditConfigError, RunError
from neural_linucb.harness.artifacts import emit_csv
from neural_linucb.harness.checkpoint import load_checkpoint, save_checkpoint
from neural_linucb.harness.config import check_config
from neural_linucb.harness.models import (
    AGGREGATE_COLUMNS,
    ExperimentConfig,
    RegretAggregate,
    RegretTrace,
    ResolvedEnvironment,
    RunCheckpoint,
    RunFailure,
    SuiteResult,
    TraceRow,
)
from neural_linucb.network.snapshot import dump_params
from neural_linucb.policies.base import BaseAgent
from neural_linucb.policies.factory import make_agent
from neural_linucb.policies.models import Algorithm

logger = logging.getLogger(__name__)

Clock = Callable[[], float]


@lru_cache(maxsize=4)
def _cached_dataset(path: Path, spec: DatasetSpec | None, header: bool | None) -> RawDataset:
    return load_dataset(path, spec=spec, header=header)


def run_seeds(seed: int) -> tuple[int, int, np.random.SeedSequence]:
    """Environment seed, agent seed and reward-noise stream of one run."""
    env_seq, agent_seq, noise_seq = np.random.SeedSequence(seed).spawn(3)
    return int(env_seq.generate_state(1)[0]), int(agent_seq.generate_state(1)[0]), noise_seq


def _rounds(config: ExperimentConfig, env: ResolvedEnvironment, seed: int) -> Iterator[ContextSet]:
    if env.path is None:
        return synth_rounds(
            env.kind, config.synthetic_dim, env.n_arms, config.horizon, seed, config.noise
        )
    dataset = _cached_dataset(env.path, env.spec, env.header)
    return make_rounds(dataset, config.horizon, seed, cycle=config.cycle)


def trace_path(output_dir: Path, algorithm: str, seed: int) -> Path:
    return output_dir / f"{algorithm}-seed{seed}.csv"


def _due(t: int, config: ExperimentConfig) -> bool:
    every = config.checkpoint_every
    return every > 0 and t % every == 0 and t < config.horizon


def run_one(
    config: ExperimentConfig,
    algorithm: Algorithm | str,
    seed: int,
    *,
    agent: BaseAgent | None = None,
    env: ResolvedEnvironment | None = None,
    clock: Clock = time.perf_counter,
    out_path: Path | str | None = None,
    weights_path: Path | str | None = None,
    checkpoint_path: Path | str | None = None,
    resume: RunCheckpoint | None = None,
) -> RegretTrace:
    """Play one bandit run of config.horizon rounds and record its regret.

    Regret is measured against the expected rewards, not the noisy draws.
    Any error aborts the run with RunError; the rounds recorded so far are
    attached to it and written to out_path first.

    With checkpoint_path and config.checkpoint_every > 0 the run state is saved
    every checkpoint_every rounds. Passing such a checkpoint as resume replays
    the seeded context stream up to its round and continues from there; the
    result matches an uninterrupted run apart from wall_ms.
    """
    algorithm = Algorithm(algorithm) if agent is None and resume is None else algorithm
    label = algorithm.value if isinstance(algorithm, Algorithm) else str(algorithm)
    env = env or check_config(config)
    env_seed, agent_seed, noise_seq = run_seeds(seed)
    rng = np.random.default_rng(noise_seq)

    rows: list[TraceRow] = []
    cumulative = 0.0
    start_round = 0
    if resume is not None:
        if (resume.algorithm, resume.seed, resume.config_hash) != (
            label,
            seed,
            config.config_hash,
        ):
            raise BanditConfigError(
                f"checkpoint of {resume.algorithm} seed {resume.seed} does not belong to "
                f"{label} seed {seed} under config {config.config_hash[:12]}"
            )
        agent = resume.agent
        rng.bit_generator.state = resume.rng_state
        rows = list(resume.rows)
        cumulative = rows[-1][4] if rows else 0.0
        start_round = resume.round
        logger.info("%s seed %d: resuming after round %d", label, seed, start_round)

    def finish() -> RegretTrace:
        trace = RegretTrace.from_rows(
            rows, algorithm=label, seed=seed, config_hash=config.config_hash
        )
        if out_path is not None:
            emit_csv(trace, out_path)
        return trace

    try:
        if agent is None:
            agent = make_agent(
                config.agent_config(Algorithm(algorithm), env.n_arms, env.dim, agent_seed)
            )
        rounds = _rounds(config, env, env_seed)
        started = clock()
        for ctx in rounds:
            if ctx.t <= start_round:
                continue
            arm = agent.select_arm(ctx)
            reward = draw_reward(ctx, arm, rng)
            agent.observe(ctx, arm, reward)
            agent.maybe_retrain(ctx.t)
            finished = clock()
            elapsed_ms = (finished - started) * 1e3
            started = finished
            regret = ctx.regret(arm)
            cumulative += regret
            epoch = (ctx.t - 1) // config.epoch_length + 1
            rows.append((ctx.t, arm, reward, regret, cumulative, epoch, elapsed_ms))
            if checkpoint_path is not None and _due(ctx.t, config):
                checkpoint = RunCheckpoint(
                    algorithm=label,
                    seed=seed,
                    config_hash=config.config_hash,
                    round=ctx.t,
                    agent=agent,
                    rng_state=rng.bit_generator.state,
                    rows=rows,
                )
                save_checkpoint(checkpoint, checkpoint_path)
    except Exception as e:
        trace = finish()
        raise RunError(
            f"{label} seed {seed} failed at round {len(rows) + 1}: {e}", trace=trace, cause=e
        ) from e

    trace = finish()
    params = getattr(agent, "params", None)
    if weights_path is not None and params is not None:
        dump_params(params, weights_path, config.config_hash)
    logger.info(
        "%s seed %d: final regret %.4g over %d rounds", label, seed, trace.final_regret, len(trace)
    )
    return trace


def aggregate_traces(traces: list[RegretTrace]) -> RegretAggregate:
    """Per-round mean and population standard deviation of cumulative regret.

    Rows are aligned on t; runs that stopped early only count where they have data.
    """
    if not traces:
        raise BanditConfigError("aggregate_traces needs at least one trace")
    labels = {trace.algorithm for trace in traces}
    hashes = {trace.config_hash for trace in traces}
    if len(labels) != 1 or len(hashes) != 1:
        raise BanditConfigError("traces of different algorithms or configs cannot be aggregated")

    ordered = sorted(traces, key=lambda trace: trace.seed)
    wide = pd.concat(
        [trace.frame.set_index("t")["cum_regret"].rename(trace.seed) for trace in ordered], axis=1
    ).sort_index()
    frame = pd.DataFrame(
        {
            "t": wide.index.astype("int64"),
            "mean": wide.mean(axis=1).to_numpy(),
            "std": wide.std(axis=1, ddof=0).to_numpy(),
            "n": wide.notna().sum(axis=1).astype("int64").to_numpy(),
        },
        columns=list(AGGREGATE_COLUMNS),
    )
    return RegretAggregate(algorithm=labels.pop(), config_hash=hashes.pop(), frame=frame)


def _resume_point(
    path: Path, config: ExperimentConfig, label: str, seed: int
) -> RunCheckpoint | None:
    if not path.is_file():
        return None
    try:
        checkpoint = load_checkpoint(path)
    except ArtifactError as e:
        logger.warning("ignoring unreadable checkpoint: %s", e)
        return None
    if (checkpoint.algorithm, checkpoint.seed, checkpoint.config_hash) != (
        label,
        seed,
        config.config_hash,
    ):
        logger.warning("ignoring checkpoint %s from a different run", path)
        return None
    return checkpoint


def _run_job(
    config: ExperimentConfig,
    env: ResolvedEnvironment,
    algorithm: Algorithm,
    seed: int,
    resume: bool = False,
) -> RegretTrace | RunFailure:
    out_path = trace_path(config.output_dir, algorithm.value, seed)
    weights_path = None
    if config.save_weights and algorithm.is_neural:
        weights_path = out_path.with_suffix(".weights.json")
    checkpoint_path = out_path.with_suffix(".ckpt") if config.checkpoint_every else None
    resume_from = None
    if resume and checkpoint_path is not None:
        resume_from = _resume_point(checkpoint_path, config, algorithm.value, seed)
    try:
        trace = run_one(
            config,
            algorithm,
            seed,
            env=env,
            out_path=out_path,
            weights_path=weights_path,
            checkpoint_path=checkpoint_path,
            resume=resume_from,
        )
    except RunError as e:
        return RunFailure(
            algorithm=algorithm.value,
            seed=seed,
            message=str(e),
            rounds_completed=len(e.trace) if e.trace is not None else 0,
        )
    if checkpoint_path is not None:
        checkpoint_path.unlink(missing_ok=True)
    return trace


def run_suite(config: ExperimentConfig, *, resume: bool = False) -> SuiteResult:
    """Every algorithm over seeds base_seed .. base_seed + repetitions - 1.

    Writes one trace CSV per run and one aggregate CSV per algorithm to
    config.output_dir. Failed runs are recorded and left out of the
    aggregates; the suite carries on. With resume, runs pick up from their
    checkpoint when one from the same config is present.
    """
    env = check_config(config)
    seeds = [config.base_seed + r for r in range(config.repetitions)]
    jobs = [(algorithm, seed) for algorithm in config.algorithms for seed in seeds]
    logger.info(
        "suite %s: %d runs on %s with %d worker(s)",
        config.config_hash[:12],
        len(jobs),
        env.name,
        config.workers,
    )

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_run_job, config, env, alg, seed, resume) for alg, seed in jobs]
            outcomes = [future.result() for future in futures]
    else:
        outcomes = [_run_job(config, env, alg, seed, resume) for alg, seed in jobs]

    failures = [o for o in outcomes if isinstance(o, RunFailure)]
    for failure in failures:
        logger.warning("run failed: %s", failure.message)

    aggregates = []
    for algorithm in config.algorithms:
        traces = [
            o for o in outcomes if isinstance(o, RegretTrace) and o.algorithm == algorithm.value
        ]
        if not traces:
            continue
        aggregate = aggregate_traces(traces)
        emit_csv(aggregate, config.output_dir / f"aggregate-{algorithm.value}.csv")
        aggregates.append(aggregate)

    logger.info("suite finished: %d runs, %d failed", len(jobs), len(failures))
    return SuiteResult(
        config_hash=config.config_hash,
        output_dir=config.output_dir,
        traces=[trace_path(config.output_dir, alg.value, seed) for alg, seed in jobs],
        aggregates=aggregates,
        failures=failures,
    )
