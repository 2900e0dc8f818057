"""Command-line entry point: ``neural-linucb run | validate | ntk | plot``."""

import glob
import logging
from collections import defaultdict
from pathlib import Path

import click
import numpy as np
import pandas as pd
from pydantic import ValidationError

from neural_linucb.environments.preprocess import preprocess_batch
from neural_linucb.exceptions import BanditError
from neural_linucb.harness.artifacts import (
    AGGREGATE_SCHEMA,
    GRAM_SCHEMA,
    SWEEP_SCHEMA,
    TRACE_SCHEMA,
    emit_table,
    read_aggregate,
    read_table,
    read_trace,
)
from neural_linucb.harness.config import check_config, load_config
from neural_linucb.harness.models import NTKSettings, RegretAggregate, RegretTrace
from neural_linucb.harness.runner import aggregate_traces, run_suite
from neural_linucb.harness.svg import emit_svg
from neural_linucb.ntk.gram import gram_convergence, mean_errors
from neural_linucb.ntk.kernel import ntk_matrix
from neural_linucb.ntk.spectrum import min_eigenvalue

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _fail(e: Exception) -> click.ClickException:
    if isinstance(e, ValidationError):
        return click.ClickException(e.errors()[0]["msg"])
    return click.ClickException(str(e).splitlines()[0])


def _parse_widths(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        widths = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from e
    if any(width <= 0 for width in widths):
        raise click.BadParameter("widths must be positive")
    return widths


def _read_points(path: Path) -> np.ndarray:
    try:
        frame = pd.read_csv(path, header=None, comment="#")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise click.ClickException(f"cannot read points from {path}: {e}") from e
    try:
        return frame.to_numpy(dtype=np.float64)
    except ValueError as e:
        raise click.ClickException(f"{path}: points must be numeric") from e


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level.")
@click.option("--quiet", is_flag=True, help="Log warnings and errors only.")
def main(verbose: bool, quiet: bool) -> None:
    """Neural-LinUCB contextual bandit experiments."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


@main.command()
@click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(path_type=Path),
    help="Experiment config file.",
)
@click.option(
    "--out", "output_dir", type=click.Path(path_type=Path), help="Overrides output_dir."
)
@click.option("--resume", is_flag=True, help="Continue runs from their checkpoints.")
def run(config_path: Path, output_dir: Path | None, resume: bool) -> None:
    """Run every configured algorithm over all repetitions."""
    try:
        config = load_config(config_path, output_dir=output_dir)
        result = run_suite(config, resume=resume)
    except BanditError as e:
        raise _fail(e) from e

    for aggregate in result.aggregates:
        final = float(aggregate.frame["mean"].iloc[-1])
        click.echo(
            f"{aggregate.algorithm}: mean final regret {final:.4g} over {aggregate.n_runs} runs"
        )
    click.echo(f"results in {result.output_dir} (config {result.config_hash[:12]})")
    if result.failures:
        raise click.ClickException(
            f"{len(result.failures)} of {len(result.traces)} runs failed; "
            f"first: {result.failures[0].message}"
        )


@main.command()
@click.option(
    "--config",
    "config_path",
    required=True,
    type=click.Path(path_type=Path),
    help="Experiment config file.",
)
def validate(config_path: Path) -> None:
    """Check a config file and its environment without running anything."""
    try:
        config = load_config(config_path)
        env = check_config(config)
    except BanditError as e:
        raise _fail(e) from e
    click.echo(
        f"ok: {env.name} with {env.n_arms} arms, context dimension {env.dim}, "
        f"config {config.config_hash[:12]}"
    )


@main.command()
@click.option(
    "--points",
    "points_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="CSV of points, one per row, no header.",
)
@click.option("--depth", required=True, type=click.IntRange(min=1), help="Kernel depth L.")
@click.option("--widths", help="Comma-separated widths for the Gram convergence sweep.")
@click.option("--seeds", default=5, show_default=True, type=click.IntRange(min=1))
@click.option(
    "--preprocess/--no-preprocess",
    default=False,
    help="Map raw rows to unit vectors with equal halves first.",
)
@click.option("--out", "output_dir", default="ntk", type=click.Path(path_type=Path))
def ntk(
    points_path: Path,
    depth: int,
    widths: str | None,
    seeds: int,
    preprocess: bool,
    output_dir: Path,
) -> None:
    """Write the NTK Gram matrix, its smallest eigenvalue and an optional width sweep."""
    sweep_widths = _parse_widths(widths)
    points = _read_points(points_path)
    try:
        settings = NTKSettings.for_points(
            points, depth=depth, widths=tuple(sweep_widths), seeds=seeds, preprocess=preprocess
        )
        if preprocess:
            points = preprocess_batch(points)
        gram = ntk_matrix(points, depth)
        lam_min = min_eigenvalue(gram)
        columns = [f"x{j}" for j in range(gram.size)]
        emit_table(
            pd.DataFrame(gram.matrix, columns=columns),
            output_dir / "gram.csv",
            GRAM_SCHEMA,
            depth=depth,
            n=gram.size,
            lambda_min=f"{lam_min:.9g}",
            config_hash=settings.config_hash,
        )
        click.echo(f"lambda_min = {lam_min:.9g} over {gram.size} points")

        if sweep_widths:
            # depth + 1 weight layers reach sigma_tilde at level depth
            rows = gram_convergence(points, depth + 1, sweep_widths, list(range(seeds)))
            emit_table(
                pd.DataFrame([row.model_dump() for row in rows])[["width", "seed", "frob_error"]]
                .rename(columns={"width": "m"}),
                output_dir / "gram_sweep.csv",
                SWEEP_SCHEMA,
                depth=depth + 1,
                config_hash=settings.config_hash,
            )
            for width, error in mean_errors(rows).items():
                click.echo(f"m = {width}: mean Frobenius error {error:.4g}")
    except (BanditError, ValidationError) as e:
        raise _fail(e) from e


def _collect(pattern: str) -> list[RegretAggregate]:
    paths = sorted(Path(p) for p in glob.glob(pattern, recursive=True))
    aggregates: list[RegretAggregate] = []
    traces: dict[tuple[str, str], list[RegretTrace]] = defaultdict(list)
    for path in paths:
        if path.suffix != ".csv":
            continue
        schema, _, _ = read_table(path)
        if schema == AGGREGATE_SCHEMA:
            aggregates.append(read_aggregate(path))
        elif schema == TRACE_SCHEMA:
            trace = read_trace(path)
            traces[(trace.algorithm, trace.config_hash)].append(trace)
        else:
            logger.debug("skipping %s (%s)", path, schema)
    # traces only count for algorithms that have no aggregate file
    covered = {(a.algorithm, a.config_hash) for a in aggregates}
    for key, group in traces.items():
        if key not in covered:
            aggregates.append(aggregate_traces(group))
    return aggregates


@main.command()
@click.option("--in", "pattern", required=True, help="Glob of trace or aggregate CSV files.")
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--title", help="Chart title.")
def plot(pattern: str, out_path: Path, title: str | None) -> None:
    """Plot mean cumulative regret with a one-std band per algorithm."""
    try:
        aggregates = _collect(pattern)
        if not aggregates:
            raise click.ClickException(f"no trace or aggregate files match {pattern!r}")
        emit_svg(aggregates, out_path, title=title)
    except BanditError as e:
        raise _fail(e) from e
    click.echo(f"wrote {out_path} ({len(aggregates)} series)")
