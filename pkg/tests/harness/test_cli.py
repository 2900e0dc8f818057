import json
import logging
import xml.etree.ElementTree as ET
from collections.abc import Iterator
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from neural_linucb.harness.artifacts import GRAM_SCHEMA, SWEEP_SCHEMA, read_table
from neural_linucb.harness.cli import main
from neural_linucb.harness.config import load_config
from neural_linucb.harness.svg import SVG_NS
from tests.conftest import write_config


@pytest.fixture(autouse=True)
def _restore_logging() -> Iterator[None]:
    # the group callback reconfigures the root logger
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def config_path(tmp_path: Path) -> Path:
    return write_config(
        tmp_path / "exp.cfg",
        environment="synthetic:linear",
        synthetic_dim=3,
        synthetic_arms=3,
        algorithms="linucb, uniform",
        horizon=30,
        epoch_length=10,
        repetitions=2,
        output_dir=tmp_path / "runs",
    )


def _write_points(path: Path, n: int, raw_dim: int, seed: int = 0) -> Path:
    rng = np.random.default_rng(seed)
    np.savetxt(path, rng.normal(size=(n, raw_dim)), delimiter=",")
    return path


class TestValidate:
    def test_well_formed_config(self, runner: CliRunner, config_path: Path) -> None:
        result = runner.invoke(main, ["validate", "--config", str(config_path)])
        assert result.exit_code == 0, result.output
        assert "ok: synthetic:linear with 3 arms, context dimension 8" in result.output

    def test_bad_key(self, runner: CliRunner, tmp_path: Path) -> None:
        path = write_config(tmp_path / "bad.cfg", environment="synthetic:linear", widht=16)
        result = runner.invoke(main, ["validate", "--config", str(path)])
        assert result.exit_code != 0
        assert "invalid config" in result.output


class TestRun:
    def test_writes_outputs(self, runner: CliRunner, config_path: Path, tmp_path: Path) -> None:
        result = runner.invoke(main, ["run", "--config", str(config_path)])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "runs" / "aggregate-linucb.csv").is_file()
        assert (tmp_path / "runs" / "uniform-seed1.csv").is_file()
        assert "linucb: mean final regret" in result.output

    def test_out_flag_overrides_config(
        self, runner: CliRunner, config_path: Path, tmp_path: Path
    ) -> None:
        out = tmp_path / "elsewhere"
        result = runner.invoke(main, ["run", "--config", str(config_path), "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert (out / "aggregate-uniform.csv").is_file()

    def test_missing_dataset_names_path(self, runner: CliRunner, tmp_path: Path) -> None:
        path = write_config(
            tmp_path / "exp.cfg", environment="magic", dataset_path="missing/magic04.data"
        )
        result = runner.invoke(main, ["--quiet", "run", "--config", str(path)])
        assert result.exit_code != 0
        assert "magic04.data" in result.output
        assert len(result.output.strip().splitlines()) == 1


class TestPlot:
    def test_plot_after_run(self, runner: CliRunner, config_path: Path, tmp_path: Path) -> None:
        assert runner.invoke(main, ["run", "--config", str(config_path)]).exit_code == 0
        svg = tmp_path / "regret.svg"
        result = runner.invoke(
            main, ["plot", "--in", str(tmp_path / "runs" / "*.csv"), "--out", str(svg)]
        )
        assert result.exit_code == 0, result.output
        assert svg.stat().st_size > 0
        assert "2 series" in result.output

    def test_plot_from_traces_only(
        self, runner: CliRunner, config_path: Path, tmp_path: Path
    ) -> None:
        assert runner.invoke(main, ["run", "--config", str(config_path)]).exit_code == 0
        svg = tmp_path / "linucb.svg"
        pattern = str(tmp_path / "runs" / "linucb-seed*.csv")
        result = runner.invoke(main, ["plot", "--in", pattern, "--out", str(svg)])
        assert result.exit_code == 0, result.output
        assert "1 series" in result.output

    def test_no_matches(self, runner: CliRunner, tmp_path: Path) -> None:
        result = runner.invoke(
            main, ["plot", "--in", str(tmp_path / "*.csv"), "--out", str(tmp_path / "x.svg")]
        )
        assert result.exit_code != 0
        assert "no trace or aggregate files" in result.output


class TestNtk:
    def test_gram_and_lambda_min(self, runner: CliRunner, tmp_path: Path) -> None:
        points = _write_points(tmp_path / "points.csv", n=6, raw_dim=3)
        out = tmp_path / "ntk"
        result = runner.invoke(
            main,
            ["ntk", "--points", str(points), "--depth", "2", "--preprocess", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        schema, metadata, frame = read_table(out / "gram.csv")
        assert schema == GRAM_SCHEMA
        assert frame.shape == (6, 6)
        assert float(metadata["lambda_min"]) > 0.0
        assert "lambda_min" in result.output

    def test_width_sweep(self, runner: CliRunner, tmp_path: Path) -> None:
        points = _write_points(tmp_path / "points.csv", n=4, raw_dim=2)
        out = tmp_path / "ntk"
        result = runner.invoke(
            main,
            [
                "ntk",
                "--points",
                str(points),
                "--depth",
                "1",
                "--widths",
                "8,16",
                "--seeds",
                "2",
                "--preprocess",
                "--out",
                str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        schema, _, frame = read_table(out / "gram_sweep.csv")
        assert schema == SWEEP_SCHEMA
        assert list(frame.columns) == ["m", "seed", "frob_error"]
        assert len(frame) == 4

    def test_points_must_be_unit(self, runner: CliRunner, tmp_path: Path) -> None:
        points = tmp_path / "points.csv"
        points.write_text("3,4\n1,0\n")
        result = runner.invoke(main, ["ntk", "--points", str(points), "--depth", "1"])
        assert result.exit_code != 0
        assert "unit norm" in result.output

    def test_bad_widths(self, runner: CliRunner, tmp_path: Path) -> None:
        points = _write_points(tmp_path / "points.csv", n=2, raw_dim=2)
        result = runner.invoke(
            main, ["ntk", "--points", str(points), "--depth", "1", "--widths", "8,x"]
        )
        assert result.exit_code != 0
        assert "comma-separated integers" in result.output


class TestConfigHashStamps:
    def test_run_and_plot_outputs(self, runner: CliRunner, tmp_path: Path) -> None:
        path = write_config(
            tmp_path / "exp.cfg",
            environment="synthetic:linear",
            synthetic_dim=3,
            synthetic_arms=3,
            algorithms="neural-linucb, uniform",
            horizon=20,
            epoch_length=10,
            width=8,
            max_iter=2,
            step_size=1e-3,
            repetitions=1,
            save_weights="true",
            output_dir=tmp_path / "runs",
        )
        expected = load_config(path).config_hash
        assert runner.invoke(main, ["run", "--config", str(path)]).exit_code == 0
        svg = tmp_path / "regret.svg"
        result = runner.invoke(
            main, ["plot", "--in", str(tmp_path / "runs" / "*.csv"), "--out", str(svg)]
        )
        assert result.exit_code == 0, result.output

        runs = tmp_path / "runs"
        for name in ("neural-linucb-seed0.csv", "aggregate-uniform.csv"):
            _, metadata, _ = read_table(runs / name)
            assert metadata["config_hash"] == expected
        weights = json.loads((runs / "neural-linucb-seed0.weights.json").read_text())
        assert weights["config_hash"] == expected

        root = ET.parse(svg).getroot()
        desc = root.find(f"{{{SVG_NS}}}desc")
        assert desc is not None
        assert desc.text == f"config_hash={expected}"
        series = root.findall(f".//{{{SVG_NS}}}g[@class='series']")
        assert {g.get("data-config-hash") for g in series} == {expected}

    def test_ntk_outputs(self, runner: CliRunner, tmp_path: Path) -> None:
        points = _write_points(tmp_path / "points.csv", n=4, raw_dim=2)

        def hashes(depth: str, out: Path) -> tuple[str, str]:
            args = ["ntk", "--points", str(points), "--depth", depth, "--widths", "8"]
            result = runner.invoke(main, [*args, "--seeds", "1", "--preprocess", "--out", str(out)])
            assert result.exit_code == 0, result.output
            _, gram, _ = read_table(out / "gram.csv")
            _, sweep, _ = read_table(out / "gram_sweep.csv")
            return gram["config_hash"], sweep["config_hash"]

        first = hashes("1", tmp_path / "a")
        assert first[0] == first[1]
        assert hashes("1", tmp_path / "b") == first
        assert hashes("2", tmp_path / "c") != first
