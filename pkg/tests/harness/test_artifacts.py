from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from neural_linucb.exceptions import ArtifactError
from neural_linucb.harness.artifacts import (
    AGGREGATE_SCHEMA,
    TRACE_SCHEMA,
    emit_csv,
    emit_table,
    read_aggregate,
    read_table,
    read_trace,
)
from neural_linucb.harness.models import AGGREGATE_COLUMNS, TRACE_COLUMNS, RegretTrace
from neural_linucb.harness.runner import aggregate_traces


def _trace(seed: int = 0, rounds: int = 5) -> RegretTrace:
    rng = np.random.default_rng(seed)
    regrets = rng.uniform(0.0, 1.0, size=rounds) / 3.0
    rows = [
        (t, t % 3, float(rng.normal()), float(r), float(regrets[:t].sum()), (t - 1) // 2 + 1, 0.125)
        for t, r in zip(range(1, rounds + 1), regrets, strict=True)
    ]
    return RegretTrace.from_rows(rows, algorithm="linucb", seed=seed, config_hash="abc123")


class TestTraceFiles:
    def test_schema_line_and_header(self, tmp_path: Path) -> None:
        path = emit_csv(_trace(), tmp_path / "linucb-seed0.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == f"#schema={TRACE_SCHEMA} algorithm=linucb seed=0 config_hash=abc123"
        assert lines[1] == ",".join(TRACE_COLUMNS)
        assert len(lines) == 2 + 5

    def test_read_back_to_nine_digits(self, tmp_path: Path) -> None:
        trace = _trace(seed=4)
        loaded = read_trace(emit_csv(trace, tmp_path / "t.csv"))
        assert (loaded.algorithm, loaded.seed, loaded.config_hash) == ("linucb", 4, "abc123")
        assert list(loaded.frame["t"]) == list(trace.frame["t"])
        np.testing.assert_allclose(
            loaded.frame["cum_regret"], trace.frame["cum_regret"], rtol=1e-8
        )
        assert loaded.frame.dtypes["arm"] == np.int64

    def test_empty_trace_keeps_header(self, tmp_path: Path) -> None:
        empty = RegretTrace.from_rows([], algorithm="linucb", seed=1, config_hash="abc123")
        path = emit_csv(empty, tmp_path / "empty.csv")
        assert path.read_text().splitlines()[1] == ",".join(TRACE_COLUMNS)
        loaded = read_trace(path)
        assert len(loaded) == 0
        assert loaded.final_regret == 0.0

    def test_parent_directories_created(self, tmp_path: Path) -> None:
        path = emit_csv(_trace(), tmp_path / "a" / "b" / "t.csv")
        assert path.is_file()


class TestAggregateFiles:
    def test_columns_and_schema(self, tmp_path: Path) -> None:
        aggregate = aggregate_traces([_trace(0), _trace(1)])
        path = emit_csv(aggregate, tmp_path / "aggregate-linucb.csv")
        schema, metadata, frame = read_table(path)
        assert schema == AGGREGATE_SCHEMA
        assert metadata == {"algorithm": "linucb", "config_hash": "abc123"}
        assert tuple(frame.columns) == AGGREGATE_COLUMNS

    def test_read_aggregate(self, tmp_path: Path) -> None:
        aggregate = aggregate_traces([_trace(0), _trace(1), _trace(2)])
        loaded = read_aggregate(emit_csv(aggregate, tmp_path / "agg.csv"))
        assert loaded.n_runs == 3
        np.testing.assert_allclose(loaded.frame["mean"], aggregate.frame["mean"], rtol=1e-8)


class TestReadErrors:
    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ArtifactError, match="artifact not found") as exc_info:
            read_trace(tmp_path / "nope.csv")
        assert exc_info.value.path == tmp_path / "nope.csv"

    def test_schema_mismatch(self, tmp_path: Path) -> None:
        path = emit_csv(aggregate_traces([_trace()]), tmp_path / "agg.csv")
        with pytest.raises(ArtifactError, match="expected neural-linucb-trace/1"):
            read_trace(path)

    def test_no_schema_line(self, tmp_path: Path) -> None:
        path = tmp_path / "plain.csv"
        pd.DataFrame({"t": [1]}).to_csv(path, index=False)
        with pytest.raises(ArtifactError, match="no #schema= line"):
            read_table(path)

    def test_missing_metadata(self, tmp_path: Path) -> None:
        path = emit_table(_trace().frame, tmp_path / "t.csv", TRACE_SCHEMA, algorithm="linucb")
        with pytest.raises(ArtifactError, match="malformed trace"):
            read_trace(path)

    def test_metadata_with_spaces_rejected(self, tmp_path: Path) -> None:
        with pytest.raises(ArtifactError, match="cannot be stored"):
            emit_table(_trace().frame, tmp_path / "t.csv", TRACE_SCHEMA, algorithm="two words")
