from neural_linucb.harness.artifacts import (
    AGGREGATE_SCHEMA,
    GRAM_SCHEMA,
    SWEEP_SCHEMA,
    TRACE_SCHEMA,
    emit_csv,
    emit_table,
    read_aggregate,
    read_table,
    read_trace,
)
from neural_linucb.harness.checkpoint import (
    CHECKPOINT_FORMAT,
    CHECKPOINT_VERSION,
    load_checkpoint,
    save_checkpoint,
)
from neural_linucb.harness.config import (
    ENV_OUTPUT_DIR,
    build_config,
    check_config,
    load_config,
    parse_key_values,
    resolve_environment,
)
from neural_linucb.harness.models import (
    PROFILE_DEFAULTS,
    ExperimentConfig,
    NTKSettings,
    Profile,
    RegretAggregate,
    RegretTrace,
    ResolvedEnvironment,
    RunCheckpoint,
    RunFailure,
    SuiteResult,
)
from neural_linucb.harness.runner import aggregate_traces, run_one, run_seeds, run_suite
from neural_linucb.harness.svg import emit_svg, render_svg

__all__ = [
    "AGGREGATE_SCHEMA",
    "CHECKPOINT_FORMAT",
    "CHECKPOINT_VERSION",
    "ENV_OUTPUT_DIR",
    "GRAM_SCHEMA",
    "PROFILE_DEFAULTS",
    "SWEEP_SCHEMA",
    "TRACE_SCHEMA",
    "ExperimentConfig",
    "NTKSettings",
    "Profile",
    "RegretAggregate",
    "RegretTrace",
    "ResolvedEnvironment",
    "RunCheckpoint",
    "RunFailure",
    "SuiteResult",
    "aggregate_traces",
    "build_config",
    "check_config",
    "emit_csv",
    "emit_svg",
    "emit_table",
    "load_checkpoint",
    "load_config",
    "parse_key_values",
    "read_aggregate",
    "read_table",
    "read_trace",
    "render_svg",
    "resolve_environment",
    "run_one",
    "run_seeds",
    "run_suite",
    "save_checkpoint",
]
