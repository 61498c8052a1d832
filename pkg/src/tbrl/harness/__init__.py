"""Operational shell: configs, curriculum runner, reports, CLI."""

from .config import (
    ClientConfig,
    ConfigError,
    CurriculumConfig,
    Episode,
    load_config,
    parse_config,
    shuffle_ablation,
)
from .report import PURPOSES, RunReport, emit_report, row_from_result
from .run import build_client, run_curriculum

__all__ = [
    "PURPOSES",
    "ClientConfig",
    "ConfigError",
    "CurriculumConfig",
    "Episode",
    "RunReport",
    "build_client",
    "emit_report",
    "load_config",
    "parse_config",
    "row_from_result",
    "run_curriculum",
    "shuffle_ablation",
]
