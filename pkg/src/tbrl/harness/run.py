"""Curriculum execution: thread the library forward, collect the report."""

from __future__ import annotations

import logging
import time
from pathlib import Path

from ..agent import AbstractionLibrary, solve_level
from ..envs import load_level
from ..llm import Cassette, CassetteRecorder, ChatClient, HttpTransport
from ..scripted import ScriptedSynthesizer
from .config import ConfigError, CurriculumConfig
from .report import RunReport, row_from_result

__all__ = ["build_client", "run_curriculum"]

logger = logging.getLogger(__name__)


def build_client(config: CurriculumConfig) -> ChatClient:
    client_cfg = config.client
    recorder = None
    if client_cfg.record:
        recorder = CassetteRecorder(config.resolve(client_cfg.record))
    if client_cfg.mode == "replay":
        cassette = Cassette.load(config.resolve(client_cfg.cassette))
        if not cassette.check_trailer():
            raise ConfigError("cassette totals do not match its exchanges")
        return ChatClient(cassette=cassette, recorder=recorder)
    if client_cfg.mode == "scripted":
        return ChatClient(transport=ScriptedSynthesizer(), recorder=recorder)
    return ChatClient(transport=HttpTransport(), recorder=recorder)


def run_curriculum(
    config: CurriculumConfig,
    client: ChatClient | None = None,
    library: AbstractionLibrary | None = None,
) -> RunReport:
    """Execute the episodes in order.

    Level failures are recorded and the run continues; configuration and
    cassette errors abort.  In full mode the abstraction library threads
    forward episode to episode; no-curriculum mode starts each episode
    blank (handled inside the episode loop).
    """
    client = client or build_client(config)
    library = library or AbstractionLibrary()
    report = RunReport(mode=config.mode)
    for episode in config.episodes:
        spec = load_level(config.resolve(episode.level))
        started = time.monotonic()
        result = solve_level(spec, episode.seed, library, client, config.agent)
        logger.info(
            "level %s: solved=%s compute=%.0fms network=%dms",
            spec.name,
            result.solved,
            (time.monotonic() - started) * 1000 - result.network_ms,
            result.network_ms,
        )
        report.rows.append(row_from_result(result))
    if config.library_out:
        library.save(config.resolve(config.library_out))
    if client.recorder is not None:
        client.recorder.close()
    return report
