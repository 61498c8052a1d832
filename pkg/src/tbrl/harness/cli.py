"""Command-line interface.

Verbs: run (curriculum), solve (single level), plan (PDDL passthrough),
record (run while writing a cassette), replay (run against a cassette),
report (re-render a structured report).  Exit codes: 0 all solved,
2 some level unsolved, 1 configuration or infrastructure error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from ..agent import AbstractionLibrary, AgentConfig, solve_level
from ..envs import load_level
from ..llm import Cassette, CassetteRecorder, ChatClient, HttpTransport
from ..pddl import parse_domain, parse_problem, plan as pddl_plan, PddlError
from ..scripted import ScriptedSynthesizer
from .config import ConfigError, load_config
from .report import RunReport, emit_report, row_from_result
from .run import run_curriculum

__all__ = ["main"]

logger = logging.getLogger(__name__)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tbrl", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    run = sub.add_parser("run", help="run a curriculum from a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--mode", choices=["full", "no-curriculum", "flat"])
    run.add_argument("--cassette", help="override: replay from this cassette")
    run.add_argument("--out", help="write the structured report here")

    solve = sub.add_parser("solve", help="solve a single level")
    solve.add_argument("--level", required=True)
    solve.add_argument("--mode", choices=["full", "no-curriculum", "flat"], default="full")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--cassette", help="replay from this cassette instead of scripted mode")
    solve.add_argument("--live", action="store_true", help="use the configured HTTP endpoint")
    solve.add_argument("--max-nodes", type=int, default=200_000)
    solve.add_argument("--out", help="write the structured report here")

    plan = sub.add_parser("plan", help="plan over a PDDL domain/problem pair")
    plan.add_argument("--domain", required=True)
    plan.add_argument("--problem", required=True)
    plan.add_argument("--max-nodes", type=int, default=100_000)

    record = sub.add_parser("record", help="run a curriculum and record a cassette")
    record.add_argument("--config", required=True)
    record.add_argument("--cassette", required=True, help="cassette file to write")
    record.add_argument("--live", action="store_true", help="record from the HTTP endpoint")
    record.add_argument("--out", help="write the structured report here")

    replay = sub.add_parser("replay", help="run a curriculum against a recorded cassette")
    replay.add_argument("--config", required=True)
    replay.add_argument("--cassette", required=True)
    replay.add_argument("--out", help="write the structured report here")

    report = sub.add_parser("report", help="re-render a structured report")
    report.add_argument("--in", dest="path", required=True)
    report.add_argument("--format", choices=["table", "structured"], default="table")
    return parser


def _finish(report: RunReport, out: str | None) -> int:
    structured = emit_report(report, "structured")
    if out:
        Path(out).write_text(structured, encoding="utf-8")
    sys.stdout.write(emit_report(report, "table"))
    return 0 if report.all_solved else 2


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.mode:
        agent = dataclasses.replace(config.agent, mode=args.mode)
        config = dataclasses.replace(config, mode=args.mode, agent=agent)
    if args.cassette:
        client_cfg = dataclasses.replace(config.client, mode="replay", cassette=args.cassette)
        config = dataclasses.replace(config, client=client_cfg)
    return _finish(run_curriculum(config), args.out)


def _cmd_solve(args) -> int:
    spec = load_level(args.level)
    if args.cassette:
        client = ChatClient(cassette=Cassette.load(args.cassette))
    elif args.live:
        client = ChatClient(transport=HttpTransport())
    else:
        client = ChatClient(transport=ScriptedSynthesizer())
    agent_config = AgentConfig(mode=args.mode, bfs_node_budget=args.max_nodes)
    result = solve_level(spec, args.seed, AbstractionLibrary(), client, agent_config)
    report = RunReport(mode=args.mode, rows=[row_from_result(result)])
    return _finish(report, args.out)


def _cmd_plan(args) -> int:
    domain = parse_domain(Path(args.domain).read_text(encoding="utf-8"))
    problem = parse_problem(Path(args.problem).read_text(encoding="utf-8"))
    steps = pddl_plan(domain, problem, max_nodes=args.max_nodes)
    for op in steps:
        sys.stdout.write(op.label() + "\n")
    sys.stdout.write(f"; {len(steps)} steps\n")
    return 0


def _cmd_record(args) -> int:
    config = load_config(args.config)
    mode = "live" if args.live else "scripted"
    client_cfg = dataclasses.replace(
        config.client, mode=mode, cassette="", record=args.cassette
    )
    config = dataclasses.replace(config, client=client_cfg)
    return _finish(run_curriculum(config), args.out)


def _cmd_replay(args) -> int:
    config = load_config(args.config)
    client_cfg = dataclasses.replace(
        config.client, mode="replay", cassette=args.cassette, record=""
    )
    config = dataclasses.replace(config, client=client_cfg)
    return _finish(run_curriculum(config), args.out)


def _cmd_report(args) -> int:
    data = json.loads(Path(args.path).read_text(encoding="utf-8"))
    sys.stdout.write(emit_report(RunReport.from_dict(data), args.format))
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "solve": _cmd_solve,
    "plan": _cmd_plan,
    "record": _cmd_record,
    "replay": _cmd_replay,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.verb](args)
    except (ConfigError, PddlError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
