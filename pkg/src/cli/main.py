import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from enum import IntEnum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from config.settings import Settings
from src.analysis import analyze, format_feedback
from src.checker import ConsistencyChecker, error_catalog
from src.compiler import PddlCompiler
from src.exceptions import CompileGuardError, InvalidPlanError, InvocationError, PddlParseError, PipelineError
from src.llm import (
    LlmClient,
    OpenAIChatClient,
    PipelineRunner,
    ReplayClient,
    RunRecord,
    aggregate_metrics,
    load_records,
    next_run_index,
    save_record,
)
from src.markup import parse_model
from src.model import ModelBundle
from src.planner import (
    ExternalPlannerConfig,
    PlannerStatus,
    PlanSource,
    SearchLimits,
    format_plan,
    invoke_external,
    parse_plan_text,
    solve_internal,
    validate_plan,
)

logger = logging.getLogger("src.cli")


class ExitCode(IntEnum):
    OK = 0
    FINDINGS = 1
    MARKUP_FAILURE = 2
    IO_FAILURE = 3
    RESOURCES_EXHAUSTED = 4
    INVOCATION_FAILURE = 5
    USAGE = 64


class UsageError(Exception):
    """Invalid command line"""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


class _Abort(Exception):
    """Stop a command with an exit code after reporting"""

    def __init__(self, code: ExitCode, message: str = ""):
        self.code = code
        self.message = message
        super().__init__(message)


def _emit(payload: Any, fmt: str, text: Optional[Callable[[Any], str]] = None) -> None:
    if fmt == "text" and text is not None:
        print(text(payload))
    else:
        print(json.dumps(payload, indent=2, ensure_ascii=False))


def _load_bundle(path: str, fmt: str) -> ModelBundle:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _Abort(ExitCode.IO_FAILURE, f"cannot read {path}: {e.strerror or e}")
    result = parse_model(text)
    if not result.ok:
        _emit(result.to_dict(), fmt, _markup_text)
        raise _Abort(ExitCode.MARKUP_FAILURE, f"{path} is not a valid model document")
    return result.bundle


def _checked_bundle(path: str, fmt: str) -> ModelBundle:
    """Load a model and stop with exit 1 after printing the report when it has errors"""
    bundle = _load_bundle(path, fmt)
    report = ConsistencyChecker().check_model(bundle)
    if not report.is_clean:
        _emit(report.to_dict(), fmt, _report_text)
        raise _Abort(ExitCode.FINDINGS, f"{path} has {len(report.errors)} consistency errors")
    return bundle


def _markup_text(payload: Dict[str, Any]) -> str:
    return "\n".join(f"{e['path'] or '/'}: {e['message']}" for e in payload["errors"])


def _report_text(payload: Dict[str, Any]) -> str:
    if not payload["errors"]:
        return "No consistency errors."
    lines = []
    for error in payload["errors"]:
        lines.append(f"{error['code']} at {error['location']}: {error['description']}")
        lines.append(f"    suggestion: {error['suggestion']}")
    lines.append(f"{payload['error_count']} errors")
    return "\n".join(lines)


def _catalog_text(payload: List[Dict[str, Any]]) -> str:
    return "\n".join(f"{entry['rate'] * 100:6.2f}%  {entry['code']}" for entry in payload)


def _summary_text(payload: Dict[str, Any]) -> str:
    summary = payload["summary"]
    lines = [f"runs: {summary['runs']}"]
    for key in ("action_count", "initial_error_count", "correction_iterations"):
        s = summary[key]
        lines.append(f"{key}: {s['mean']:.2f} ± {s['std']:.2f} ({s['min']:g}-{s['max']:g})")
    if summary["iteration_duration"] is not None:
        s = summary["iteration_duration"]
        lines.append(f"iteration duration: {s['mean']:.2f}s ± {s['std']:.2f}s")
    lines.append(f"non completed: {summary['non_completed_rate']:.0%}")
    lines.append(f"non reachable: {summary['non_reachable_rate']:.0%}")
    if summary["mean_action_coverage"] is not None:
        lines.append(f"action coverage: {summary['mean_action_coverage']:.0%}")
    return "\n".join(lines)


def cmd_check(args: argparse.Namespace, config: Settings) -> ExitCode:
    bundle = _load_bundle(args.path, args.format)
    report = ConsistencyChecker().check_model(bundle)
    _emit(report.to_dict(), args.format, _report_text)
    return ExitCode.OK if report.is_clean else ExitCode.FINDINGS


def cmd_compile(args: argparse.Namespace, config: Settings) -> ExitCode:
    bundle = _checked_bundle(args.path, args.format)
    compiler = PddlCompiler()
    try:
        domain_text = compiler.compile_domain(bundle.domain)
        problem_text = compiler.compile_problem(bundle)
    except CompileGuardError as e:
        raise _Abort(ExitCode.FINDINGS, str(e))

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "domain.pddl").write_text(domain_text, encoding="utf-8")
        (out_dir / "problem.pddl").write_text(problem_text, encoding="utf-8")
    except OSError as e:
        raise _Abort(ExitCode.IO_FAILURE, f"cannot write to {out_dir}: {e.strerror or e}")

    payload = {"domain": str(out_dir / "domain.pddl"), "problem": str(out_dir / "problem.pddl")}
    _emit(payload, args.format, lambda p: f"wrote {p['domain']}\nwrote {p['problem']}")
    return ExitCode.OK


def cmd_reach(args: argparse.Namespace, config: Settings) -> ExitCode:
    bundle = _checked_bundle(args.path, args.format)
    plan = None
    if args.plan:
        try:
            plan = parse_plan_text(Path(args.plan).read_text(encoding="utf-8"), PlanSource.EXTERNAL)
        except OSError as e:
            raise _Abort(ExitCode.IO_FAILURE, f"cannot read {args.plan}: {e.strerror or e}")
        except PddlParseError as e:
            raise _Abort(ExitCode.MARKUP_FAILURE, f"{args.plan}: {e}")

    try:
        report = analyze(bundle, plan)
    except InvalidPlanError as e:
        _emit({"error": str(e), "step_index": e.step_index}, args.format, lambda p: f"invalid plan: {p['error']}")
        return ExitCode.FINDINGS

    payload = report.to_dict()
    payload["feedback"] = format_feedback(report)
    _emit(payload, args.format, lambda p: p["feedback"])
    ok = report.goal_reachable and (plan is None or report.action_coverage == 1.0)
    return ExitCode.OK if ok else ExitCode.FINDINGS


def cmd_plan(args: argparse.Namespace, config: Settings) -> ExitCode:
    bundle = _checked_bundle(args.path, args.format)

    if args.external:
        planner_config = ExternalPlannerConfig.from_file(args.external)
        compiler = PddlCompiler()
        try:
            domain_text = compiler.compile_domain(bundle.domain)
            problem_text = compiler.compile_problem(bundle)
        except CompileGuardError as e:
            raise _Abort(ExitCode.FINDINGS, str(e))
        result = invoke_external(planner_config, domain_text, problem_text)
        if result.plan is not None:
            validation = validate_plan(bundle, result.plan)
            if not validation.valid:
                raise _Abort(ExitCode.INVOCATION_FAILURE,
                             f"external plan fails at step {validation.step_index}: {validation.reason}")
    else:
        result = solve_internal(bundle, _search_limits(config, args.max_states, args.time_budget))

    if result.plan is not None and args.out:
        try:
            Path(args.out).write_text(format_plan(result.plan), encoding="utf-8")
        except OSError as e:
            raise _Abort(ExitCode.IO_FAILURE, f"cannot write {args.out}: {e.strerror or e}")

    def text(payload: Dict[str, Any]) -> str:
        if payload["plan"] is None:
            return payload["status"]
        return format_plan(result.plan).rstrip("\n")

    _emit(result.to_dict(), args.format, text)
    return {
        PlannerStatus.SOLVED: ExitCode.OK,
        PlannerStatus.UNSOLVABLE: ExitCode.FINDINGS,
        PlannerStatus.RESOURCES_EXHAUSTED: ExitCode.RESOURCES_EXHAUSTED,
    }[result.status]


def _search_limits(config: Settings, max_states: Optional[int] = None,
                   time_budget: Optional[float] = None) -> SearchLimits:
    """Explicit flag values override the configured limits"""
    try:
        return SearchLimits(
            max_expanded_states=config.SEARCH_MAX_EXPANDED_STATES if max_states is None else max_states,
            wall_clock_budget=config.SEARCH_WALL_CLOCK_BUDGET if time_budget is None else time_budget,
        )
    except ValueError as e:
        raise UsageError(f"invalid search limits: {e}")


def _execute_run(client: LlmClient, goal: str, cap: int, limits: SearchLimits) -> RunRecord:
    runner = PipelineRunner(client, cap, limits)
    try:
        return runner.run(goal).record
    except PipelineError as e:
        logger.error(f"Run aborted: {e}")
        return runner.record


def cmd_generate(args: argparse.Namespace, config: Settings) -> ExitCode:
    if args.runs < 1:
        raise UsageError("--runs must be at least 1")
    cap = config.CORRECTION_CAP if args.cap is None else args.cap
    if cap < 1:
        raise UsageError("--cap must be at least 1")
    limits = _search_limits(config)

    if args.replay:
        try:
            transcript = ReplayClient.from_directory(args.replay)
        except OSError as e:
            raise _Abort(ExitCode.IO_FAILURE, str(e))
        clients: List[LlmClient] = [transcript.fresh() for _ in range(args.runs)]
    else:
        shared = OpenAIChatClient(base_url=args.endpoint, config=config)
        clients = [shared] * args.runs

    runs_dir = args.runs_dir or config.RUNS_DIR
    first_index = next_run_index(runs_dir)

    if args.parallel and args.runs > 1:
        with ThreadPoolExecutor(max_workers=args.runs) as pool:
            records = list(pool.map(lambda client: _execute_run(client, args.goal, cap, limits), clients))
    else:
        records = [_execute_run(client, args.goal, cap, limits) for client in clients]

    try:
        paths = [str(save_record(record, runs_dir, first_index + i)) for i, record in enumerate(records)]
    except OSError as e:
        raise _Abort(ExitCode.IO_FAILURE, f"cannot write run records to {runs_dir}: {e.strerror or e}")

    payload = {"records": paths, "summary": aggregate_metrics(records).to_dict()}
    _emit(payload, args.format, _summary_text)
    all_completed = all(record.completed and record.error is None for record in records)
    return ExitCode.OK if all_completed else ExitCode.FINDINGS


def cmd_catalog(args: argparse.Namespace, config: Settings) -> ExitCode:
    _emit([entry.to_dict() for entry in error_catalog()], args.format, _catalog_text)
    return ExitCode.OK


def cmd_stats(args: argparse.Namespace, config: Settings) -> ExitCode:
    runs_dir = args.runs_dir or config.RUNS_DIR
    try:
        records = load_records(runs_dir)
    except (OSError, ValueError) as e:
        raise _Abort(ExitCode.IO_FAILURE, str(e))
    if not records:
        raise _Abort(ExitCode.FINDINGS, f"no run records in {runs_dir}")
    payload = {"records": len(records), "summary": aggregate_metrics(records).to_dict()}
    _emit(payload, args.format, _summary_text)
    return ExitCode.OK


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json", help="Output format")
    common.add_argument("--config", help="Config file (dotenv format)")
    common.add_argument("--log-level", help="Logging level, e.g. DEBUG")

    parser = _ArgumentParser(prog="plangen", description="LLM-assisted planning model generation pipeline")
    subparsers = parser.add_subparsers(dest="command", required=True)

    check = subparsers.add_parser("check", parents=[common], help="Check a model document for consistency errors")
    check.add_argument("path")
    check.set_defaults(handler=cmd_check)

    compile_ = subparsers.add_parser("compile", parents=[common], help="Compile a model document to PDDL")
    compile_.add_argument("path")
    compile_.add_argument("--out", default=".", help="Output directory for domain.pddl and problem.pddl")
    compile_.set_defaults(handler=cmd_compile)

    reach = subparsers.add_parser("reach", parents=[common], help="Reachability analysis of a model")
    reach.add_argument("path")
    reach.add_argument("--plan", help="Plan file to measure action coverage")
    reach.set_defaults(handler=cmd_reach)

    plan = subparsers.add_parser("plan", parents=[common], help="Find a plan for a model")
    plan.add_argument("path")
    plan.add_argument("--external", help="External planner config (JSON)")
    plan.add_argument("--out", help="Write the plan in IPC format to this file")
    plan.add_argument("--max-states", type=int, help="Maximum number of expanded states")
    plan.add_argument("--time-budget", type=float, help="Wall clock budget in seconds")
    plan.set_defaults(handler=cmd_plan)

    generate = subparsers.add_parser("generate", parents=[common], help="Run the LLM generation pipeline")
    generate.add_argument("goal")
    source = generate.add_mutually_exclusive_group(required=True)
    source.add_argument("--replay", help="Directory of numbered canned replies")
    source.add_argument("--endpoint", help="Base URL of an OpenAI-compatible endpoint")
    generate.add_argument("--cap", type=int, help="Correction iteration cap")
    generate.add_argument("--runs", type=int, default=1, help="Number of runs")
    generate.add_argument("--parallel", action="store_true", help="Execute runs concurrently")
    generate.add_argument("--runs-dir", help="Directory for run records")
    generate.set_defaults(handler=cmd_generate)

    catalog = subparsers.add_parser("catalog", parents=[common], help="Print the consistency error catalog")
    catalog.set_defaults(handler=cmd_catalog)

    stats = subparsers.add_parser("stats", parents=[common], help="Aggregate existing run records")
    stats.add_argument("--runs-dir", help="Directory of run records")
    stats.set_defaults(handler=cmd_stats)
    return parser


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point

    Returns:
        Exit code from the closed set 0, 1, 2, 3, 4, 5, 64
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return ExitCode.USAGE
    except SystemExit as e:
        return ExitCode.OK if e.code in (0, None) else ExitCode.USAGE

    try:
        config = Settings.from_sources({"LOG_LEVEL": args.log_level}, args.config)
    except ValueError as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return ExitCode.USAGE
    _configure_logging(config.LOG_LEVEL)

    try:
        return int(args.handler(args, config))
    except _Abort as e:
        if e.message:
            print(e.message, file=sys.stderr)
        return int(e.code)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return ExitCode.USAGE
    except InvocationError as e:
        print(f"external planner failed: {e}", file=sys.stderr)
        if e.output:
            print(e.output, file=sys.stderr)
        return ExitCode.INVOCATION_FAILURE


if __name__ == "__main__":
    sys.exit(main())
