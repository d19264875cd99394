import logging
import time
from typing import Dict, List, NamedTuple, Optional, Sequence

from config.prompts import PROMPTS_VERSION
from src.analysis import ReachabilityReport, analyze, format_feedback
from src.checker import CheckReport, ConsistencyChecker
from src.compiler import PddlCompiler
from src.exceptions import CompileGuardError, IterationError
from src.llm.client import ChatMessage, LlmClient, Role
from src.llm.prompting import extract_json, prompt_correction, prompt_markup, prompt_textual_plan
from src.llm.records import RunRecord
from src.markup import parse_model, serialize_model
from src.model import ModelBundle
from src.planner import Plan, SearchLimits, solve_internal

logger = logging.getLogger(__name__)

DEFAULT_CAP = 15


class PipelineOutcome(NamedTuple):
    bundle: Optional[ModelBundle]
    plan: Optional[Plan]
    report: Optional[ReachabilityReport]
    record: RunRecord


def _transcript(messages: Sequence[ChatMessage], reply: str) -> List[Dict[str, str]]:
    return [m.to_dict() for m in messages] + [ChatMessage(Role.ASSISTANT, reply).to_dict()]


def reply_to_bundle(reply: str) -> ModelBundle:
    """
    Parse the model document contained in an LLM reply

    Raises:
        IterationError: when no JSON is found or the document does not parse
    """
    document = extract_json(reply)
    if document is None:
        raise IterationError("the reply contains no JSON document", reply)
    result = parse_model(document)
    if not result.ok:
        raise IterationError(f"the JSON document has {len(result.errors)} markup errors", reply, result.errors)
    return result.bundle


def correction_iteration(client: LlmClient, current: Optional[ModelBundle], report: Optional[CheckReport],
                         previous_failure: Optional[IterationError] = None,
                         record: Optional[RunRecord] = None) -> ModelBundle:
    """
    Ask the LLM to correct a model and parse its reply

    Args:
        client: LLM client
        current: Latest parsed model; None when no reply has parsed yet
        report: Consistency errors of current
        previous_failure: Why the last reply was unusable, appended to the prompt
        record: Run record receiving the transcript

    Returns:
        The corrected model

    Raises:
        IterationError: when the reply holds no usable model
    """
    if current is not None:
        model_text = serialize_model(current)
    elif previous_failure is not None:
        model_text = extract_json(previous_failure.raw_reply) or previous_failure.raw_reply
    else:
        raise ValueError("correction needs a model or the previous unusable reply")

    if previous_failure is None and (report is None or report.is_clean):
        raise ValueError("correction needs a non-empty consistency report")

    messages = prompt_correction(
        model_text,
        report if current is not None else None,
        failure_reason=previous_failure.reason if previous_failure is not None else None,
        markup_errors=previous_failure.markup_errors if previous_failure is not None else (),
    )
    reply = client.complete(messages)
    if record is not None:
        record.add_transcript("3", _transcript(messages, reply))
    return reply_to_bundle(reply)


class PipelineRunner:
    """
    One generation run: textual plan, markup, correction loop, reachability

    The record attribute stays available when a transport or replay error
    aborts the run.
    """

    def __init__(self, client: LlmClient, cap: int = DEFAULT_CAP, limits: Optional[SearchLimits] = None):
        if cap < 1:
            raise ValueError("correction cap must be at least 1")
        self.client = client
        self.cap = cap
        self.limits = limits or SearchLimits()
        self.checker = ConsistencyChecker()
        self.compiler = PddlCompiler()
        self.record: Optional[RunRecord] = None

    def run(self, goal: str) -> PipelineOutcome:
        record = RunRecord(goal=goal, cap=self.cap, prompts_version=PROMPTS_VERSION)
        self.record = record
        try:
            return self._run(goal, record)
        except Exception as e:
            record.error = f"{type(e).__name__}: {e}"
            raise

    def _run(self, goal: str, record: RunRecord) -> PipelineOutcome:
        # step 1: textual plan
        started = time.perf_counter()
        messages = prompt_textual_plan(goal)
        logger.info("Step 1: requesting textual plan")
        textual_plan = self.client.complete(messages)
        record.add_transcript("1", _transcript(messages, textual_plan))
        record.step_durations["1"] = time.perf_counter() - started

        # step 2: markup
        started = time.perf_counter()
        messages = prompt_markup(textual_plan)
        logger.info("Step 2: requesting model markup")
        reply = self.client.complete(messages)
        record.add_transcript("2", _transcript(messages, reply))
        bundle: Optional[ModelBundle] = None
        failure: Optional[IterationError] = None
        try:
            bundle = reply_to_bundle(reply)
        except IterationError as e:
            failure = e
            record.initial_error_count = max(1, len(e.markup_errors))
            record.error_trajectory.append(record.initial_error_count)
            logger.warning(f"Step 2 reply unusable: {e.reason}")
        record.step_durations["2"] = time.perf_counter() - started

        # step 3: correction loop
        started = time.perf_counter()
        report: Optional[CheckReport] = None
        while True:
            if bundle is not None and failure is None:
                report = self.checker.check_model(bundle)
                if not record.error_trajectory:
                    record.initial_error_count = len(report.errors)
                record.error_trajectory.append(len(report.errors))
                record.final_error_count = len(report.errors)
                if report.is_clean:
                    record.completed = True
                    break
            if record.correction_iterations >= self.cap:
                break

            record.correction_iterations += 1
            iteration_started = time.perf_counter()
            try:
                bundle = correction_iteration(self.client, bundle, report, failure, record)
                failure = None
            except IterationError as e:
                failure = e
                record.error_trajectory.append(max(1, len(e.markup_errors)))
                logger.warning(f"Correction {record.correction_iterations}: reply unusable: {e.reason}")
            record.iteration_durations.append(time.perf_counter() - iteration_started)
            logger.info(f"Correction iteration {record.correction_iterations}/{self.cap} done")
        record.step_durations["3"] = time.perf_counter() - started

        if bundle is not None:
            record.action_count = len(bundle.domain.actions)
        if not record.completed:
            logger.info(f"Run not completed after {record.correction_iterations} corrections")
            return PipelineOutcome(bundle, None, None, record)

        # step 4: compile, reachability, plan
        started = time.perf_counter()
        plan, reach = self._analyze(bundle, record)
        record.step_durations["4"] = time.perf_counter() - started
        return PipelineOutcome(bundle, plan, reach, record)

    def _analyze(self, bundle: ModelBundle, record: RunRecord):
        try:
            record.domain_pddl = self.compiler.compile_domain(bundle.domain)
            record.problem_pddl = self.compiler.compile_problem(bundle)
        except CompileGuardError as e:
            record.error = f"CompileGuardError: {e}"
            logger.warning(f"Step 4 skipped: {e}")
            return None, None

        result = solve_internal(bundle, self.limits)
        plan = result.plan if result.solved else None
        reach = analyze(bundle, plan)
        record.goal_reachable = reach.goal_reachable
        record.plan_found = plan is not None
        record.action_coverage = reach.action_coverage
        record.plan = [str(step) for step in plan] if plan is not None else []
        record.feedback = format_feedback(reach)
        logger.info(
            f"Step 4: goal_reachable={reach.goal_reachable}, planner={result.status.value}, "
            f"coverage={reach.action_coverage}"
        )
        return plan, reach


def run_pipeline(client: LlmClient, goal: str, cap: int = DEFAULT_CAP,
                 limits: Optional[SearchLimits] = None) -> PipelineOutcome:
    """
    Run steps 1 to 4 once

    Raises:
        TransportError: the LLM endpoint stayed unreachable
        ReplayExhaustedError: a replay transcript ran out of replies
    """
    return PipelineRunner(client, cap, limits).run(goal)
