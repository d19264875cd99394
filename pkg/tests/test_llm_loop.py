import pytest

from config.prompts import PROMPTS_VERSION
from src.checker import check_model
from src.exceptions import IterationError, ReplayExhaustedError
from src.llm import (
    PipelineRunner,
    ReplayClient,
    Role,
    correction_iteration,
    extract_json,
    prompt_correction,
    prompt_markup,
    prompt_textual_plan,
    reply_to_bundle,
    run_pipeline,
)
from src.markup import serialize_model
from tests.conftest import REPLAY, fixture_text

GOAL = "Move ball1 from room_a to room_b with the robot gripper."


def _replay(name: str) -> ReplayClient:
    return ReplayClient.from_directory(str(REPLAY / name))


def test_happy_path():
    outcome = run_pipeline(_replay("happy_path"), GOAL)
    record = outcome.record
    assert record.initial_error_count == 1
    assert record.correction_iterations == 1
    assert record.error_trajectory == [1, 0]
    assert record.completed
    assert record.goal_reachable
    assert record.plan_found
    assert record.action_coverage == 1.0
    assert record.action_count == 3
    assert record.plan == ["(pick ball1 room_a grip_left)", "(move room_a room_b)", "(drop ball1 room_b grip_left)"]
    assert record.domain_pddl.startswith("(define (domain gripper)")
    assert record.prompts_version == PROMPTS_VERSION
    assert set(record.step_durations) == {"1", "2", "3", "4"}
    assert len(record.iteration_durations) == 1
    assert len(outcome.plan) == 3


def test_transcripts_are_recorded_per_step():
    record = run_pipeline(_replay("happy_path"), GOAL).record
    assert [len(record.transcripts[step]) for step in ("1", "2", "3")] == [1, 1, 1]
    correction = record.transcripts["3"][0]
    assert correction[-1]["role"] == Role.ASSISTANT.value
    assert "WrongTypeForm" in correction[1]["content"]


def test_never_fixing_stops_at_cap():
    record = run_pipeline(_replay("never_fixing"), GOAL).record
    assert not record.completed
    assert record.correction_iterations == 15
    assert record.error_trajectory == [1] * 16
    assert record.final_error_count == 1
    assert record.action_coverage is None
    assert record.domain_pddl == ""


def test_smaller_cap_leaves_replies_unused():
    client = _replay("never_fixing")
    record = run_pipeline(client, GOAL, cap=3).record
    assert record.correction_iterations == 3
    assert client.calls == 5


def test_immediate_pass():
    record = run_pipeline(_replay("immediate_pass"), GOAL).record
    assert record.initial_error_count == 0
    assert record.correction_iterations == 0
    assert record.completed
    assert "3" not in record.transcripts


def test_unusable_reply_is_corrected():
    record = run_pipeline(_replay("unusable_then_fixed"), GOAL).record
    assert record.initial_error_count == 1
    assert record.correction_iterations == 1
    assert record.error_trajectory == [1, 0]
    assert record.completed
    correction_prompt = record.transcripts["3"][0][1]["content"]
    assert "I cannot help with writing that model." in correction_prompt
    assert "contains no JSON document" in correction_prompt


def test_replay_runs_are_deterministic():
    client = _replay("happy_path")
    first = run_pipeline(client.fresh(), GOAL).record
    second = run_pipeline(client.fresh(), GOAL).record
    assert first.to_dict(include_durations=False) == second.to_dict(include_durations=False)


def test_exhausted_replay_keeps_partial_record():
    runner = PipelineRunner(ReplayClient.from_responses([fixture_text("gripper")]))
    with pytest.raises(ReplayExhaustedError):
        runner.run(GOAL)
    assert runner.record.error.startswith("ReplayExhaustedError")
    assert len(runner.record.transcripts["1"]) == 1


def test_cap_must_be_positive():
    with pytest.raises(ValueError):
        PipelineRunner(ReplayClient.from_responses([]), cap=0)


def test_replay_directory_must_exist(tmp_path):
    with pytest.raises(FileNotFoundError):
        ReplayClient.from_directory(str(tmp_path / "missing"))


def test_replay_files_sorted_numerically(tmp_path):
    for name, text in (("10.txt", "ten"), ("2.txt", "two"), ("notes.md", "skip")):
        (tmp_path / name).write_text(text, encoding="utf-8")
    client = ReplayClient.from_directory(str(tmp_path))
    assert client.responses == ["two", "ten"]


def test_reply_to_bundle_errors():
    with pytest.raises(IterationError, match="no JSON"):
        reply_to_bundle("no model here")
    with pytest.raises(IterationError) as info:
        reply_to_bundle('{"domain": "d"}')
    assert info.value.markup_errors


def test_correction_iteration_uses_serialized_model(gripper):
    document = fixture_text("gripper").replace('"GRIPPER": null', '"GRIPPER": null, "container": null')
    current = reply_to_bundle(document)
    report = check_model(current)
    client = ReplayClient.from_responses([fixture_text("gripper")])
    corrected = correction_iteration(client, current, report)
    assert corrected == gripper


def test_correction_iteration_needs_errors(gripper):
    with pytest.raises(ValueError):
        correction_iteration(ReplayClient.from_responses([]), gripper, check_model(gripper))


@pytest.mark.parametrize("reply,expected", [
    ('Here:\n```json\n{"a": 1}\n```\nDone.', '{"a": 1}'),
    ('```\n{"a": 1}\n```', '{"a": 1}'),
    ('```python\nprint(1)\n```\n```json\n{"b": 2}\n```', '{"b": 2}'),
    ('Model: {"a": {"b": 1}} end', '{"a": {"b": 1}}'),
    ("no braces at all", None),
    ("} backwards {", None),
])
def test_extract_json(reply, expected):
    assert extract_json(reply) == expected


def test_textual_plan_prompt_clauses():
    messages = prompt_textual_plan(GOAL)
    assert [m.role for m in messages] == [Role.SYSTEM, Role.USER]
    content = messages[1].content
    assert GOAL in content
    for clause in ("step by step", "initial state", "goal state", "sequence of actions",
                   "preconditions and its effects", "connectivity between locations"):
        assert clause in content


@pytest.mark.parametrize("goal", ["", "   "])
def test_textual_plan_prompt_rejects_empty_goal(goal):
    with pytest.raises(ValueError):
        prompt_textual_plan(goal)


def test_markup_prompt_clauses():
    content = prompt_markup("1. pick the ball")[1].content
    assert "only upper case letters or underscore" in content
    assert "Do not use PDDL syntax" in content
    assert '"predicates"' in content
    assert content.endswith("1. pick the ball")


def test_correction_prompt_embeds_model_and_errors(gripper):
    document = fixture_text("gripper").replace('"GRIPPER": null', '"GRIPPER": null, "container": null')
    current = reply_to_bundle(document)
    content = prompt_correction(serialize_model(current), check_model(current))[1].content
    assert '"container": null' in content
    assert '"code": "WrongTypeForm"' in content
    assert "Correct and regenerate" in content
