import itertools
import json

import pytest

from src.compiler import compile_domain, compile_problem
from src.exceptions import InvocationError, PddlParseError
from src.markup import load_model
from src.model import Literal
from src.planner import (
    ExternalPlannerConfig,
    Plan,
    PlannerStatus,
    PlanSource,
    PlanStep,
    SearchLimits,
    format_plan,
    invoke_external,
    parse_plan_text,
    solve_internal,
    validate_plan,
)
from tests.conftest import SOLVABLE_FIXTURES, load_fixture
from tests.generators import random_bundle
from tests.oracles import first_failure, shortest_plan_length

EXTERNAL_PLAN = "(PICK ball1 room_a grip_left)\\n(move ROOM_A room_b)\\n(drop ball1 room_b grip_left)\\n"


def test_gripper_shortest_plan(gripper):
    result = solve_internal(gripper)
    assert result.status == PlannerStatus.SOLVED
    assert [str(step) for step in result.plan] == [
        "(pick ball1 room_a grip_left)",
        "(move room_a room_b)",
        "(drop ball1 room_b grip_left)",
    ]
    assert result.plan.source == PlanSource.INTERNAL
    assert result.to_dict()["plan"]["length"] == 3


@pytest.mark.parametrize("name,length", sorted(SOLVABLE_FIXTURES.items()))
def test_fixture_plans_are_shortest_and_valid(name, length):
    bundle = load_fixture(name)
    result = solve_internal(bundle)
    assert result.solved
    assert len(result.plan) == length
    assert validate_plan(bundle, result.plan).valid


def test_goal_in_init_gives_empty_plan(gripper_document):
    gripper_document["goal"] = ["at_ball(ball1, room_a)"]
    result = solve_internal(load_model(json.dumps(gripper_document)))
    assert result.solved
    assert len(result.plan) == 0
    assert result.expanded_states == 0


def test_unsolvable(gripper_no_free):
    result = solve_internal(gripper_no_free)
    assert result.status == PlannerStatus.UNSOLVABLE
    assert result.plan is None


def test_expansion_limit_exhausts(gripper):
    result = solve_internal(gripper, SearchLimits(max_expanded_states=1))
    assert result.status == PlannerStatus.RESOURCES_EXHAUSTED
    assert result.expanded_states == 1
    assert result.to_dict()["plan"] is None


@pytest.mark.parametrize("limits", [{"max_expanded_states": 0}, {"wall_clock_budget": 0}])
def test_limits_must_be_positive(limits):
    with pytest.raises(ValueError):
        SearchLimits(**limits)


def test_negated_preconditions_are_closed_world():
    bundle = load_fixture("pizza_mini")
    plan = solve_internal(bundle).plan
    assert [step.schema for step in plan] == ["add_sauce", "add_cheese", "bake"]


def test_validate_reports_first_unmet_precondition(gripper):
    swapped = Plan((
        PlanStep("move", ("room_a", "room_b")),
        PlanStep("pick", ("ball1", "room_a", "grip_left")),
    ))
    result = validate_plan(gripper, swapped)
    assert not result.valid
    assert result.step_index == 1
    assert result.unmet == Literal("at_robot", ("room_a",))


def test_validate_goal_failure_points_past_last_step(gripper):
    result = validate_plan(gripper, Plan((PlanStep("move", ("room_a", "room_b")),)))
    assert not result.valid
    assert result.step_index == 1
    assert result.unmet == Literal("at_ball", ("ball1", "room_b"))
    assert result.reason.startswith("goal")


@pytest.mark.parametrize("step,reason", [
    (PlanStep("fly", ("room_a",)), "unknown action 'fly'"),
    (PlanStep("move", ("room_a",)), "action 'move' expects 2 arguments, got 1"),
    (PlanStep("move", ("room_a", "attic")), "unknown object 'attic'"),
    (PlanStep("move", ("room_a", "ball1")), "object 'ball1' of type BALL cannot bind parameter 'to' of type ROOM"),
])
def test_validate_step_errors(gripper, step, reason):
    result = validate_plan(gripper, Plan((step,)))
    assert (result.valid, result.step_index, result.reason) == (False, 0, reason)


def _steps(plan: Plan):
    return [(step.schema, step.args) for step in plan]


@pytest.mark.parametrize("name", sorted(SOLVABLE_FIXTURES))
def test_validation_of_transposed_plans_matches_simulation(name):
    bundle = load_fixture(name)
    steps = list(solve_internal(bundle).plan.steps)
    rejected = 0
    for i, j in itertools.combinations(range(len(steps)), 2):
        if steps[i] == steps[j]:
            continue
        swapped = list(steps)
        swapped[i], swapped[j] = swapped[j], swapped[i]
        plan = Plan(tuple(swapped))
        expected = first_failure(bundle, _steps(plan))
        result = validate_plan(bundle, plan)
        assert result.valid == (expected is None), (i, j)
        if expected is not None:
            assert result.step_index == expected, (i, j)
            rejected += 1
    assert rejected > 0


@pytest.mark.parametrize("name", sorted(SOLVABLE_FIXTURES))
def test_fixture_plans_match_the_layered_optimum(name):
    bundle = load_fixture(name)
    plan = solve_internal(bundle).plan
    assert shortest_plan_length(bundle, len(plan)) == len(plan)
    assert first_failure(bundle, _steps(plan)) is None


@pytest.mark.parametrize("seed", range(40))
def test_random_bundle_plans_are_shortest(seed):
    bundle = random_bundle(seed)
    result = solve_internal(bundle, SearchLimits(max_expanded_states=20000))
    if result.status == PlannerStatus.SOLVED:
        assert shortest_plan_length(bundle, len(result.plan)) == len(result.plan)
        assert first_failure(bundle, _steps(result.plan)) is None
    elif result.status == PlannerStatus.UNSOLVABLE:
        assert shortest_plan_length(bundle, result.expanded_states + 1) is None


def test_internal_plans_are_case_sensitive(gripper):
    plan = Plan((PlanStep("PICK", ("ball1", "room_a", "grip_left")),))
    assert validate_plan(gripper, plan).reason == "unknown action 'PICK'"


def test_parse_plan_text_formats():
    text = "; produced by a planner\n\n0: (pick ball1 room_a grip_left) [1]\n(MOVE room_a room_b)\n; cost = 2\n"
    plan = parse_plan_text(text)
    assert plan.source == PlanSource.EXTERNAL
    assert plan.steps == (PlanStep("pick", ("ball1", "room_a", "grip_left")), PlanStep("MOVE", ("room_a", "room_b")))


def test_parse_plan_text_rejects_garbage():
    with pytest.raises(PddlParseError, match="line 2"):
        parse_plan_text("(a b)\npick ball1\n")


def test_format_plan(gripper):
    text = format_plan(solve_internal(gripper).plan)
    assert text.splitlines()[-1] == "; cost = 3 (unit cost)"
    assert parse_plan_text(text, PlanSource.INTERNAL) == solve_internal(gripper).plan


def test_external_config_requires_placeholders():
    with pytest.raises(ValueError, match="plan_out"):
        ExternalPlannerConfig(command="planner {domain} {problem}")


def test_external_config_from_file(tmp_path):
    path = tmp_path / "planner.json"
    path.write_text(json.dumps({"command": "x {domain} {problem} {plan_out}", "unsolvable_exit_codes": [12]}))
    config = ExternalPlannerConfig.from_file(str(path))
    assert config.unsolvable_exit_codes == [12]
    assert config.timeout == 300.0

    path.write_text("{}")
    with pytest.raises(InvocationError):
        ExternalPlannerConfig.from_file(str(path))


def _run(command: str, gripper, **extra):
    config = ExternalPlannerConfig(command=command, **extra)
    return invoke_external(config, compile_domain(gripper.domain), compile_problem(gripper))


def test_external_plan_is_read_and_validates_case_insensitively(gripper):
    result = _run(f"sh -c 'printf \"{EXTERNAL_PLAN}\" > \"$3\"' planner {{domain}} {{problem}} {{plan_out}}", gripper)
    assert result.solved
    assert result.plan.source == PlanSource.EXTERNAL
    assert len(result.plan) == 3
    assert validate_plan(gripper, result.plan).valid


def test_external_unsolvable_exit_code(gripper):
    result = _run("sh -c 'exit 3' planner {domain} {problem} {plan_out}", gripper, unsolvable_exit_codes=[3])
    assert result.status == PlannerStatus.UNSOLVABLE


def test_external_unexpected_exit_code(gripper):
    with pytest.raises(InvocationError) as info:
        _run("sh -c 'echo boom; exit 7' planner {domain} {problem} {plan_out}", gripper)
    assert info.value.returncode == 7
    assert "boom" in info.value.output


def test_external_missing_plan_file(gripper):
    with pytest.raises(InvocationError, match="no plan file"):
        _run("sh -c 'exit 0' planner {domain} {problem} {plan_out}", gripper)


def test_external_missing_executable(gripper):
    with pytest.raises(InvocationError, match="not found"):
        _run("no-such-planner-binary {domain} {problem} {plan_out}", gripper)
