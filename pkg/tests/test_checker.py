import itertools
import json
from collections import Counter
from typing import Any, Callable, Dict

import pytest

from src.checker import (
    ErrorCode,
    check_action_bodies,
    check_declarations,
    check_model,
    check_problem_state,
    error_catalog,
)
from src.markup import load_model
from tests.conftest import FIXTURES, SOLVABLE_FIXTURES, fixture_document, fixture_text, load_fixture
from tests.generators import random_bundle

Document = Dict[str, Any]


def _action(document: Document, name: str) -> Document:
    return next(a for a in document["actions"] if a["signature"].startswith(f"{name}("))


def _wrong_type_use(document: Document) -> None:
    _action(document, "pick")["preconditions"][0] = "at_ball(room, room)"


def _undeclared_parameter_use(document: Document) -> None:
    _action(document, "move")["effects"][1] = "at_robot(target)"


def _wrong_parameter(document: Document) -> None:
    _action(document, "drop")["preconditions"][0] = "carrying(BALL, gripper)"


def _missing_parameters(document: Document) -> None:
    document["actions"].append({"signature": "wait()", "preconditions": [], "effects": []})


def _predicate_mismatch(document: Document) -> None:
    document["goal"] = ["at_ball(ball1, room_b, grip_left)"]


def _wrong_type_form(document: Document) -> None:
    document["types"]["container"] = None


def _missing_predicate(document: Document) -> None:
    _action(document, "move")["preconditions"].append("powered(from)")


def _duplicated_predicate(document: Document) -> None:
    document["predicates"].append("free(gripper: GRIPPER)")


def _unusable_initial_state_predicate(document: Document) -> None:
    document["predicates"].append("painted(room: ROOM)")
    document["init"].append("painted(room_a)")


def _missing_type(document: Document) -> None:
    _action(document, "move")["signature"] = "move(from, to: ROOM)"


def _wrong_object_name(document: Document) -> None:
    document["objects"]["ROOM"] = "ROOM"


def _unreachable_goal_predicate(document: Document) -> None:
    document["predicates"].append("painted(room: ROOM)")
    document["goal"].append("painted(room_b)")


def _duplicated_action(document: Document) -> None:
    document["actions"].append(dict(_action(document, "move")))


def _duplicated_parameter(document: Document) -> None:
    _action(document, "pick")["signature"] = "pick(ball: BALL, room: ROOM, room: ROOM, gripper: GRIPPER)"


MUTATIONS: Dict[ErrorCode, tuple] = {
    ErrorCode.WRONG_TYPE_USE: (_wrong_type_use, "action:pick/precondition:0"),
    ErrorCode.UNDECLARED_PARAMETER_USE: (_undeclared_parameter_use, "action:move/effect:1"),
    ErrorCode.WRONG_PARAMETER: (_wrong_parameter, "action:drop/precondition:0"),
    ErrorCode.MISSING_PARAMETERS: (_missing_parameters, "action:wait"),
    ErrorCode.PREDICATE_MISMATCH: (_predicate_mismatch, "goal:0"),
    ErrorCode.WRONG_TYPE_FORM: (_wrong_type_form, "type:container"),
    ErrorCode.MISSING_PREDICATE: (_missing_predicate, "action:move/precondition:1"),
    ErrorCode.DUPLICATED_PREDICATE: (_duplicated_predicate, "predicate:free"),
    ErrorCode.UNUSABLE_INITIAL_STATE_PREDICATE: (_unusable_initial_state_predicate, "init:3"),
    ErrorCode.MISSING_TYPE: (_missing_type, "action:move/parameter:0"),
    ErrorCode.WRONG_OBJECT_NAME: (_wrong_object_name, "object:ROOM"),
    ErrorCode.UNREACHABLE_GOAL_PREDICATE: (_unreachable_goal_predicate, "goal:1"),
    ErrorCode.DUPLICATED_ACTION: (_duplicated_action, "action:move"),
    ErrorCode.DUPLICATED_PARAMETER: (_duplicated_parameter, "action:pick/parameter:2"),
}


def _mutated(mutate: Callable[[Document], None]):
    document = fixture_document("gripper")
    mutate(document)
    return load_model(json.dumps(document))


def test_gripper_is_clean(gripper):
    report = check_model(gripper)
    assert report.is_clean
    assert report.to_dict() == {"error_count": 0, "counts": {}, "errors": []}


@pytest.mark.parametrize("name", sorted(SOLVABLE_FIXTURES))
def test_fixtures_are_clean(name):
    assert check_model(load_fixture(name)).is_clean


@pytest.mark.parametrize("code", list(MUTATIONS), ids=lambda code: code.value)
def test_single_fault_yields_single_error(code):
    mutate, location = MUTATIONS[code]
    report = check_model(_mutated(mutate))
    assert [(e.code, e.location) for e in report.errors] == [(code, location)]
    assert report.counts == {code: 1}


def test_object_with_multiple_types():
    text = fixture_text("gripper").replace('"ball1": "BALL",', '"ball1": "BALL",\n    "ball1": "ROOM",')
    report = check_model(load_model(text))
    assert [(e.code, e.location) for e in report.errors] == [(ErrorCode.OBJECT_WITH_MULTIPLE_TYPES, "object:ball1")]
    assert report.errors[0].description == "The object 'ball1' is at least of type 'BALL' and 'ROOM'."


def test_messages_are_rendered_from_templates():
    report = check_model(_mutated(_undeclared_parameter_use))
    error = report.errors[0]
    assert error.description == "The parameter 'target' is not included in the signature of action 'move'."
    assert error.suggestion == "Use only parameter of the action or add a new parameter in the action."


def test_wrong_parameter_suggestion_names_the_action():
    error = check_model(_mutated(_wrong_parameter)).errors[0]
    assert error.description == "In predicate 'carrying' the parameter 'BALL' is a type while a parameter name is expected."
    assert "action signature 'drop'" in error.suggestion


def test_errors_are_in_document_order():
    def several(document: Document) -> None:
        _wrong_object_name(document)
        _wrong_type_form(document)
        _undeclared_parameter_use(document)

    codes = check_model(_mutated(several)).codes
    assert codes == [ErrorCode.WRONG_TYPE_FORM, ErrorCode.UNDECLARED_PARAMETER_USE, ErrorCode.WRONG_OBJECT_NAME]


def test_findings_do_not_suppress_each_other():
    def both(document: Document) -> None:
        _action(document, "pick")["preconditions"][0] = "at_ball(ROOM, room, extra)"

    codes = set(check_model(_mutated(both)).codes)
    assert {ErrorCode.WRONG_PARAMETER, ErrorCode.UNDECLARED_PARAMETER_USE, ErrorCode.PREDICATE_MISMATCH} <= codes


def test_catalog_matches_reference_templates():
    reference = json.loads((FIXTURES / "table_templates.json").read_text(encoding="utf-8"))
    catalog = error_catalog()
    assert [entry.code.value for entry in catalog] == list(reference)
    for entry in catalog:
        expected = reference[entry.code.value]
        assert entry.rate == expected["rate"]
        assert list(entry.descriptions) == expected["descriptions"]
        assert list(entry.suggestions) == expected["suggestions"]


def test_catalog_rates_sum_to_one():
    assert sum(entry.rate for entry in error_catalog()) == pytest.approx(1.0, abs=0.0002)


def test_catalog_is_ordered_by_rate():
    rates = [entry.rate for entry in error_catalog()]
    assert rates == sorted(rates, reverse=True)


@pytest.mark.parametrize("seed", range(50))
def test_random_bundles_are_clean(seed):
    assert check_model(random_bundle(seed)).is_clean


def _findings(errors):
    return Counter((e.code, e.location, e.description) for e in errors)


def _assert_union_of_passes(bundle) -> None:
    passes = check_declarations(bundle) + check_action_bodies(bundle) + check_problem_state(bundle)
    assert _findings(check_model(bundle).errors) == _findings(passes)


@pytest.mark.parametrize("seed", range(30))
def test_random_bundle_report_is_the_union_of_the_passes(seed):
    _assert_union_of_passes(random_bundle(seed))


@pytest.mark.parametrize("code", list(MUTATIONS), ids=lambda code: code.value)
def test_faulty_report_is_the_union_of_the_passes(code):
    _assert_union_of_passes(_mutated(MUTATIONS[code][0]))


# goal replacement only ever comes first; applied second it erases the other fault
FAULT_PAIRS = [
    (first, second) for first, second in itertools.permutations(MUTATIONS, 2)
    if second != ErrorCode.PREDICATE_MISMATCH
]


@pytest.mark.parametrize("first,second", FAULT_PAIRS, ids=lambda code: code.value)
def test_added_fault_never_removes_existing_errors(first, second):
    def both(document: Document) -> None:
        MUTATIONS[first][0](document)
        MUTATIONS[second][0](document)

    before = {(e.code, e.location) for e in check_model(_mutated(MUTATIONS[first][0])).errors}
    after = {(e.code, e.location) for e in check_model(_mutated(both)).errors}
    assert before <= after
    assert second in {code for code, _ in after}
