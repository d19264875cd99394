import json
from pathlib import Path
from typing import Any, Dict

import pytest

from src.markup import load_model
from src.model import ModelBundle

FIXTURES = Path(__file__).parent / "fixtures"
REPLAY = FIXTURES / "replay"

SOLVABLE_FIXTURES = {
    "gripper": 3,
    "logistics_mini": 3,
    "tyreworld_mini": 4,
    "pizza_mini": 3,
    "household_mini": 6,
}


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.model.json"


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


def fixture_document(name: str) -> Dict[str, Any]:
    return json.loads(fixture_text(name))


def load_fixture(name: str) -> ModelBundle:
    return load_model(fixture_text(name))


@pytest.fixture
def gripper() -> ModelBundle:
    return load_fixture("gripper")


@pytest.fixture
def gripper_document() -> Dict[str, Any]:
    return fixture_document("gripper")


@pytest.fixture
def gripper_no_free() -> ModelBundle:
    return load_fixture("gripper_no_free")
