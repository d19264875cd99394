import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from src.exceptions import PddlParseError
from src.model import ActionSchema, Literal, ModelBundle, substitute

logger = logging.getLogger(__name__)

_PLAN_LINE = re.compile(r"^(?:\d+(?:\.\d+)?\s*:\s*)?\(\s*([^()]+?)\s*\)(?:\s*\[[^\]]*\])?$")


class PlanSource(str, Enum):
    INTERNAL = "internal"
    EXTERNAL = "external"


@dataclass(frozen=True)
class PlanStep:
    """Ground action reference: schema name plus objects in parameter order"""
    schema: str
    args: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self) -> str:
        return "(" + " ".join((self.schema,) + self.args) + ")"


@dataclass(frozen=True)
class Plan:
    steps: Tuple[PlanStep, ...] = ()
    source: PlanSource = PlanSource.INTERNAL

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": self.source.value,
            "length": len(self.steps),
            "steps": [str(step) for step in self.steps],
        }


@dataclass
class ValidationResult:
    """
    Outcome of simulating a plan

    step_index equals the number of steps when every step applies but the goal fails.
    """
    valid: bool
    step_index: Optional[int] = None
    reason: str = ""
    unmet: Optional[Literal] = None
    schemas: Tuple[str, ...] = field(default=())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "valid": self.valid,
            "step_index": self.step_index,
            "reason": self.reason,
            "unmet": str(self.unmet) if self.unmet is not None else None,
        }


def _resolve(name: str, candidates: List[str], case_insensitive: bool) -> Optional[str]:
    if name in candidates:
        return name
    if case_insensitive:
        folded = name.lower()
        for candidate in candidates:
            if candidate.lower() == folded:
                return candidate
    return None


def _first_unmet(literals: Tuple[Literal, ...], state: FrozenSet[Literal]) -> Optional[Literal]:
    for literal in literals:
        holds = literal.atom not in state if literal.negated else literal in state
        if not holds:
            return literal
    return None


class PlanValidator:
    """Simulates plans step by step from the closed-world initial state"""

    def __init__(self, b: ModelBundle):
        self.bundle = b
        self.schemas: Dict[str, ActionSchema] = {}
        for schema in b.domain.actions:
            self.schemas.setdefault(schema.name, schema)
        self.object_types = b.problem.object_types()

    def validate(self, p: Plan) -> ValidationResult:
        """
        Check that every step applies in turn and the final state satisfies the goal

        Args:
            p: Plan to simulate; external plans resolve names case-insensitively

        Returns:
            ValidationResult naming the first failing step and unmet literal
        """
        case_insensitive = p.source == PlanSource.EXTERNAL
        hierarchy = self.bundle.domain.hierarchy
        state = frozenset(self.bundle.problem.init)
        used: List[str] = []

        for index, step in enumerate(p.steps):
            schema_name = _resolve(step.schema, list(self.schemas), case_insensitive)
            if schema_name is None:
                return ValidationResult(False, index, f"unknown action '{step.schema}'")
            schema = self.schemas[schema_name]
            if len(step.args) != len(schema.parameters):
                return ValidationResult(
                    False, index,
                    f"action '{schema_name}' expects {len(schema.parameters)} arguments, got {len(step.args)}",
                )

            args = []
            for arg, parameter in zip(step.args, schema.parameters):
                obj = _resolve(arg, list(self.object_types), case_insensitive)
                if obj is None:
                    return ValidationResult(False, index, f"unknown object '{arg}'")
                object_type = self.object_types[obj]
                if parameter.declared_type is not None and not (
                    object_type in hierarchy and parameter.declared_type in hierarchy
                    and hierarchy.is_subtype(object_type, parameter.declared_type)
                ):
                    return ValidationResult(
                        False, index,
                        f"object '{obj}' of type {object_type} cannot bind parameter "
                        f"'{parameter.name}' of type {parameter.declared_type}",
                    )
                args.append(obj)

            binding = {parameter.name: obj for parameter, obj in zip(schema.parameters, args)}
            unmet = _first_unmet(tuple(substitute(pre, binding) for pre in schema.preconditions), state)
            if unmet is not None:
                return ValidationResult(False, index, f"precondition {unmet} does not hold", unmet)

            effects = [substitute(effect, binding) for effect in schema.effects]
            deletes = {effect.atom for effect in effects if effect.negated}
            adds = {effect for effect in effects if not effect.negated}
            state = (state - deletes) | adds
            used.append(schema_name)

        unmet = _first_unmet(self.bundle.problem.goal, state)
        if unmet is not None:
            return ValidationResult(False, len(p.steps), f"goal {unmet} does not hold", unmet, tuple(used))
        return ValidationResult(True, schemas=tuple(used))


def validate_plan(b: ModelBundle, p: Plan) -> ValidationResult:
    return PlanValidator(b).validate(p)


def format_plan(p: Plan) -> str:
    """IPC sequential plan text with a trailing unit-cost comment"""
    lines = [str(step) for step in p.steps]
    lines.append(f"; cost = {len(p.steps)} (unit cost)")
    return "\n".join(lines) + "\n"


def parse_plan_text(text: str, source: PlanSource = PlanSource.EXTERNAL) -> Plan:
    """
    Read an IPC sequential plan

    Blank lines and lines starting with ';' are skipped. Optional 'N:' step
    prefixes and trailing '[duration]' annotations are accepted.
    """
    steps = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        match = _PLAN_LINE.match(line)
        if not match:
            raise PddlParseError(f"line {number} is not a plan step: '{line}'")
        tokens = match.group(1).split()
        steps.append(PlanStep(tokens[0], tuple(tokens[1:])))
    return Plan(tuple(steps), source)
