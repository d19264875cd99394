import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Set, Tuple

from src.checker.catalog import ROW_ORDER, ErrorCode, catalog_entry
from src.model import ActionSchema, Literal, ModelBundle, TypeHierarchy, is_canonical_type

logger = logging.getLogger(__name__)

# document order of the model sections
SECTION_TYPES = 0
SECTION_PREDICATES = 1
SECTION_ACTIONS = 2
SECTION_OBJECTS = 3
SECTION_INIT = 4
SECTION_GOAL = 5


@dataclass(frozen=True)
class ConsistencyError:
    """One diagnostic with the catalog description and suggestion filled in"""
    code: ErrorCode
    location: str
    description: str
    suggestion: str
    position: Tuple[int, ...] = field(default=(), compare=False, repr=False)

    def to_dict(self) -> Dict[str, str]:
        return {
            "code": self.code.value,
            "location": self.location,
            "description": self.description,
            "suggestion": self.suggestion,
        }


@dataclass
class CheckReport:
    """Ordered consistency errors of a model with per-code counts"""
    errors: List[ConsistencyError] = field(default_factory=list)
    counts: Dict[ErrorCode, int] = field(default_factory=dict)

    @classmethod
    def from_errors(cls, errors: List[ConsistencyError]) -> "CheckReport":
        ordered = sorted(errors, key=lambda e: (e.position, ROW_ORDER[e.code]))
        counts: Dict[ErrorCode, int] = {}
        for error in ordered:
            counts[error.code] = counts.get(error.code, 0) + 1
        return cls(errors=ordered, counts=counts)

    @property
    def is_clean(self) -> bool:
        return not self.errors

    @property
    def codes(self) -> List[ErrorCode]:
        return [error.code for error in self.errors]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error_count": len(self.errors),
            "counts": {code.value: count for code, count in self.counts.items()},
            "errors": [error.to_dict() for error in self.errors],
        }

    def errors_payload(self) -> str:
        """JSON array embedded in correction prompts"""
        return json.dumps([error.to_dict() for error in self.errors], indent=2, ensure_ascii=False)


class ConsistencyChecker:
    """
    Static consistency checks over a model bundle

    Every check runs independently; no finding suppresses another.
    """

    def check_model(self, m: ModelBundle) -> CheckReport:
        """
        Run every check

        Args:
            m: Model bundle to inspect

        Returns:
            CheckReport in document order, ties broken by catalog order
        """
        errors = self.check_declarations(m) + self.check_action_bodies(m) + self.check_problem_state(m)
        report = CheckReport.from_errors(errors)
        logger.debug(f"Consistency check found {len(report.errors)} errors")
        return report

    def check_declarations(self, m: ModelBundle) -> List[ConsistencyError]:
        """Findings on type, predicate, action signature and object declarations"""
        domain, problem = m.domain, m.problem
        hierarchy = domain.hierarchy
        errors = []

        for index, name in enumerate(hierarchy.names):
            if not is_canonical_type(name):
                errors.append(self._error(ErrorCode.WRONG_TYPE_FORM, 1, f"type:{name}",
                                          (SECTION_TYPES, index), X=name))

        seen_predicates: Set[str] = set()
        for index, predicate in enumerate(domain.predicates):
            location = f"predicate:{predicate.name}"
            if predicate.name in seen_predicates:
                errors.append(self._error(ErrorCode.DUPLICATED_PREDICATE, 1, location,
                                          (SECTION_PREDICATES, index), Y=predicate.name))
            seen_predicates.add(predicate.name)

            for position, parameter in enumerate(predicate.parameters):
                if parameter.is_typed and parameter.declared_type not in hierarchy:
                    errors.append(self._error(ErrorCode.MISSING_TYPE, 2, f"{location}/parameter:{position}",
                                              (SECTION_PREDICATES, index, position), Y=parameter.declared_type))

        seen_actions: Set[str] = set()
        for index, action in enumerate(domain.actions):
            errors.extend(self._check_signature(action, index, hierarchy, action.name in seen_actions))
            seen_actions.add(action.name)

        first_types: Dict[str, str] = {}
        for index, obj in enumerate(problem.objects):
            location = f"object:{obj.name}"
            position = (SECTION_OBJECTS, index)
            if obj.name in first_types and first_types[obj.name] != obj.declared_type:
                errors.append(self._error(ErrorCode.OBJECT_WITH_MULTIPLE_TYPES, 1, location, position,
                                          O=obj.name, Y1=first_types[obj.name], Y2=obj.declared_type))
            first_types.setdefault(obj.name, obj.declared_type)

            if obj.declared_type not in hierarchy:
                errors.append(self._error(ErrorCode.MISSING_TYPE, 2, location, position, Y=obj.declared_type))
            if obj.name in hierarchy:
                errors.append(self._error(ErrorCode.WRONG_OBJECT_NAME, 1, location, position, X=obj.name))

        return errors

    def _check_signature(self, action: ActionSchema, index: int, hierarchy: TypeHierarchy,
                         duplicated: bool) -> List[ConsistencyError]:
        errors = []
        location = f"action:{action.name}"
        if duplicated:
            errors.append(self._error(ErrorCode.DUPLICATED_ACTION, 1, location,
                                      (SECTION_ACTIONS, index, -1), Z=action.name))
        if not action.parameters:
            errors.append(self._error(ErrorCode.MISSING_PARAMETERS, 3, location,
                                      (SECTION_ACTIONS, index, -1), Z=action.name))

        seen: Set[str] = set()
        for position, parameter in enumerate(action.parameters):
            parameter_location = f"{location}/parameter:{position}"
            order = (SECTION_ACTIONS, index, 0, position)
            if parameter.name in seen:
                errors.append(self._error(ErrorCode.DUPLICATED_PARAMETER, 1, parameter_location, order,
                                          X=parameter.name, Z=action.name))
            seen.add(parameter.name)

            if not parameter.is_typed:
                errors.append(self._error(ErrorCode.MISSING_TYPE, 1, parameter_location, order,
                                          X=parameter.name, Z=action.name))
            elif parameter.declared_type not in hierarchy:
                errors.append(self._error(ErrorCode.MISSING_TYPE, 2, parameter_location, order,
                                          Y=parameter.declared_type))
        return errors

    def check_action_bodies(self, m: ModelBundle) -> List[ConsistencyError]:
        """Findings on the literals inside action preconditions and effects"""
        domain = m.domain
        hierarchy = domain.hierarchy
        errors = []

        for index, action in enumerate(domain.actions):
            parameter_types = action.parameter_types()
            sections = (("precondition", 1, action.preconditions), ("effect", 2, action.effects))
            for section, rank, literals in sections:
                for position, literal in enumerate(literals):
                    location = f"action:{action.name}/{section}:{position}"
                    order = (SECTION_ACTIONS, index, rank, position)
                    errors.extend(self._check_body_literal(literal, action, parameter_types,
                                                           hierarchy, m, location, order))
        return errors

    def _check_body_literal(self, literal: Literal, action: ActionSchema,
                            parameter_types: Dict[str, Optional[str]], hierarchy: TypeHierarchy,
                            m: ModelBundle, location: str, order: Tuple[int, ...]) -> List[ConsistencyError]:
        errors = []
        declaration = m.domain.predicate(literal.predicate)
        if declaration is None:
            errors.append(self._error(ErrorCode.MISSING_PREDICATE, 1, location, order, Y=literal.predicate))

        for arg in literal.args:
            if arg in parameter_types:
                continue
            if arg in hierarchy:
                errors.append(self._error(ErrorCode.WRONG_PARAMETER, 1, location, order,
                                          X=arg, Y=literal.predicate, Z=action.name))
            elif is_canonical_type(arg):
                errors.append(self._error(ErrorCode.WRONG_PARAMETER, 2, location, order,
                                          X=arg, Y=literal.predicate))
            else:
                errors.append(self._error(ErrorCode.UNDECLARED_PARAMETER_USE, 1, location, order,
                                          X=arg, Y=action.name))

        if declaration is None:
            return errors

        given, expected = len(literal.args), declaration.arity
        if given == 0 and expected > 0:
            errors.append(self._error(ErrorCode.MISSING_PARAMETERS, 2, location, order,
                                      Y=literal.predicate, Z=action.name))
        elif given < expected:
            missing = declaration.parameters[given]
            errors.append(self._error(ErrorCode.MISSING_PARAMETERS, 1, location, order,
                                      X=missing.declared_type or missing.name, Y=literal.predicate, Z=action.name))
        elif given > expected:
            errors.append(self._error(ErrorCode.PREDICATE_MISMATCH, 1, location, order, X=literal.predicate))

        argument_types = [parameter_types.get(arg) for arg in literal.args]
        if self._types_conflict(argument_types, declaration.parameters, hierarchy):
            errors.append(self._error(ErrorCode.WRONG_TYPE_USE, 1, location, order, X=literal.predicate))
        return errors

    @staticmethod
    def _types_conflict(argument_types: List[Optional[str]], slots: Tuple, hierarchy: TypeHierarchy) -> bool:
        """True when a known argument type cannot fill its declared slot"""
        for argument_type, slot in zip(argument_types, slots):
            slot_type = slot.declared_type
            if argument_type is None or slot_type is None:
                continue
            if argument_type not in hierarchy or slot_type not in hierarchy:
                continue
            if not hierarchy.is_subtype(argument_type, slot_type):
                return True
        return False

    def check_problem_state(self, m: ModelBundle) -> List[ConsistencyError]:
        """Findings on the initial state and goal literals"""
        domain, problem = m.domain, m.problem
        hierarchy = domain.hierarchy
        object_types = problem.object_types()
        required = {lit.predicate for action in domain.actions for lit in action.preconditions}
        produced = {lit.predicate for action in domain.actions for lit in action.effects}
        errors = []

        sections = (("init", SECTION_INIT, problem.init), ("goal", SECTION_GOAL, problem.goal))
        for section, rank, literals in sections:
            for position, literal in enumerate(literals):
                location = f"{section}:{position}"
                order = (rank, position)
                declaration = domain.predicate(literal.predicate)
                if declaration is None:
                    errors.append(self._error(ErrorCode.MISSING_PREDICATE, 1, location, order, Y=literal.predicate))

                for arg in literal.args:
                    if arg not in object_types:
                        errors.append(self._error(ErrorCode.WRONG_PARAMETER, 3, location, order, X=arg))

                if declaration is not None:
                    argument_types = [object_types.get(arg) for arg in literal.args]
                    if (len(literal.args) != declaration.arity
                            or self._types_conflict(argument_types, declaration.parameters, hierarchy)):
                        errors.append(self._error(ErrorCode.PREDICATE_MISMATCH, 1, location, order,
                                                  X=literal.predicate))

                if section == "init" and literal.predicate not in required:
                    errors.append(self._error(ErrorCode.UNUSABLE_INITIAL_STATE_PREDICATE, 1, location, order,
                                              Y=literal.predicate))
                if section == "goal" and literal.predicate not in produced:
                    errors.append(self._error(ErrorCode.UNREACHABLE_GOAL_PREDICATE, 1, location, order,
                                              Y=literal.predicate))
        return errors

    @staticmethod
    def _error(code: ErrorCode, variant: int, location: str, position: Tuple[int, ...],
               **values: str) -> ConsistencyError:
        description, suggestion = catalog_entry(code).render(variant, **values)
        return ConsistencyError(code, location, description, suggestion, position)


def check_model(m: ModelBundle) -> CheckReport:
    return ConsistencyChecker().check_model(m)


def check_declarations(m: ModelBundle) -> List[ConsistencyError]:
    return ConsistencyChecker().check_declarations(m)


def check_action_bodies(m: ModelBundle) -> List[ConsistencyError]:
    return ConsistencyChecker().check_action_bodies(m)


def check_problem_state(m: ModelBundle) -> List[ConsistencyError]:
    return ConsistencyChecker().check_problem_state(m)
