import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Tuple

_PLACEHOLDER = re.compile(r"'(X|Y|Z|O|Y1|Y2)'")


class ErrorCode(str, Enum):
    """Consistency error types, in catalog order"""
    WRONG_TYPE_USE = "WrongTypeUse"
    UNDECLARED_PARAMETER_USE = "UndeclaredParameterUse"
    WRONG_PARAMETER = "WrongParameter"
    MISSING_PARAMETERS = "MissingParameters"
    PREDICATE_MISMATCH = "PredicateMismatch"
    WRONG_TYPE_FORM = "WrongTypeForm"
    MISSING_PREDICATE = "MissingPredicate"
    DUPLICATED_PREDICATE = "DuplicatedPredicate"
    UNUSABLE_INITIAL_STATE_PREDICATE = "UnusableInitialStatePredicate"
    MISSING_TYPE = "MissingType"
    OBJECT_WITH_MULTIPLE_TYPES = "ObjectWithMultipleTypes"
    WRONG_OBJECT_NAME = "WrongObjectName"
    UNREACHABLE_GOAL_PREDICATE = "UnreachableGoalPredicate"
    DUPLICATED_ACTION = "DuplicatedAction"
    DUPLICATED_PARAMETER = "DuplicatedParameter"


@dataclass(frozen=True)
class CatalogEntry:
    """
    One consistency error type: observed rate plus description and suggestion
    templates for the correction prompt

    Templates use the quoted placeholders 'X', 'Y', 'Z', 'O', 'Y1' and 'Y2'.
    Entries with several variants list them in the same order in both tuples.
    """
    code: ErrorCode
    title: str
    rate: float
    descriptions: Tuple[str, ...]
    suggestions: Tuple[str, ...]

    @property
    def description_template(self) -> str:
        return self._join(self.descriptions)

    @property
    def suggestion_template(self) -> str:
        return self._join(self.suggestions)

    @staticmethod
    def _join(variants: Tuple[str, ...]) -> str:
        if len(variants) == 1:
            return variants[0]
        return " ".join(f"({i}) {text}" for i, text in enumerate(variants, start=1))

    def render(self, variant: int = 1, **values: str) -> Tuple[str, str]:
        """
        Instantiate the description and suggestion of one variant

        Args:
            variant: 1-based variant number
            values: Placeholder substitutions, e.g. X="ball", Z="pick"

        Returns:
            Tuple of (description, suggestion)
        """
        def fill(template: str) -> str:
            return _PLACEHOLDER.sub(lambda m: f"'{values.get(m.group(1), m.group(1))}'", template)

        return fill(self.descriptions[variant - 1]), fill(self.suggestions[variant - 1])

    def as_tuple(self) -> Tuple[ErrorCode, float, str, str]:
        return self.code, self.rate, self.description_template, self.suggestion_template

    def to_dict(self) -> Dict[str, Any]:
        return {
            "code": self.code.value,
            "title": self.title,
            "rate": self.rate,
            "descriptions": list(self.descriptions),
            "suggestions": list(self.suggestions),
        }


ERROR_CATALOG: Tuple[CatalogEntry, ...] = (
    CatalogEntry(
        ErrorCode.WRONG_TYPE_USE, "Wrong type use", 0.3725,
        ("The type of the parameters used in the predicate 'X' do not match the definition.",),
        ("Make sure to use parameters of correct type or create a new predicate.",),
    ),
    CatalogEntry(
        ErrorCode.UNDECLARED_PARAMETER_USE, "Undeclared parameter use", 0.2627,
        ("The parameter 'X' is not included in the signature of action 'Y'.",),
        ("Use only parameter of the action or add a new parameter in the action.",),
    ),
    CatalogEntry(
        ErrorCode.WRONG_PARAMETER, "Wrong Parameter", 0.1462,
        (
            "In predicate 'Y' the parameter 'X' is a type while a parameter name is expected.",
            "In predicate 'Y' the type 'X' is undefined.",
            "In initial state or goal the parameter 'X' is not defined'.",
        ),
        (
            "Either use one of the parameter name defined in the action signature 'Z' or create a new "
            "parameter with type 'X' in the action 'Z' and use it in this predicate 'Y'.",
            "Define a new type 'X' or use an existing one.",
            "Define a new object 'X' or use an existing one.",
        ),
    ),
    CatalogEntry(
        ErrorCode.MISSING_PARAMETERS, "Missing Parameters", 0.0666,
        (
            "In predicate 'Y' the type 'X' is not defined as parameter name in the action signature 'Z'.",
            "The predicate 'Y' has no parameters.",
            "The action 'Z' has no parameters.",
        ),
        (
            "Create the parameter name for the type 'X' and use it in the action signature 'Y'.",
            "Review the need for predicate 'Y' and either remove it if it is not mandatory' or add the "
            "parameters from the variable available in the signature of action 'Z'.",
            "Review the need for this action and either remove the action if it is not mandatory', or add "
            "the parameters and their types from the variable available in the action's preconditions "
            "and effects.",
        ),
    ),
    CatalogEntry(
        ErrorCode.PREDICATE_MISMATCH, "Predicate Mismatch", 0.0556,
        ("The arguments of the predicate 'X' are not matching the types of the predicate definition.",),
        (
            "Either remove the mismatched predicate if it is not mandatory or correct the parameter of the "
            "predicate 'X' or modify the predicate name to take in account the different type used for "
            "this predicate definition since polymorphism is not allowed.",
        ),
    ),
    CatalogEntry(
        ErrorCode.WRONG_TYPE_FORM, "Wrong Type Form", 0.0315,
        ("The type 'X' is not written in upper case.",),
        ("Rewrite the type using only upper case letters or underscore.",),
    ),
    CatalogEntry(
        ErrorCode.MISSING_PREDICATE, "Missing Predicate", 0.0159,
        ("The predicate 'Y' has not been defined.",),
        ("Define the predicate 'Y'.",),
    ),
    CatalogEntry(
        ErrorCode.DUPLICATED_PREDICATE, "Duplicated Predicate", 0.0147,
        ("The predicate 'Y' has already been defined.",),
        ("Define a new predicate with a name that take in account the semantic of its argument types.",),
    ),
    CatalogEntry(
        ErrorCode.UNUSABLE_INITIAL_STATE_PREDICATE, "Unusable Initial State Predicate", 0.0147,
        ("The Initial State predicate 'Y' is not present in the preconditions of any action.",),
        (
            "Either remove the predicate from Initial State if is not necessary, or add the predicate in the "
            "preconditions of an action that would require this precondition, or create a new action that "
            "can have this predicate 'Y' as precondition.",
        ),
    ),
    CatalogEntry(
        ErrorCode.MISSING_TYPE, "Missing Type", 0.0082,
        (
            "The parameter 'X' do not have a type in the signature of action 'Z'.",
            "The type name 'Y' is not defined.",
        ),
        (
            "Add the type of the parameter 'X' in the action signature.",
            "Either create a new type 'Y' or use an existing one.",
        ),
    ),
    CatalogEntry(
        ErrorCode.OBJECT_WITH_MULTIPLE_TYPES, "Object With Multiple Types", 0.0061,
        ("The object 'O' is at least of type 'Y1' and 'Y2'.",),
        (
            "Reorganize the type hierarchy of objects to avoid multiple types for an object, or add semantic "
            "in the object name to differentiate their belonging types.",
        ),
    ),
    CatalogEntry(
        ErrorCode.WRONG_OBJECT_NAME, "Wrong Object Name", 0.0025,
        ("The object 'X' has the same name as type 'X'.",),
        (
            "Change the name of the object 'X' to avoid multiple types for an object for example by adding "
            "an index to its name.",
        ),
    ),
    CatalogEntry(
        ErrorCode.UNREACHABLE_GOAL_PREDICATE, "Unreachable Goal Predicate", 0.0016,
        ("The goal predicate 'Y' is not present in the effect of any action.",),
        (
            "Either remove the predicate from the goal states if is not necessary, or add the predicate in "
            "the effect of an action that could produce that effect 'Y', or create a new action that can "
            "have this predicate 'Y' as an effect.",
        ),
    ),
    CatalogEntry(
        ErrorCode.DUPLICATED_ACTION, "Duplicated Action", 0.0008,
        ("The action 'Z' has already been defined.",),
        ("Define a new name for the action 'Z' if it is different, or remove this action if it is redundant.",),
    ),
    CatalogEntry(
        ErrorCode.DUPLICATED_PARAMETER, "Duplicated Parameter", 0.0004,
        ("The parameter 'X' is duplicated in signature of action 'Z'.",),
        ("Change the parameter names to avoid duplicates in the action.",),
    ),
)

_ENTRIES: Dict[ErrorCode, CatalogEntry] = {entry.code: entry for entry in ERROR_CATALOG}
ROW_ORDER: Dict[ErrorCode, int] = {entry.code: index for index, entry in enumerate(ERROR_CATALOG)}


def error_catalog() -> List[CatalogEntry]:
    """All error types in catalog order with observed rates and templates"""
    return list(ERROR_CATALOG)


def catalog_entry(code: ErrorCode) -> CatalogEntry:
    return _ENTRIES[code]
