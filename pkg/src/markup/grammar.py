import re
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

from src.exceptions import MarkupParseError
from src.model import Literal, Parameter

IDENTIFIER = r"[A-Za-z_][A-Za-z0-9_]*"
IDENTIFIER_PATTERN = re.compile(rf"^{IDENTIFIER}$")

_CALL_PATTERN = re.compile(rf"^\s*({IDENTIFIER})\s*\((.*)\)\s*$", re.DOTALL)
_LITERAL_PATTERN = re.compile(rf"^\s*(not\s+)?({IDENTIFIER})\s*\((.*)\)\s*$", re.DOTALL)
_PARAMETER_PATTERN = re.compile(rf"^\s*({IDENTIFIER})\s*(?::\s*({IDENTIFIER})\s*)?$")
_ARGUMENT_PATTERN = re.compile(rf"^\s*({IDENTIFIER})\s*$")
DOCUMENT_NAME_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")

MARKUP_GRAMMAR = """\
The model is ONE JSON object with exactly these keys (all required):
{
  "domain": "<domain name>",
  "problem": "<problem name>",
  "types": {"<TYPE>": "<PARENT_TYPE>" or null, ...},
  "predicates": ["<signature>", ...],
  "actions": [
    {"signature": "<signature>", "preconditions": ["<literal>", ...], "effects": ["<literal>", ...]},
    ...
  ],
  "objects": {"<object name>": "<TYPE>", ...},
  "init": ["<literal>", ...],
  "goal": ["<literal>", ...]
}
A signature is written like a function signature: name(param: TYPE, other_param: TYPE)
A literal is a call of a predicate on parameter names (inside actions) or object names
(inside init and goal): name(arg, other_arg). Prefix a literal with "not " to negate it.
Identifiers use letters, digits and underscores and start with a letter or underscore.
"""


@dataclass(frozen=True)
class MarkupError:
    """Grammar or structure violation at a JSON-pointer-like location"""
    path: str
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {"path": self.path, "message": self.message}


def _fail(message: str, path: str = "") -> MarkupParseError:
    return MarkupParseError([MarkupError(path, message)])


def _split_arguments(body: str) -> List[str]:
    """Split a comma separated argument list; an empty body yields no items"""
    if not body.strip():
        return []
    return body.split(",")


def parse_signature(s: str) -> Tuple[str, List[Parameter]]:
    """
    Parse a function-style signature

    Args:
        s: Signature text such as "pick(ball: BALL, room: ROOM)"

    Returns:
        Name and the ordered parameter list; untyped parameters carry no type
    """
    match = _CALL_PATTERN.match(s)
    if not match:
        raise _fail(f"'{s}' is not a signature of the form name(param: TYPE, ...)")

    name, body = match.group(1), match.group(2)
    parameters = []
    for position, item in enumerate(_split_arguments(body)):
        parameter_match = _PARAMETER_PATTERN.match(item)
        if not parameter_match:
            raise _fail(f"parameter {position} '{item.strip()}' in '{s}' is not of the form name: TYPE")
        parameters.append(Parameter(parameter_match.group(1), parameter_match.group(2)))
    return name, parameters


def parse_literal(s: str) -> Literal:
    """
    Parse a call expression, optionally prefixed with "not"

    Args:
        s: Literal text such as "not free(grip_left)"

    Returns:
        Literal with negation flag set by the prefix
    """
    match = _LITERAL_PATTERN.match(s)
    if not match:
        raise _fail(f"'{s}' is not a literal of the form [not] name(arg, ...)")

    negated, predicate, body = bool(match.group(1)), match.group(2), match.group(3)
    args = []
    for position, item in enumerate(_split_arguments(body)):
        argument_match = _ARGUMENT_PATTERN.match(item)
        if not argument_match:
            raise _fail(f"argument {position} '{item.strip()}' in '{s}' is not an identifier")
        args.append(argument_match.group(1))
    return Literal(predicate, tuple(args), negated)


def format_signature(name: str, parameters: List[Parameter]) -> str:
    return f"{name}({', '.join(str(p) for p in parameters)})"


def format_literal(literal: Literal) -> str:
    return str(literal)


def is_identifier(text: str) -> bool:
    return bool(IDENTIFIER_PATTERN.match(text))


def is_document_name(text: str) -> bool:
    """Domain and problem names: identifiers that may also contain hyphens"""
    return bool(DOCUMENT_NAME_PATTERN.match(text))
