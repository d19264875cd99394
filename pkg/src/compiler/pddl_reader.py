import re
from typing import List, Optional, Set, Tuple, Union

from src.exceptions import HierarchyError, ModelInvariantError, PddlParseError
from src.markup.grammar import is_document_name
from src.model import (
    ActionSchema,
    DomainModel,
    Literal,
    ObjectDecl,
    Parameter,
    PredicateDecl,
    ProblemModel,
    TypeHierarchy,
)

SExpression = Union[str, List["SExpression"]]

SUPPORTED_REQUIREMENTS = {":strips", ":typing", ":negative-preconditions"}
UNSUPPORTED_SECTIONS = {":durative-action", ":derived", ":functions", ":constants", ":constraints", ":metric"}
UNSUPPORTED_CONNECTIVES = {"forall", "exists", "or", "imply", "when", "=", "increase", "decrease", "assign"}
IMPLICIT_ROOT = "object"

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def tokenize(text: str) -> List[str]:
    """Split PDDL text into parentheses and atoms, dropping ; comments"""
    without_comments = re.sub(r";[^\n]*", " ", text)
    return _TOKEN.findall(without_comments)


def parse_sexpression(text: str) -> SExpression:
    """Parse exactly one s-expression"""
    tokens = tokenize(text)
    if not tokens:
        raise PddlParseError("empty PDDL input")

    stack: List[List[SExpression]] = [[]]
    for token in tokens:
        if token == "(":
            stack.append([])
        elif token == ")":
            if len(stack) == 1:
                raise PddlParseError("unbalanced ')'")
            closed = stack.pop()
            stack[-1].append(closed)
        else:
            stack[-1].append(token)
    if len(stack) != 1:
        raise PddlParseError("unbalanced '(': input ended inside an expression")
    if len(stack[0]) != 1:
        raise PddlParseError("expected a single top-level expression")
    return stack[0][0]


def _expect_list(expr: SExpression, what: str) -> List[SExpression]:
    if not isinstance(expr, list):
        raise PddlParseError(f"expected a list for {what}, got '{expr}'")
    return expr


def _expect_atom(expr: SExpression, what: str) -> str:
    if isinstance(expr, list):
        raise PddlParseError(f"expected a name for {what}")
    return expr


def _typed_list(items: List[SExpression], what: str) -> List[Tuple[str, Optional[str]]]:
    """Resolve 'a b - T c' into [(a, T), (b, T), (c, None)]"""
    typed: List[Tuple[str, Optional[str]]] = []
    pending: List[str] = []
    index = 0
    while index < len(items):
        item = items[index]
        if item == "-":
            if index + 1 >= len(items):
                raise PddlParseError(f"dangling '-' in {what}")
            parent = items[index + 1]
            if isinstance(parent, list):
                raise PddlParseError(f"unsupported construct '({' '.join(map(str, parent[:1]))} ...)' in {what}")
            typed.extend((name, parent) for name in pending)
            pending = []
            index += 2
            continue
        pending.append(_expect_atom(item, what))
        index += 1
    typed.extend((name, None) for name in pending)
    return typed


def _strip_variable(name: str, what: str) -> str:
    if not name.startswith("?"):
        raise PddlParseError(f"expected a variable in {what}, got '{name}'")
    return name[1:]


def _argument(token: SExpression) -> str:
    name = _expect_atom(token, "literal argument")
    return name[1:] if name.startswith("?") else name


def _literal(expr: SExpression, allow_negation: bool = True) -> Literal:
    items = _expect_list(expr, "literal")
    if not items:
        raise PddlParseError("empty literal")
    head = items[0]
    if head == "not":
        if not allow_negation or len(items) != 2:
            raise PddlParseError("negation is not allowed here")
        return _literal(items[1], allow_negation=False).negate()
    if not isinstance(head, str):
        raise PddlParseError("literal must start with a predicate name")
    if head.lower() in UNSUPPORTED_CONNECTIVES or head.lower() == "and":
        raise PddlParseError(f"unsupported construct '({head} ...)'")
    return Literal(head, tuple(_argument(arg) for arg in items[1:]))


def _conjunction(expr: SExpression) -> List[Literal]:
    """Flatten an (and ...) formula or a single literal into literals"""
    items = _expect_list(expr, "formula")
    if not items:
        return []
    head = items[0]
    if isinstance(head, str) and head.lower() == "and":
        literals = []
        for child in items[1:]:
            literals.extend(_conjunction(child))
        return literals
    if isinstance(head, str) and head.lower() in UNSUPPORTED_CONNECTIVES:
        raise PddlParseError(f"unsupported construct '({head} ...)'")
    return [_literal(items)]


def _definition(text: str, kind: str) -> Tuple[str, List[SExpression]]:
    expr = _expect_list(parse_sexpression(text), "define")
    if len(expr) < 2 or expr[0] != "define":
        raise PddlParseError("expected (define ...)")
    header = _expect_list(expr[1], kind)
    if len(header) != 2 or header[0] != kind:
        raise PddlParseError(f"expected ({kind} <name>)")
    name = _expect_atom(header[1], f"{kind} name")
    if not is_document_name(name):
        raise PddlParseError(f"'{name}' is not a valid {kind} name")
    return name, expr[2:]


def _section(expr: SExpression) -> Tuple[str, List[SExpression]]:
    items = _expect_list(expr, "section")
    if not items or not isinstance(items[0], str):
        raise PddlParseError("section must start with a keyword")
    keyword = items[0].lower()
    if keyword in UNSUPPORTED_SECTIONS:
        raise PddlParseError(f"unsupported construct '{items[0]}'")
    return keyword, items[1:]


def _action(items: List[SExpression]) -> ActionSchema:
    if not items:
        raise PddlParseError("action without a name")
    name = _expect_atom(items[0], "action name")
    parameters: List[Parameter] = []
    preconditions: List[Literal] = []
    effects: List[Literal] = []

    index = 1
    while index < len(items):
        key = items[index]
        if index + 1 >= len(items):
            raise PddlParseError(f"missing value for '{key}' in action '{name}'")
        value = items[index + 1]
        if key == ":parameters":
            typed = _typed_list(_expect_list(value, "parameters"), f"parameters of '{name}'")
            parameters = [Parameter(_strip_variable(var, f"action '{name}'"), type_) for var, type_ in typed]
        elif key == ":precondition":
            preconditions = _conjunction(value)
        elif key == ":effect":
            effects = _conjunction(value)
        else:
            raise PddlParseError(f"unsupported construct '{key}' in action '{name}'")
        index += 2

    try:
        return ActionSchema(name, tuple(parameters), tuple(preconditions), tuple(effects))
    except ModelInvariantError as e:
        raise PddlParseError(str(e)) from e


def _root_to_untyped(parameters: Tuple[Parameter, ...], declared: Set[str]) -> Tuple[Parameter, ...]:
    """Parameters typed with the undeclared root type read back as untyped"""
    return tuple(
        Parameter(p.name, None) if p.declared_type is not None and p.declared_type.lower() == IMPLICIT_ROOT
        and p.declared_type not in declared else p
        for p in parameters
    )


def parse_pddl_domain(text: str) -> DomainModel:
    """
    Read a STRIPS + typing PDDL domain

    Args:
        text: PDDL domain text

    Returns:
        DomainModel; inverse of compile_domain on its output
    """
    name, sections = _definition(text, "domain")
    entries: List[Tuple[str, Optional[str]]] = []
    predicates: List[PredicateDecl] = []
    actions: List[ActionSchema] = []

    for expr in sections:
        keyword, items = _section(expr)
        if keyword == ":requirements":
            for requirement in items:
                if requirement not in SUPPORTED_REQUIREMENTS:
                    raise PddlParseError(f"unsupported construct '{requirement}'")
        elif keyword == ":types":
            entries = _typed_list(items, "types")
        elif keyword == ":predicates":
            for declaration in items:
                parts = _expect_list(declaration, "predicate declaration")
                if not parts:
                    raise PddlParseError("empty predicate declaration")
                predicate = _expect_atom(parts[0], "predicate name")
                typed = _typed_list(parts[1:], f"predicate '{predicate}'")
                try:
                    predicates.append(PredicateDecl(
                        predicate,
                        tuple(Parameter(_strip_variable(var, f"predicate '{predicate}'"), t) for var, t in typed),
                    ))
                except ModelInvariantError as e:
                    raise PddlParseError(str(e)) from e
        elif keyword == ":action":
            actions.append(_action(items))
        else:
            raise PddlParseError(f"unsupported construct '{keyword}'")

    declared = {type_name for type_name, _ in entries}
    predicates = [PredicateDecl(p.name, _root_to_untyped(p.parameters, declared)) for p in predicates]
    actions = [
        ActionSchema(a.name, _root_to_untyped(a.parameters, declared), a.preconditions, a.effects) for a in actions
    ]
    normalized = [
        (type_name, None if parent is not None and parent.lower() == IMPLICIT_ROOT and parent not in declared else parent)
        for type_name, parent in entries
    ]
    try:
        hierarchy = TypeHierarchy(tuple(normalized))
    except HierarchyError as e:
        raise PddlParseError(str(e)) from e
    return DomainModel(name, hierarchy, tuple(predicates), tuple(actions))


def parse_pddl_problem(text: str) -> ProblemModel:
    """
    Read a PDDL problem

    Untyped objects get the implicit root type 'object'.
    """
    name, sections = _definition(text, "problem")
    objects: List[ObjectDecl] = []
    init: List[Literal] = []
    goal: List[Literal] = []

    for expr in sections:
        keyword, items = _section(expr)
        if keyword == ":domain":
            continue
        if keyword == ":requirements":
            continue
        if keyword == ":objects":
            objects = [ObjectDecl(obj, type_ or IMPLICIT_ROOT) for obj, type_ in _typed_list(items, "objects")]
        elif keyword == ":init":
            init = [_literal(item, allow_negation=False) for item in items]
        elif keyword == ":goal":
            if len(items) != 1:
                raise PddlParseError("goal must be a single formula")
            goal = _conjunction(items[0])
        else:
            raise PddlParseError(f"unsupported construct '{keyword}'")

    return ProblemModel(name, tuple(objects), tuple(init), tuple(goal))
