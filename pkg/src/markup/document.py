import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, StrictStr, ValidationError

from src.exceptions import HierarchyError, MarkupParseError, ModelInvariantError
from src.markup.grammar import MarkupError, is_document_name, is_identifier, parse_literal, parse_signature
from src.model import (
    ActionSchema,
    DomainModel,
    Literal,
    ModelBundle,
    ObjectDecl,
    PredicateDecl,
    ProblemModel,
    TypeHierarchy,
)

logger = logging.getLogger(__name__)

MODEL_FILE_SUFFIX = ".model.json"


class ActionEntry(BaseModel):
    """Structure of one entry of the "actions" list"""
    signature: StrictStr
    preconditions: List[StrictStr]
    effects: List[StrictStr]


class MarkupDocument(BaseModel):
    """Structure of a model document; signature and literal strings are parsed afterwards"""
    domain: StrictStr
    problem: StrictStr
    types: Dict[str, Optional[StrictStr]]
    predicates: List[StrictStr]
    actions: List[ActionEntry]
    objects: Dict[str, StrictStr]
    init: List[StrictStr]
    goal: List[StrictStr]


class _PairsDict(dict):
    """JSON object that remembers every key/value pair, duplicates included"""

    def __init__(self, pairs: List[Tuple[str, Any]]):
        super().__init__(pairs)
        self.pairs = pairs


@dataclass
class ParseResult:
    """Outcome of parsing a model document: a bundle or the list of markup errors"""
    bundle: Optional[ModelBundle] = None
    errors: List[MarkupError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bundle is not None

    def to_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "errors": [e.to_dict() for e in self.errors]}


def _pointer(*parts: Any) -> str:
    """JSON pointer for the given key path"""
    escaped = [str(part).replace("~", "~0").replace("/", "~1") for part in parts]
    return "".join(f"/{part}" for part in escaped)


def _structure_errors(exc: ValidationError) -> List[MarkupError]:
    errors = []
    for error in exc.errors():
        location = [part for part in error["loc"] if part != "[key]"]
        if error["type"] == "missing":
            errors.append(MarkupError(_pointer(*location[:-1]), f"missing required key '{location[-1]}'"))
        else:
            errors.append(MarkupError(_pointer(*location), error["msg"]))
    return errors


class MarkupParser:
    """
    Turns model documents into ModelBundle values

    Only grammar and structure violations are reported here; semantic defects are
    left in the bundle for the consistency checker.
    """

    def parse(self, text: str) -> ParseResult:
        """
        Parse a model document

        Args:
            text: JSON document text

        Returns:
            ParseResult holding either the bundle or at least one error
        """
        try:
            raw = json.loads(text, object_pairs_hook=_PairsDict)
        except json.JSONDecodeError as e:
            return ParseResult(errors=[MarkupError("", f"malformed JSON: {e}")])

        if not isinstance(raw, dict):
            return ParseResult(errors=[MarkupError("", "the model document must be a JSON object")])

        try:
            document = MarkupDocument.model_validate(raw)
        except ValidationError as e:
            return ParseResult(errors=_structure_errors(e))

        errors: List[MarkupError] = []
        for key in ("domain", "problem"):
            if not is_document_name(getattr(document, key)):
                errors.append(MarkupError(_pointer(key), f"'{getattr(document, key)}' is not a valid {key} name"))

        hierarchy = self._parse_types(document.types, errors)
        predicates = self._parse_predicates(document.predicates, errors)
        actions = self._parse_actions(document.actions, errors)
        objects = self._parse_objects(raw["objects"].pairs, errors)
        init = self._parse_literals(document.init, "init", errors, allow_negated=False)
        goal = self._parse_literals(document.goal, "goal", errors)

        if errors:
            logger.debug(f"Markup rejected with {len(errors)} errors")
            return ParseResult(errors=errors)

        bundle = ModelBundle(
            domain=DomainModel(document.domain, hierarchy, tuple(predicates), tuple(actions)),
            problem=ProblemModel(document.problem, tuple(objects), tuple(init), tuple(goal)),
        )
        return ParseResult(bundle=bundle)

    def _parse_types(self, types: Dict[str, Optional[str]], errors: List[MarkupError]) -> TypeHierarchy:
        valid = True
        for name, parent in types.items():
            if not is_identifier(name):
                errors.append(MarkupError(_pointer("types", name), f"type name '{name}' is not an identifier"))
                valid = False
            elif parent is not None and parent not in types:
                errors.append(MarkupError(
                    _pointer("types", name),
                    f"parent type '{parent}' of '{name}' is not a key of \"types\"",
                ))
                valid = False

        if not valid:
            return TypeHierarchy()
        try:
            return TypeHierarchy.from_mapping(types)
        except HierarchyError as e:
            errors.append(MarkupError(_pointer("types"), str(e)))
            return TypeHierarchy()

    def _parse_predicates(self, signatures: List[str], errors: List[MarkupError]) -> List[PredicateDecl]:
        predicates = []
        for index, text in enumerate(signatures):
            path = _pointer("predicates", index)
            try:
                name, parameters = parse_signature(text)
                predicates.append(PredicateDecl(name, tuple(parameters)))
            except MarkupParseError as e:
                errors.extend(MarkupError(path, error.message) for error in e.errors)
            except ModelInvariantError as e:
                errors.append(MarkupError(path, str(e)))
        return predicates

    def _parse_actions(self, entries: List[ActionEntry], errors: List[MarkupError]) -> List[ActionSchema]:
        actions = []
        for index, entry in enumerate(entries):
            before = len(errors)
            try:
                name, parameters = parse_signature(entry.signature)
            except MarkupParseError as e:
                errors.extend(MarkupError(_pointer("actions", index, "signature"), error.message) for error in e.errors)
                name, parameters = "", []

            preconditions = self._parse_literals(entry.preconditions, ("actions", index, "preconditions"), errors)
            effects = self._parse_literals(entry.effects, ("actions", index, "effects"), errors)
            if len(errors) > before:
                continue

            try:
                actions.append(ActionSchema(name, tuple(parameters), tuple(preconditions), tuple(effects)))
            except ModelInvariantError as e:
                errors.append(MarkupError(_pointer("actions", index, "effects"), str(e)))
        return actions

    def _parse_objects(self, pairs: List[Tuple[str, Any]], errors: List[MarkupError]) -> List[ObjectDecl]:
        objects: List[ObjectDecl] = []
        for name, declared_type in pairs:
            path = _pointer("objects", name)
            if not is_identifier(name):
                errors.append(MarkupError(path, f"object name '{name}' is not an identifier"))
                continue
            if not isinstance(declared_type, str) or not is_identifier(declared_type):
                errors.append(MarkupError(path, f"type of object '{name}' must be a type name"))
                continue

            declaration = ObjectDecl(name, declared_type)
            # conflicting types are kept for the checker
            if declaration in objects:
                errors.append(MarkupError(path, f"object '{name}' is declared more than once as '{declared_type}'"))
                continue
            objects.append(declaration)
        return objects

    def _parse_literals(self, texts: Sequence[str], section: Any, errors: List[MarkupError],
                        allow_negated: bool = True) -> List[Literal]:
        prefix = section if isinstance(section, tuple) else (section,)
        literals = []
        for index, text in enumerate(texts):
            path = _pointer(*prefix, index)
            try:
                literal = parse_literal(text)
            except MarkupParseError as e:
                errors.extend(MarkupError(path, error.message) for error in e.errors)
                continue
            if literal.negated and not allow_negated:
                errors.append(MarkupError(path, "initial state literals cannot be negated (closed world)"))
                continue
            literals.append(literal)
        return literals


def _block(value: Any) -> str:
    """JSON text of a value, indented to sit one level inside the document"""
    return json.dumps(value, indent=2, ensure_ascii=False).replace("\n", "\n  ")


def _pairs_block(pairs: Sequence[Tuple[str, Optional[str]]]) -> str:
    if not pairs:
        return "{}"
    items = [f"    {json.dumps(key, ensure_ascii=False)}: {json.dumps(value, ensure_ascii=False)}" for key, value in pairs]
    return "{\n" + ",\n".join(items) + "\n  }"


def serialize_model(m: ModelBundle) -> str:
    """
    Write a bundle as a model document

    The output is faithful: names are emitted exactly as stored, and repeated
    object declarations are written as repeated keys.

    Raises:
        ModelInvariantError: if the domain or problem name would not parse back
    """
    domain, problem = m.domain, m.problem
    for kind, name in (("domain", domain.name), ("problem", problem.name)):
        if not is_document_name(name):
            raise ModelInvariantError(f"'{name}' is not a valid {kind} name for a model document")
    actions = [
        {
            "signature": schema.signature,
            "preconditions": [str(literal) for literal in schema.preconditions],
            "effects": [str(literal) for literal in schema.effects],
        }
        for schema in domain.actions
    ]
    sections = [
        ("domain", json.dumps(domain.name, ensure_ascii=False)),
        ("problem", json.dumps(problem.name, ensure_ascii=False)),
        ("types", _pairs_block(domain.hierarchy.entries)),
        ("predicates", _block([str(p) for p in domain.predicates])),
        ("actions", _block(actions)),
        ("objects", _pairs_block([(o.name, o.declared_type) for o in problem.objects])),
        ("init", _block([str(literal) for literal in problem.init])),
        ("goal", _block([str(literal) for literal in problem.goal])),
    ]
    body = ",\n".join(f"  {json.dumps(key)}: {text}" for key, text in sections)
    return "{\n" + body + "\n}\n"


def parse_model(text: str) -> ParseResult:
    return MarkupParser().parse(text)


def load_model(text: str) -> ModelBundle:
    """Parse a model document, raising MarkupParseError on failure"""
    result = parse_model(text)
    if not result.ok:
        raise MarkupParseError(result.errors)
    return result.bundle
