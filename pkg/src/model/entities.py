import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from src.exceptions import HierarchyError, ModelInvariantError, ModelLookupError, SubstitutionError

CANONICAL_TYPE_PATTERN = re.compile(r"^[A-Z][A-Z0-9_]*$")


def is_canonical_type(name: str) -> bool:
    """Upper-case letters, digits and underscores, starting with a letter"""
    return bool(CANONICAL_TYPE_PATTERN.match(name))


@dataclass(frozen=True)
class Parameter:
    """Typed parameter of a predicate or action signature"""
    name: str
    declared_type: Optional[str] = None  # None marks a parameter written without a type

    @property
    def is_typed(self) -> bool:
        return self.declared_type is not None

    def __str__(self) -> str:
        if self.declared_type is None:
            return self.name
        return f"{self.name}: {self.declared_type}"


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    parameters: Tuple[Parameter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parameters", tuple(self.parameters))
        names = [p.name for p in self.parameters]
        if len(set(names)) != len(names):
            raise ModelInvariantError(
                f"predicate '{self.name}' declares a parameter name more than once"
            )

    @property
    def arity(self) -> int:
        return len(self.parameters)

    def __str__(self) -> str:
        return f"{self.name}({', '.join(str(p) for p in self.parameters)})"


@dataclass(frozen=True)
class Literal:
    """Predicate applied to parameter names (lifted) or object names (ground)"""
    predicate: str
    args: Tuple[str, ...] = ()
    negated: bool = False

    def __post_init__(self):
        if not self.predicate:
            raise ModelInvariantError("literal predicate name is empty")
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def atom(self) -> "Literal":
        """The same literal without negation"""
        if not self.negated:
            return self
        return Literal(self.predicate, self.args, False)

    def negate(self) -> "Literal":
        return Literal(self.predicate, self.args, not self.negated)

    def __str__(self) -> str:
        text = f"{self.predicate}({', '.join(self.args)})"
        return f"not {text}" if self.negated else text


@dataclass(frozen=True)
class ActionSchema:
    name: str
    parameters: Tuple[Parameter, ...] = ()
    preconditions: Tuple[Literal, ...] = ()
    effects: Tuple[Literal, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parameters", tuple(self.parameters))
        object.__setattr__(self, "preconditions", tuple(self.preconditions))
        object.__setattr__(self, "effects", tuple(self.effects))

        positive = {e for e in self.effects if not e.negated}
        for effect in self.effects:
            if effect.negated and effect.atom in positive:
                raise ModelInvariantError(
                    f"action '{self.name}' both adds and deletes {effect.atom}"
                )

    def parameter_types(self) -> Dict[str, Optional[str]]:
        """Parameter name to declared type, first occurrence wins"""
        types: Dict[str, Optional[str]] = {}
        for parameter in self.parameters:
            types.setdefault(parameter.name, parameter.declared_type)
        return types

    @property
    def signature(self) -> str:
        return f"{self.name}({', '.join(str(p) for p in self.parameters)})"


@dataclass(frozen=True, eq=False)
class TypeHierarchy:
    """
    Mapping of type names to optional parent type names

    Entries keep declaration order; equality ignores it.
    """
    entries: Tuple[Tuple[str, Optional[str]], ...] = ()
    _parents: Dict[str, Optional[str]] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((name, parent) for name, parent in self.entries))
        parents = dict(self.entries)
        object.__setattr__(self, "_parents", parents)

        for name, parent in parents.items():
            if parent is not None and parent not in parents:
                raise HierarchyError(f"parent type '{parent}' of '{name}' is not declared")

        for name in parents:
            seen = {name}
            current = parents[name]
            while current is not None:
                if current in seen:
                    raise HierarchyError(f"type hierarchy contains a cycle through '{current}'")
                seen.add(current)
                current = parents[current]

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Optional[str]]) -> "TypeHierarchy":
        return cls(tuple(mapping.items()))

    @classmethod
    def flat(cls, names: Iterable[str]) -> "TypeHierarchy":
        return cls(tuple((name, None) for name in names))

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.entries]

    def as_dict(self) -> Dict[str, Optional[str]]:
        return dict(self._parents)

    def parent(self, name: str) -> Optional[str]:
        if name not in self._parents:
            raise ModelLookupError("type", name)
        return self._parents[name]

    def ancestors(self, name: str) -> List[str]:
        """Parent chain of a type, nearest first"""
        chain = []
        current = self.parent(name)
        while current is not None:
            chain.append(current)
            current = self._parents[current]
        return chain

    def is_subtype(self, a: str, b: str) -> bool:
        if a not in self._parents:
            raise ModelLookupError("type", a)
        if b not in self._parents:
            raise ModelLookupError("type", b)
        return a == b or b in self.ancestors(a)

    def __contains__(self, name: object) -> bool:
        return name in self._parents

    def __len__(self) -> int:
        return len(self._parents)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TypeHierarchy):
            return NotImplemented
        return self._parents == other._parents

    def __hash__(self) -> int:
        return hash(frozenset(self._parents.items()))


@dataclass(frozen=True)
class DomainModel:
    name: str
    hierarchy: TypeHierarchy = field(default_factory=TypeHierarchy)
    predicates: Tuple[PredicateDecl, ...] = ()
    actions: Tuple[ActionSchema, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "predicates", tuple(self.predicates))
        object.__setattr__(self, "actions", tuple(self.actions))

    def predicate(self, name: str) -> Optional[PredicateDecl]:
        """First declaration with this name"""
        for declaration in self.predicates:
            if declaration.name == name:
                return declaration
        return None

    def action(self, name: str) -> Optional[ActionSchema]:
        for schema in self.actions:
            if schema.name == name:
                return schema
        return None

    @property
    def action_names(self) -> List[str]:
        names: List[str] = []
        for schema in self.actions:
            if schema.name not in names:
                names.append(schema.name)
        return names


@dataclass(frozen=True)
class ObjectDecl:
    name: str
    declared_type: str


@dataclass(frozen=True)
class ProblemModel:
    name: str
    objects: Tuple[ObjectDecl, ...] = ()
    init: Tuple[Literal, ...] = ()
    goal: Tuple[Literal, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "init", tuple(self.init))
        object.__setattr__(self, "goal", tuple(self.goal))
        for literal in self.init:
            if literal.negated:
                raise ModelInvariantError(f"initial state literal {literal} is negated")

    def object_types(self) -> Dict[str, str]:
        """Object name to declared type, first declaration wins"""
        types: Dict[str, str] = {}
        for obj in self.objects:
            types.setdefault(obj.name, obj.declared_type)
        return types

    @property
    def object_names(self) -> List[str]:
        return list(self.object_types())


@dataclass(frozen=True)
class ModelBundle:
    """Domain and problem handled as a single model"""
    domain: DomainModel
    problem: ProblemModel

    @property
    def init_atoms(self) -> FrozenSet[Literal]:
        return frozenset(self.problem.init)


def is_subtype(h: TypeHierarchy, a: str, b: str) -> bool:
    """
    Check whether type a equals b or inherits from it

    Args:
        h: Type hierarchy
        a: Candidate subtype
        b: Candidate supertype

    Returns:
        True iff a == b or b is reachable from a via parent links
    """
    return h.is_subtype(a, b)


def substitute(lit: Literal, binding: Mapping[str, str]) -> Literal:
    """Replace every argument of a literal through the binding"""
    args = []
    for arg in lit.args:
        if arg not in binding:
            raise SubstitutionError(arg)
        args.append(binding[arg])
    return Literal(lit.predicate, tuple(args), lit.negated)


def arity_of(d: DomainModel, predicate: str) -> int:
    declaration = d.predicate(predicate)
    if declaration is None:
        raise ModelLookupError("predicate", predicate)
    return declaration.arity
