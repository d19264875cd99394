import itertools
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from src.model import ActionSchema, Literal, ModelBundle

Atom = Tuple[str, Tuple[str, ...]]
State = FrozenSet[Atom]


def _atom(literal: Literal, binding: Optional[Dict[str, str]] = None) -> Atom:
    args = literal.args if binding is None else tuple(binding[arg] for arg in literal.args)
    return literal.predicate, args


def _holds(literals: Sequence[Literal], state: State, binding: Optional[Dict[str, str]] = None) -> bool:
    return all((_atom(literal, binding) in state) != literal.negated for literal in literals)


def _successor(schema: ActionSchema, binding: Dict[str, str], state: State) -> State:
    deletes = {_atom(effect, binding) for effect in schema.effects if effect.negated}
    adds = {_atom(effect, binding) for effect in schema.effects if not effect.negated}
    return frozenset((state - deletes) | adds)


def initial_state(bundle: ModelBundle) -> State:
    return frozenset(_atom(literal) for literal in bundle.problem.init)


def goal_holds(bundle: ModelBundle, state: State) -> bool:
    return _holds(bundle.problem.goal, state)


def first_failure(bundle: ModelBundle, steps: Sequence[Tuple[str, Tuple[str, ...]]]) -> Optional[int]:
    """
    Simulate (schema, args) steps on plain atom tuples

    Returns:
        Index of the first inapplicable step, len(steps) when only the goal fails,
        None for a valid plan
    """
    schemas: Dict[str, ActionSchema] = {}
    for schema in bundle.domain.actions:
        schemas.setdefault(schema.name, schema)

    state = initial_state(bundle)
    for index, (name, args) in enumerate(steps):
        schema = schemas[name]
        binding = dict(zip((p.name for p in schema.parameters), args))
        if not _holds(schema.preconditions, state, binding):
            return index
        state = _successor(schema, binding, state)
    return None if goal_holds(bundle, state) else len(steps)


def _bindings(bundle: ModelBundle, schema: ActionSchema) -> Iterator[Dict[str, str]]:
    hierarchy = bundle.domain.hierarchy
    object_types = bundle.problem.object_types()
    domains: List[List[str]] = []
    for parameter in schema.parameters:
        domains.append([
            obj for obj, object_type in object_types.items()
            if parameter.declared_type is None or hierarchy.is_subtype(object_type, parameter.declared_type)
        ])
    for args in itertools.product(*domains):
        yield dict(zip((p.name for p in schema.parameters), args))


def shortest_plan_length(bundle: ModelBundle, bound: int) -> Optional[int]:
    """Fewest steps of any plan reaching the goal, enumerating plans of at most bound steps"""
    moves = [(schema, binding) for schema in bundle.domain.actions for binding in _bindings(bundle, schema)]
    layer = {initial_state(bundle)}
    seen = set(layer)
    for depth in range(bound + 1):
        if not layer:
            return None
        if any(goal_holds(bundle, state) for state in layer):
            return depth
        following = set()
        for state in layer:
            for schema, binding in moves:
                if _holds(schema.preconditions, state, binding):
                    successor = _successor(schema, binding, state)
                    if successor not in seen:
                        seen.add(successor)
                        following.add(successor)
        layer = following
    return None
