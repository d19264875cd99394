import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from src.model import ActionSchema, Literal, ModelBundle, substitute

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroundAction:
    """Action schema with every parameter bound to an object"""
    schema: str
    binding: Tuple[Tuple[str, str], ...]
    preconditions: Tuple[Literal, ...]
    effects: Tuple[Literal, ...]

    @property
    def args(self) -> Tuple[str, ...]:
        """Bound objects in parameter order"""
        return tuple(obj for _, obj in self.binding)

    @property
    def binding_map(self) -> Dict[str, str]:
        return dict(self.binding)

    @property
    def add_effects(self) -> FrozenSet[Literal]:
        return frozenset(e for e in self.effects if not e.negated)

    @property
    def delete_effects(self) -> FrozenSet[Literal]:
        return frozenset(e.atom for e in self.effects if e.negated)

    @property
    def positive_preconditions(self) -> Tuple[Literal, ...]:
        return tuple(p for p in self.preconditions if not p.negated)

    def is_applicable(self, state: FrozenSet[Literal]) -> bool:
        """Positive preconditions hold and negated ones are absent (closed world)"""
        for precondition in self.preconditions:
            if precondition.negated:
                if precondition.atom in state:
                    return False
            elif precondition not in state:
                return False
        return True

    def apply(self, state: FrozenSet[Literal]) -> FrozenSet[Literal]:
        """Successor state; deletes are applied before adds"""
        return (state - self.delete_effects) | self.add_effects

    def __str__(self) -> str:
        return f"{self.schema}({', '.join(self.args)})"


def bind(schema: ActionSchema, args: Tuple[str, ...]) -> GroundAction:
    """Instantiate a schema with objects given in parameter order"""
    binding = tuple((parameter.name, obj) for parameter, obj in zip(schema.parameters, args))
    mapping = dict(binding)
    return GroundAction(
        schema=schema.name,
        binding=binding,
        preconditions=tuple(substitute(p, mapping) for p in schema.preconditions),
        effects=tuple(substitute(e, mapping) for e in schema.effects),
    )


def candidate_objects(b: ModelBundle, declared_type: Optional[str]) -> List[str]:
    """Sorted objects whose type is compatible with a parameter type"""
    hierarchy = b.domain.hierarchy
    candidates = []
    for name, object_type in b.problem.object_types().items():
        if declared_type is None:
            candidates.append(name)
        elif object_type in hierarchy and declared_type in hierarchy and hierarchy.is_subtype(object_type, declared_type):
            candidates.append(name)
    return sorted(candidates)


def ground_schema(b: ModelBundle, schema: ActionSchema) -> List[GroundAction]:
    """Every type-respecting binding of one schema, object tuples in lexicographic order"""
    domains = [candidate_objects(b, parameter.declared_type) for parameter in schema.parameters]
    return [bind(schema, args) for args in itertools.product(*domains)]


def ground(b: ModelBundle) -> List[GroundAction]:
    """
    Ground every action schema of a checked bundle

    Args:
        b: Model bundle with zero consistency errors

    Returns:
        Ground actions in schema order, then lexicographic object tuples
    """
    actions: List[GroundAction] = []
    for schema in b.domain.actions:
        actions.extend(ground_schema(b, schema))
    logger.debug(f"Grounded {len(b.domain.actions)} schemas into {len(actions)} actions")
    return actions
