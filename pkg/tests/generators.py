import random
from typing import List, Optional

from src.model import (
    ActionSchema,
    DomainModel,
    Literal,
    ModelBundle,
    ObjectDecl,
    Parameter,
    PredicateDecl,
    ProblemModel,
    TypeHierarchy,
)


def random_bundle(seed: int) -> ModelBundle:
    """Small random model with zero consistency errors"""
    rng = random.Random(seed)

    type_names = [f"T{i}" for i in range(rng.randint(1, 4))]
    entries = []
    for index, name in enumerate(type_names):
        parent = rng.choice(type_names[:index]) if index and rng.random() < 0.5 else None
        entries.append((name, parent))
    hierarchy = TypeHierarchy(tuple(entries))

    predicates = []
    for index in range(rng.randint(1, 4)):
        parameters = tuple(
            Parameter(f"a{j}", None if rng.random() < 0.15 else rng.choice(type_names))
            for j in range(rng.randint(0, 3))
        )
        predicates.append(PredicateDecl(f"p{index}", parameters))

    def fits(declared_type: str, slot_type: Optional[str]) -> bool:
        return slot_type is None or hierarchy.is_subtype(declared_type, slot_type)

    def fill(predicate: PredicateDecl, parameters: List[Parameter]) -> Literal:
        args = []
        for slot in predicate.parameters:
            options = [p.name for p in parameters if fits(p.declared_type, slot.declared_type)]
            if options and rng.random() < 0.8:
                args.append(rng.choice(options))
            else:
                parameter = Parameter(f"v{len(parameters)}", slot.declared_type or rng.choice(type_names))
                parameters.append(parameter)
                args.append(parameter.name)
        return Literal(predicate.name, tuple(args))

    actions = []
    for index in range(rng.randint(1, 3)):
        parameters = [Parameter("v0", rng.choice(type_names))]
        preconditions = []
        for _ in range(rng.randint(0, 2)):
            literal = fill(rng.choice(predicates), parameters)
            preconditions.append(literal.negate() if rng.random() < 0.2 else literal)
        effects = []
        atoms = set()
        for _ in range(rng.randint(1, 3)):
            literal = fill(rng.choice(predicates), parameters)
            if literal in atoms:
                continue
            atoms.add(literal)
            effects.append(literal.negate() if rng.random() < 0.3 else literal)
        actions.append(ActionSchema(f"act{index}", tuple(parameters), tuple(preconditions), tuple(effects)))

    objects = []
    for name in type_names:
        for k in range(rng.randint(1, 2)):
            objects.append(ObjectDecl(f"o_{name.lower()}_{k}", name))

    def ground(predicate: PredicateDecl) -> Literal:
        args = []
        for slot in predicate.parameters:
            candidates = [o.name for o in objects if fits(o.declared_type, slot.declared_type)]
            args.append(rng.choice(candidates))
        return Literal(predicate.name, tuple(args))

    by_name = {p.name: p for p in predicates}
    required = sorted({p.predicate for a in actions for p in a.preconditions})
    produced = sorted({e.predicate for a in actions for e in a.effects})

    init = []
    for _ in range(rng.randint(0, 4) if required else 0):
        atom = ground(by_name[rng.choice(required)])
        if atom not in init:
            init.append(atom)

    goal = []
    for _ in range(rng.randint(1, 3)):
        literal = ground(by_name[rng.choice(produced)])
        if literal.atom in {g.atom for g in goal}:
            continue
        goal.append(literal.negate() if rng.random() < 0.15 else literal)

    return ModelBundle(
        DomainModel(f"dom_{seed}", hierarchy, tuple(predicates), tuple(actions)),
        ProblemModel(f"prob_{seed}", tuple(objects), tuple(init), tuple(goal)),
    )
