# Core planning model package

from src.model.entities import (
    ActionSchema,
    DomainModel,
    Literal,
    ModelBundle,
    ObjectDecl,
    Parameter,
    PredicateDecl,
    ProblemModel,
    TypeHierarchy,
    arity_of,
    is_canonical_type,
    is_subtype,
    substitute,
)

__all__ = [
    "ActionSchema",
    "DomainModel",
    "Literal",
    "ModelBundle",
    "ObjectDecl",
    "Parameter",
    "PredicateDecl",
    "ProblemModel",
    "TypeHierarchy",
    "arity_of",
    "is_canonical_type",
    "is_subtype",
    "substitute",
]
