# Consistency checking package

from src.checker.catalog import CatalogEntry, ErrorCode, error_catalog
from src.checker.consistency import (
    CheckReport,
    ConsistencyChecker,
    ConsistencyError,
    check_action_bodies,
    check_declarations,
    check_model,
    check_problem_state,
)

__all__ = [
    "CatalogEntry",
    "CheckReport",
    "ConsistencyChecker",
    "ConsistencyError",
    "ErrorCode",
    "check_action_bodies",
    "check_declarations",
    "check_model",
    "check_problem_state",
    "error_catalog",
]
