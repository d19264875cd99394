# Planning package

from src.planner.plan import (
    Plan,
    PlanSource,
    PlanStep,
    PlanValidator,
    ValidationResult,
    format_plan,
    parse_plan_text,
    validate_plan,
)
from src.planner.search import (
    BreadthFirstPlanner,
    PlannerResult,
    PlannerStatus,
    SearchLimits,
    solve_internal,
)
from src.planner.external import ExternalPlanner, ExternalPlannerConfig, invoke_external

__all__ = [
    "BreadthFirstPlanner",
    "ExternalPlanner",
    "ExternalPlannerConfig",
    "Plan",
    "PlanSource",
    "PlanStep",
    "PlanValidator",
    "PlannerResult",
    "PlannerStatus",
    "SearchLimits",
    "ValidationResult",
    "format_plan",
    "invoke_external",
    "parse_plan_text",
    "solve_internal",
    "validate_plan",
]
