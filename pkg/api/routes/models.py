import logging
from typing import Any, Dict, Optional

from fastapi import APIRouter, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, PositiveFloat, PositiveInt

from api.middleware.error_handler import ErrorResponse
from config.settings import settings
from src.analysis import analyze, format_feedback
from src.checker import CheckReport, ConsistencyChecker
from src.compiler import PddlCompiler
from src.markup import load_model
from src.model import ModelBundle
from src.planner import PlanSource, SearchLimits, parse_plan_text, solve_internal

logger = logging.getLogger(__name__)

router = APIRouter()

checker = ConsistencyChecker()
compiler = PddlCompiler()


class ModelRequest(BaseModel):
    markup: str = Field(..., description="Model document (JSON text)")


class ReachRequest(ModelRequest):
    plan: Optional[str] = Field(None, description="IPC plan text for action coverage")


class PlanRequest(ModelRequest):
    max_expanded_states: Optional[PositiveInt] = None
    wall_clock_budget: Optional[PositiveFloat] = None


def _rejected(report: CheckReport, request: Request) -> JSONResponse:
    return ErrorResponse.create_error_response(
        error_type="consistency_errors",
        status_code=409,
        message=f"model has {len(report.errors)} consistency errors",
        details=report.to_dict(),
        path=str(request.url),
        method=request.method,
    )


def _checked(markup: str, request: Request):
    """Parsed bundle, or the 409 response when the model has consistency errors"""
    bundle: ModelBundle = load_model(markup)
    report = checker.check_model(bundle)
    if not report.is_clean:
        return None, _rejected(report, request)
    return bundle, None


@router.post("/models/check")
def check_model(body: ModelRequest) -> Dict[str, Any]:
    """Consistency report of a model document"""
    bundle = load_model(body.markup)
    return checker.check_model(bundle).to_dict()


@router.post("/models/compile")
def compile_model(body: ModelRequest, request: Request):
    """PDDL domain and problem texts of a consistent model"""
    bundle, rejection = _checked(body.markup, request)
    if rejection is not None:
        return rejection
    return {
        "domain": compiler.compile_domain(bundle.domain),
        "problem": compiler.compile_problem(bundle),
    }


@router.post("/models/reach")
def reach_model(body: ReachRequest, request: Request):
    """Reachability report, with action coverage when a plan is supplied"""
    bundle, rejection = _checked(body.markup, request)
    if rejection is not None:
        return rejection
    plan = parse_plan_text(body.plan, PlanSource.EXTERNAL) if body.plan is not None else None
    report = analyze(bundle, plan)
    payload = report.to_dict()
    payload["feedback"] = format_feedback(report)
    return payload


@router.post("/models/plan")
def plan_model(body: PlanRequest, request: Request):
    """Shortest plan from the built-in breadth-first planner"""
    bundle, rejection = _checked(body.markup, request)
    if rejection is not None:
        return rejection
    limits = SearchLimits(
        max_expanded_states=body.max_expanded_states or settings.SEARCH_MAX_EXPANDED_STATES,
        wall_clock_budget=body.wall_clock_budget or settings.SEARCH_WALL_CLOCK_BUDGET,
    )
    result = solve_internal(bundle, limits)
    logger.info(f"Plan request finished: {result.status.value}")
    return result.to_dict()
