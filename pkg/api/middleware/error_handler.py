import logging
import traceback
from typing import Any, Dict, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from src.exceptions import CompileGuardError, InvalidPlanError, MarkupParseError, PddlParseError

logger = logging.getLogger(__name__)


class ErrorResponse:
    """Standardized error response class"""

    @staticmethod
    def create_error_response(
        error_type: str,
        status_code: int,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        path: Optional[str] = None,
        method: Optional[str] = None,
    ) -> JSONResponse:
        """Create a standardized error response"""
        error_content: Dict[str, Any] = {
            "error": {
                "type": error_type,
                "status_code": status_code,
                "message": message,
            }
        }
        if details is not None:
            error_content["error"]["details"] = details
        if path:
            error_content["error"]["path"] = path
        if method:
            error_content["error"]["method"] = method

        return JSONResponse(status_code=status_code, content=error_content)


def _respond(request: Request, error_type: str, status_code: int, message: str,
             details: Optional[Dict[str, Any]] = None) -> JSONResponse:
    return ErrorResponse.create_error_response(
        error_type, status_code, message, details, path=str(request.url), method=request.method
    )


def setup_error_handlers(app: FastAPI):
    """Setup error handlers for the FastAPI application"""

    @app.exception_handler(HTTPException)
    @app.exception_handler(StarletteHTTPException)
    async def http_exception_handler(request: Request, exc: StarletteHTTPException):
        """Handle HTTP exceptions"""
        logger.warning(f"HTTP exception: {exc.status_code} - {exc.detail}")
        return _respond(request, "http_error", exc.status_code, str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def validation_exception_handler(request: Request, exc: RequestValidationError):
        """Handle request validation errors"""
        logger.warning(f"Validation error: {exc.errors()}")
        return _respond(request, "validation_error", 422, "Request validation failed",
                        {"validation_errors": [dict(e, ctx=None) for e in exc.errors()]})

    @app.exception_handler(MarkupParseError)
    async def markup_error_handler(request: Request, exc: MarkupParseError):
        """Model document does not parse"""
        logger.info(f"Markup rejected: {exc}")
        return _respond(request, "markup_error", 422, "Model document could not be parsed",
                        {"errors": [e.to_dict() for e in exc.errors]})

    @app.exception_handler(CompileGuardError)
    async def compile_guard_handler(request: Request, exc: CompileGuardError):
        """Model is not ready for compilation"""
        logger.info(f"Compilation refused: {exc}")
        return _respond(request, "compile_guard", 409, str(exc), {"codes": exc.codes})

    @app.exception_handler(InvalidPlanError)
    async def invalid_plan_handler(request: Request, exc: InvalidPlanError):
        """Supplied plan does not execute"""
        return _respond(request, "invalid_plan", 400, str(exc), {"step_index": exc.step_index})

    @app.exception_handler(PddlParseError)
    async def pddl_parse_handler(request: Request, exc: PddlParseError):
        """Plan or PDDL text is malformed"""
        return _respond(request, "parse_error", 400, str(exc))

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        """Handle value errors"""
        logger.error(f"Value error: {str(exc)}")
        return _respond(request, "value_error", 400, str(exc))

    @app.exception_handler(Exception)
    async def general_exception_handler(request: Request, exc: Exception):
        """Handle all other exceptions"""
        logger.error(f"Unhandled exception: {str(exc)}")
        logger.error(f"Traceback: {traceback.format_exc()}")
        return _respond(request, "internal_server_error", 500, "An internal server error occurred")
