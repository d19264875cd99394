from datetime import datetime, timezone
from typing import Any, Dict

from fastapi import APIRouter

from config.prompts import PROMPTS_VERSION

router = APIRouter()


@router.get("/health")
async def health_check() -> Dict[str, Any]:
    """
    Basic health check endpoint
    """
    return {
        "status": "healthy",
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "service": "planning-model-api",
        "version": "1.0.0",
        "prompts_version": PROMPTS_VERSION,
    }
