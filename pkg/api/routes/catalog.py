from typing import Any, Dict, List

from fastapi import APIRouter

from src.checker import error_catalog

router = APIRouter()


@router.get("/catalog")
async def get_catalog() -> List[Dict[str, Any]]:
    """Consistency error types with observed rates, descriptions and suggestions"""
    return [entry.to_dict() for entry in error_catalog()]
