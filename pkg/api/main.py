import logging
from contextlib import asynccontextmanager

import uvicorn
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from api.middleware.error_handler import setup_error_handlers
from api.routes import catalog, health, models
from config.settings import settings

logging.basicConfig(level=getattr(logging, settings.LOG_LEVEL, logging.INFO))
logger = logging.getLogger(__name__)

API_VERSION = "1.0.0"


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager"""
    logger.info("Starting planning model API...")
    logger.info(f"Debug mode: {settings.DEBUG}")
    yield
    logger.info("Shutting down planning model API...")


def create_app() -> FastAPI:
    """Create and configure FastAPI application"""

    app = FastAPI(
        title="Planning Model API",
        description="Consistency checking, PDDL compilation, reachability analysis and planning for model documents",
        version=API_VERSION,
        docs_url="/docs" if settings.DEBUG else None,
        redoc_url="/redoc" if settings.DEBUG else None,
        lifespan=lifespan,
    )

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"] if settings.DEBUG else [],
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    setup_error_handlers(app)

    app.include_router(health.router, prefix="/api/v1", tags=["health"])
    app.include_router(catalog.router, prefix="/api/v1", tags=["catalog"])
    app.include_router(models.router, prefix="/api/v1", tags=["models"])

    @app.get("/")
    async def root():
        return {
            "message": "Planning Model API",
            "version": API_VERSION,
            "status": "running",
            "docs": "/docs" if settings.DEBUG else "disabled",
        }

    return app


app = create_app()

if __name__ == "__main__":
    uvicorn.run(
        "api.main:app",
        host="0.0.0.0",
        port=8000,
        reload=settings.DEBUG,
        log_level="info" if not settings.DEBUG else "debug",
    )
