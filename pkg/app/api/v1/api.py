from fastapi import APIRouter

from app.api.v1.endpoints import experiments, models

api_router = APIRouter()

api_router.include_router(
    experiments.router,
    prefix="/experiments",
    tags=["Experiments"]
)

api_router.include_router(
    models.router,
    prefix="/models",
    tags=["Single-slot models"]
)
