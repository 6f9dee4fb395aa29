"""Health check endpoint routes."""
from fastapi import APIRouter

from core.config import settings
from schemas.models import HealthResponse

router = APIRouter()


@router.get("/health", response_model=HealthResponse)
async def health_check():
    """Liveness with the configured working precision."""
    return HealthResponse(status="healthy", version=settings.APP_VERSION, precision_bits=settings.CL_PRECISION)
