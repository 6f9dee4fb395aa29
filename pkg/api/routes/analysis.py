"""Analysis and family endpoint routes."""
import time
from typing import List, Optional

from fastapi import APIRouter, Query
from fastapi.responses import JSONResponse

from core.exceptions import ResourceError
from core.logging_config import logger
from schemas.models import FamilyMember, FamilySpec
from services.analyzer import LatticeAnalyzer
from sources.family_source import FamilySource

router = APIRouter()

MAX_FAMILY_COUNT = 50


@router.get("/analyze")
def analyze(
    polynomial: str = Query(..., description='Polynomial text, e.g. "x^2-2x-1"'),
    precision: Optional[int] = Query(None, ge=64, description="Starting precision in bits"),
):
    """
    Analyze one polynomial.

    Returns:
        AnalysisReport serialized with its schema version
    """
    start = time.time()
    report = LatticeAnalyzer(precision).analyze(polynomial)
    logger.info(
        "Analysis request served",
        polynomial=report.polynomial,
        latency_ms=round((time.time() - start) * 1000, 2),
    )
    return JSONResponse(content=report.model_dump(mode="json", by_alias=True))


@router.post("/family", response_model=List[FamilyMember])
def family(spec: FamilySpec, precision: Optional[int] = Query(None, ge=64)):
    """Generate and certify members of the large-Pisot family."""
    if spec.count > MAX_FAMILY_COUNT:
        raise ResourceError(f"family count {spec.count} exceeds {MAX_FAMILY_COUNT}")
    return FamilySource(spec).certify(precision)
