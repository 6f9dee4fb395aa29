"""FastAPI application main file."""
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from api.routes import analysis, health
from core.exceptions import DomainError, LatticeToolkitError, ResourceError, UnsupportedInputError
from core.config import settings
from core.logging_config import logger


app = FastAPI(
    title="Conjugate Lattice API",
    description="Conjugate lattices of integer polynomials: Gram matrices, minimal vectors and certificates",
    version=settings.APP_VERSION,
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(analysis.router, prefix="/api", tags=["analysis"])
app.include_router(health.router, prefix="/api", tags=["health"])


def status_for(error: LatticeToolkitError) -> int:
    """HTTP status for a toolkit error."""
    if isinstance(error, DomainError):
        return 422
    if isinstance(error, UnsupportedInputError):
        return 400
    if isinstance(error, ResourceError):
        return 413
    return 500


@app.exception_handler(LatticeToolkitError)
async def toolkit_error_handler(request: Request, exc: LatticeToolkitError):
    status = status_for(exc)
    log = logger.error if status == 500 else logger.warning
    log("Request failed", path=request.url.path, code=exc.code, error=str(exc))
    return JSONResponse(status_code=status, content={"code": exc.code, "detail": str(exc)})


@app.get("/")
async def root():
    """Root endpoint with API information."""
    return {
        "status": "OK",
        "service": "Conjugate Lattice API",
        "version": settings.APP_VERSION,
        "docs": "/docs",
        "endpoints": {
            "health": "/api/health",
            "analyze": "/api/analyze",
            "family": "/api/family",
        },
    }


@app.on_event("startup")
async def startup_event():
    logger.info("Conjugate Lattice API started")


@app.on_event("shutdown")
async def shutdown_event():
    logger.info("Conjugate Lattice API shutting down")
