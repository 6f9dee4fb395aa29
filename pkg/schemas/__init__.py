"""Schemas package."""
from schemas.models import (
    AnalysisReport,
    CorpusCheck,
    CorpusReport,
    CubicCriterion,
    CycleTypeSample,
    DeterminantReport,
    DivisibilityResult,
    FamilyMember,
    FamilySpec,
    Flag,
    GaloisClass,
    GaloisKind,
    GramMatrixOut,
    GramTier,
    HealthResponse,
    LatticeCertificate,
    MinimalVectorsOut,
    PlanarCriterion,
    SymmetricInvariants,
)

__all__ = [
    "AnalysisReport",
    "CorpusCheck",
    "CorpusReport",
    "CubicCriterion",
    "CycleTypeSample",
    "DeterminantReport",
    "DivisibilityResult",
    "FamilyMember",
    "FamilySpec",
    "Flag",
    "GaloisClass",
    "GaloisKind",
    "GramMatrixOut",
    "GramTier",
    "HealthResponse",
    "LatticeCertificate",
    "MinimalVectorsOut",
    "PlanarCriterion",
    "SymmetricInvariants",
]
