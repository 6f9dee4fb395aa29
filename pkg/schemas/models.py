"""Pydantic models for report validation and serialization."""
import enum
from pydantic import BaseModel, Field, field_validator
from typing import Optional, List, Dict, Union, Literal


SCHEMA_VERSION = 1

Undetermined = Literal["undetermined"]
FlagValue = Union[bool, Undetermined]
Number = Union[int, float]


def flag_value(value: Optional[bool]) -> FlagValue:
    """Map a tri-state (None = undetermined) onto its JSON form."""
    return "undetermined" if value is None else value


class GaloisKind(str, enum.Enum):
    """Galois group classes with Gram constructions."""
    CYCLIC = "cyclic"
    SYMMETRIC = "symmetric"
    ALTERNATING = "alternating"
    UNKNOWN = "unknown"


class GramTier(str, enum.Enum):
    """Exactness tier of a Gram matrix."""
    EXACT = "exact"
    NUMERIC = "numeric"


class Flag(BaseModel):
    """A certificate flag with its provenance."""
    value: FlagValue = Field(..., description="true, false or \"undetermined\"")
    by: str = Field(..., description="Criterion name or \"enumeration\"")


# Polynomial invariants
class SymmetricInvariants(BaseModel):
    """Power-sum invariants of the roots of a monic polynomial."""
    A: int = Field(..., description="Sum of squared roots")
    B: int = Field(..., description="Sum of pairwise root products")
    trace_e1: int = Field(..., description="Sum of the roots")


class CycleTypeSample(BaseModel):
    """Factor-degree pattern of f modulo a prime."""
    prime: int
    pattern: List[int] = Field(..., description="Factor degrees, descending")


class GaloisClass(BaseModel):
    """Classification of the Galois group of f."""
    kind: GaloisKind
    cycle: Optional[List[int]] = Field(
        None, description="Generator as root-index images (0-based), cyclic class only"
    )
    splitting_degree: Optional[int] = Field(None, description="d = [K:Q]")
    notes: List[str] = Field(default_factory=list)


# Lattice objects
class GramMatrixOut(BaseModel):
    """Serialized Gram matrix of the conjugate lattice."""
    tier: GramTier
    n: int = Field(..., description="Number of conjugates")
    entries: List[List[Number]] = Field(..., description="Gram of the lattice basis")
    row_sum: Number = Field(..., description="Expected row sum (d/n)*a_{n-1}^2")
    rank: int
    basis_size: int
    scale: int = Field(1, description="Entries are multiplied by a_n^2")
    error_bound: Optional[float] = Field(None, description="Entrywise bound (numeric tier)")


class MinimalVectorsOut(BaseModel):
    """Minimal vectors of a lattice, one per +/- pair."""
    min_norm_sq: Number
    vectors: List[List[int]]
    kissing: int
    scale: int = Field(1, description="min_norm_sq is multiplied by a_n^2, as in the Gram")


class LatticeCertificate(BaseModel):
    """Well-roundedness certificate of a lattice."""
    rank: int
    min_norm_sq: Number
    kissing: int
    is_wr: Flag
    is_gwr: Flag
    is_nearly_orthogonal: Flag
    has_minimal_basis: Flag
    minimal_basis: Optional[List[List[int]]] = None
    determinant: Optional[Number] = Field(None, description="det of the Gram matrix")
    criteria: List[str] = Field(default_factory=list, description="Closed-form criteria that fired")
    notes: List[str] = Field(default_factory=list)


class PlanarCriterion(BaseModel):
    """Closed-form well-roundedness verdict for a quadratic."""
    is_wr: bool
    discriminant: int
    cos_angle: str = Field(..., description="Exact cosine of the angle between the two roots")
    minimal_set: str = Field(..., description="Which vectors are minimal")
    automorphism_group: Optional[str] = None


class CubicCriterion(BaseModel):
    """Sufficient well-roundedness test for cyclic cubics."""
    wr_by_criterion: FlagValue
    roots_are_minimal: FlagValue
    note: str = ""


class DivisibilityResult(BaseModel):
    """Kissing-number divisibility law check."""
    holds: bool
    vacuous: bool
    note: str = ""


class DeterminantReport(BaseModel):
    """Lattice determinant by Gram elimination and closed forms."""
    det_gram: Number
    det_gram_exact: bool
    det_lattice: float
    closed_form: Optional[float] = None
    closed_form_name: Optional[str] = None
    closed_form_radicand: Optional[int] = None
    closed_form_agrees: Optional[bool] = None
    circulant_full: Optional[float] = None
    circulant_partial: Optional[float] = None
    circulant_agrees: Optional[bool] = None
    notes: List[str] = Field(default_factory=list)


# Reports
class AnalysisReport(BaseModel):
    """Full analysis of one polynomial."""
    schema_version: int = Field(SCHEMA_VERSION, serialization_alias="schema")
    polynomial: str
    coefficients: List[int] = Field(..., description="Ascending powers")
    degree: int
    discriminant: int
    irreducible: FlagValue
    irreducibility_reason: str
    pisot: Optional[Flag] = None
    galois: GaloisClass
    invariants: Optional[SymmetricInvariants] = None
    rank: int
    rank_certified: bool
    gram: Optional[GramMatrixOut] = None
    trace_sum_gram: Optional[GramMatrixOut] = Field(
        None, description="Integer trace-sum Gram when it differs from the Hermitian one"
    )
    minimal_vectors: Optional[MinimalVectorsOut] = None
    certificate: Optional[LatticeCertificate] = None
    planar: Optional[PlanarCriterion] = None
    cubic: Optional[CubicCriterion] = None
    determinant: Optional[DeterminantReport] = None
    notes: List[str] = Field(default_factory=list)
    timing_ms: Optional[Dict[str, float]] = None

    def has_undetermined(self) -> bool:
        """Whether any sub-result could not be decided."""
        if self.irreducible == "undetermined":
            return True
        if self.pisot is not None and self.pisot.value == "undetermined":
            return True
        if self.certificate is None:
            return True
        flags = (
            self.certificate.is_wr,
            self.certificate.is_gwr,
            self.certificate.is_nearly_orthogonal,
            self.certificate.has_minimal_basis,
        )
        return any(flag.value == "undetermined" for flag in flags)


class FamilySpec(BaseModel):
    """Request for members of the large-Pisot family."""
    n: int = Field(..., description="Degree, a prime >= 3")
    count: int = Field(..., ge=1)
    sign_top: int = Field(1, description="Sign of a_{n-1}")
    sign_const: int = Field(-1, description="Sign of a_0")
    spread: int = Field(0, ge=0, description="Extra |a_{n-1}| values beyond |a_0|+2")

    @field_validator("sign_top", "sign_const")
    @classmethod
    def _unit_sign(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return value


class FamilyMember(BaseModel):
    """One family polynomial with its certification outcome."""
    polynomial: str
    coefficients: List[int]
    perron: bool
    galois: GaloisKind
    tier: Optional[GramTier] = None
    certificate: Optional[LatticeCertificate] = None
    max_coherence: Optional[float] = None
    verified: Flag
    notes: List[str] = Field(default_factory=list)


class CorpusCheck(BaseModel):
    """Expected versus computed value for one reference row."""
    name: str
    expected: str
    computed: str
    passed: bool
    annotation: Optional[str] = None


class CorpusReport(BaseModel):
    """Outcome of the reference corpus run."""
    schema_version: int = Field(SCHEMA_VERSION, serialization_alias="schema")
    checks: List[CorpusCheck]
    passed: int
    failed: int


class HealthResponse(BaseModel):
    """Response schema for /health endpoint."""
    status: str
    version: str
    precision_bits: int
