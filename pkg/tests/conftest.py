"""Pytest configuration and fixtures."""
import pytest
from fastapi.testclient import TestClient

from api.main import app
from schemas.models import GramTier
from services.analyzer import LatticeAnalyzer
from services.lattice import GramMatrix
from services.polynomial import IntPolynomial


@pytest.fixture(scope="function")
def client():
    """Create a test client for the API."""
    return TestClient(app)


@pytest.fixture
def make_gram():
    """Build a tier-exact GramMatrix from a full-rank integer matrix."""
    def build(entries, tier=GramTier.EXACT, error_bound=None):
        size = len(entries)
        return GramMatrix(
            full=[list(row) for row in entries],
            entries=[list(row) for row in entries],
            tier=tier,
            rank=size,
            splitting_degree=size,
            row_sum=0,
            error_bound=error_bound,
        )
    return build


@pytest.fixture
def analyzer():
    return LatticeAnalyzer()


@pytest.fixture
def worked_cubic():
    """x^3+3x^2-6x+1, the cyclic cubic with A = 21 and B = -6."""
    return IntPolynomial.parse("x^3+3x^2-6x+1")


@pytest.fixture
def pisot_cubic():
    """x^3+42x^2-24, cyclic with Gram 1764·I."""
    return IntPolynomial.parse("x^3+42x^2-24")


@pytest.fixture
def symmetric_cubic():
    """x^3+32x^2-28, totally real with Galois group S_3."""
    return IntPolynomial.parse("x^3+32x^2-28")


@pytest.fixture
def cyclic_quintic():
    """Minimal polynomial of 2cos(2pi/11)."""
    return IntPolynomial.parse("x^5+x^4-4x^3-3x^2+3x+1")
