"""Tests for Gram matrix construction."""
from math import factorial

import pytest

from core.config import settings
from core.exceptions import ExactnessUnsupportedError, ResourceError, UnsupportedInputError
from schemas.models import GaloisClass, GaloisKind, GramTier
from services.galois import classify_galois, cycle_type_sample, sample_primes
from services.lattice import (
    alternating_closed_gram,
    alternating_orbit_gram,
    closed_form_gram,
    cross_check,
    embedding_matrix,
    gram_cyclic_circulant,
    gram_exact,
    gram_numeric,
    gram_quadratic,
    is_positive_definite,
    lattice_rank,
    max_deviation,
    symmetric_closed_gram,
)
from services.polynomial import IntPolynomial, discriminant, find_roots, is_square


CYCLIC_3 = GaloisClass(kind=GaloisKind.CYCLIC, cycle=[1, 2, 0], splitting_degree=3)
CYCLIC_2 = GaloisClass(kind=GaloisKind.CYCLIC, cycle=[1, 0], splitting_degree=2)
SYMMETRIC_3 = GaloisClass(kind=GaloisKind.SYMMETRIC, splitting_degree=6)


def _galois(f, roots=None):
    return classify_galois(f, cycle_type_sample(f, sample_primes(f)), roots)


def test_lattice_rank_examples(worked_cubic):
    """Test rank n, and n - 1 when a_{n-1} = 0."""
    assert lattice_rank(worked_cubic) == 3
    assert lattice_rank(IntPolynomial.parse("x^3-2")) == 2
    assert lattice_rank(IntPolynomial.parse("x^2+5x+5")) == 2


def test_lattice_rank_composite_degree():
    """Test integer-relation rank for a composite degree."""
    # alpha_2 = -alpha_1 and alpha_4 = -alpha_3
    assert lattice_rank(IntPolynomial.parse("x^4-2")) == 2


def test_gram_exact_cyclic_cubic(worked_cubic, pisot_cubic):
    """Test the A/B Gram of cyclic cubics."""
    gram = gram_exact(worked_cubic, CYCLIC_3)
    assert gram.tier == GramTier.EXACT
    assert gram.entries == [[21, -6, -6], [-6, 21, -6], [-6, -6, 21]]
    assert gram.row_sums_hold()
    assert gram.row_sum == 9

    gram = gram_exact(pisot_cubic, CYCLIC_3)
    assert gram.entries == [[1764, 0, 0], [0, 1764, 0], [0, 0, 1764]]


def test_gram_exact_quadratics():
    """Test both signs of the discriminant."""
    gram = gram_exact(IntPolynomial.parse("x^2-2x-1"), CYCLIC_2)
    assert gram.entries == [[6, -2], [-2, 6]]
    gram = gram_exact(IntPolynomial.parse("x^2+x+2"), CYCLIC_2)
    assert gram.entries == [[4, -3], [-3, 4]]
    gram = gram_exact(IntPolynomial.parse("x^2+5x+5"), CYCLIC_2)
    assert gram.entries == [[15, 10], [10, 15]]


def test_gram_quadratic_non_monic_scale():
    """Test that non-monic quadratics are scaled by a_2^2."""
    gram = gram_exact(IntPolynomial.parse("2x^2+3x-1"), CYCLIC_2)
    assert gram.scale == 4
    assert gram.entries == gram_quadratic(2, 3, -1)
    assert gram.entries == [[13, -4], [-4, 13]]
    assert gram.row_sums_hold()


def test_gram_exact_rank_deficient_block():
    """Test the leading block when a_{n-1} = 0."""
    f = IntPolynomial.parse("x^3-3x+1")
    gram = gram_exact(f, CYCLIC_3)
    assert gram.rank == 2
    assert gram.full == [[6, -3, -3], [-3, 6, -3], [-3, -3, 6]]
    assert gram.entries == [[6, -3], [-3, 6]]
    assert gram.row_sum == 0


def test_gram_exact_symmetric_totally_real(symmetric_cubic):
    """Test the S_3 closed form on a totally real cubic."""
    gram = gram_exact(symmetric_cubic, SYMMETRIC_3)
    assert gram.entries == [[2048, 0, 0], [0, 2048, 0], [0, 0, 2048]]
    assert gram.splitting_degree == 6
    assert gram.row_sums_hold()


def test_gram_exact_symmetric_complex_roots():
    """Test that complex roots force the numeric path."""
    f = IntPolynomial.parse("x^3+49x^2+47")
    with pytest.raises(ExactnessUnsupportedError):
        gram_exact(f, SYMMETRIC_3)


def test_gram_exact_unknown_class():
    """Test that an unknown class has no exact Gram."""
    with pytest.raises(UnsupportedInputError):
        gram_exact(IntPolynomial.parse("x^3-2"), GaloisClass(kind=GaloisKind.UNKNOWN))


def test_closed_forms():
    """Test the S_n and A_n closed-form Grams."""
    assert symmetric_closed_gram(3, 21, -6)[0][:2] == [42, -12]
    assert alternating_closed_gram(3, 21, -6)[0][:2] == [42, -6]
    orbit = alternating_orbit_gram(5, 10, 3)
    assert orbit[0][0] == factorial(4) * 10 // 2
    assert orbit[0][1] == factorial(3) * 3


def test_circulant_matches_closed_form(worked_cubic):
    """Test the circulant path against the A/B Gram."""
    roots = find_roots(worked_cubic)
    gram = gram_cyclic_circulant(worked_cubic, [1, 2, 0], roots)
    assert gram.entries == [[21, -6, -6], [-6, 21, -6], [-6, -6, 21]]


def test_gram_exact_cyclic_quintic(cyclic_quintic):
    """Test the circulant Gram of a cyclic quintic."""
    roots = find_roots(cyclic_quintic)
    galois = _galois(cyclic_quintic, roots)
    gram = gram_exact(cyclic_quintic, galois, roots)
    assert gram.n == 5
    assert all(row[i] == 9 for i, row in enumerate(gram.full))
    assert all(sum(row) == 1 for row in gram.full)
    assert is_positive_definite(gram.entries)


def test_numeric_oracle_agrees(worked_cubic):
    """Test that the embedding oracle agrees with the exact Gram."""
    roots = find_roots(worked_cubic)
    exact = gram_exact(worked_cubic, CYCLIC_3, roots)
    embeddings, numeric = gram_numeric(worked_cubic, CYCLIC_3, roots)
    assert embeddings.splitting_degree == 3
    assert numeric.tier == GramTier.NUMERIC
    assert float(max_deviation(exact, numeric)) < 1e-8
    cross_check(exact, numeric)


def test_numeric_oracle_symmetric(symmetric_cubic):
    """Test the six-embedding oracle for an S_3 cubic."""
    roots = find_roots(symmetric_cubic)
    embeddings, numeric = gram_numeric(symmetric_cubic, SYMMETRIC_3, roots)
    assert embeddings.splitting_degree == 6
    assert abs(float(numeric.full[0][0]) - 2048) < 1e-8
    assert abs(float(numeric.full[0][1])) < 1e-8


def test_numeric_complex_quadratic():
    """Test the Hermitian Gram of an imaginary quadratic."""
    f = IntPolynomial.parse("x^2+x+2")
    _, numeric = gram_numeric(f, CYCLIC_2, find_roots(f))
    expected = [[4, -3], [-3, 4]]
    for i in range(2):
        for j in range(2):
            assert abs(float(numeric.full[i][j]) - expected[i][j]) < 1e-8


def test_numeric_hexagonal_cube_root():
    """Test the Hermitian Gram of x^3-2, which is hexagonal after scaling."""
    f = IntPolynomial.parse("x^3-2")
    _, numeric = gram_numeric(f, SYMMETRIC_3, find_roots(f))
    c2 = 2 ** (2 / 3)
    assert numeric.basis_size == 2
    assert abs(float(numeric.entries[0][0]) - 6 * c2) < 1e-8
    assert abs(float(numeric.entries[0][1]) + 3 * c2) < 1e-8


def test_embedding_matrix_cap(monkeypatch, symmetric_cubic):
    """Test the splitting-degree resource cap."""
    monkeypatch.setattr(settings, "MAX_SPLITTING_DEGREE", 4)
    with pytest.raises(ResourceError):
        embedding_matrix(SYMMETRIC_3, find_roots(symmetric_cubic))


def test_is_positive_definite():
    """Test Sylvester's criterion."""
    assert is_positive_definite([[6, -2], [-2, 6]])
    assert not is_positive_definite([[1, 2], [2, 1]])


def test_numeric_oracle_full_groups(cyclic_quintic):
    """Test the S_5 and A_5 trace sums against 120 and 60 embeddings."""
    roots = find_roots(cyclic_quintic)
    for kind, d, diagonal, off in [
        (GaloisKind.SYMMETRIC, 120, 216, -48),
        (GaloisKind.ALTERNATING, 60, 108, -24),
    ]:
        galois = GaloisClass(kind=kind, splitting_degree=d)
        exact = closed_form_gram(cyclic_quintic, galois)
        assert exact.full[0][0] == diagonal
        assert exact.full[0][1] == off
        assert exact.row_sums_hold()
        embeddings, numeric = gram_numeric(cyclic_quintic, galois, roots)
        assert embeddings.splitting_degree == d
        cross_check(exact, numeric)


def _simplest_cubic(t):
    """x^3 - t x^2 - (t+3) x - 1: totally real and cyclic for every t."""
    return IntPolynomial((-1, -(t + 3), -t, 1))


def _s3_cubics(count):
    """Totally real x^3 + x^2 - m x - 1 whose discriminant is not a square."""
    found = []
    m = 2
    while len(found) < count:
        f = IntPolynomial((-1, -m, 1, 1))
        if not is_square(discriminant(f)):
            found.append(f)
        m += 1
    return found


# x^5 - 5x^3 + 4x + 1 shifted by one: five real roots, discriminant 38569 (prime)
S5_QUINTIC = IntPolynomial((1, -6, -5, 5, 5, 1))


def _assert_oracle_agrees(f, kind, d):
    roots = find_roots(f, 256)
    assert roots.totally_real
    galois = _galois(f, roots)
    assert galois.kind == kind
    assert galois.splitting_degree == d
    exact = gram_exact(f, galois, roots)
    embeddings, numeric = gram_numeric(f, galois, roots)
    assert embeddings.splitting_degree == d
    largest = max(abs(v) for row in exact.full for v in row)
    assert float(max_deviation(exact, numeric)) <= 1e-8 * max(1, largest)
    assert exact.row_sums_hold()
    cross_check(exact, numeric)


@pytest.mark.parametrize("f", [_simplest_cubic(t) for t in range(20)], ids=str)
def test_oracle_agrees_on_cyclic_cubics(f):
    """Test exact and embedding Grams on sampled totally real cyclic cubics."""
    _assert_oracle_agrees(f, GaloisKind.CYCLIC, 3)


@pytest.mark.parametrize("f", _s3_cubics(20), ids=str)
def test_oracle_agrees_on_symmetric_cubics(f):
    """Test exact and embedding Grams on sampled totally real S_3 cubics."""
    _assert_oracle_agrees(f, GaloisKind.SYMMETRIC, 6)


def test_oracle_agrees_on_symmetric_quintic():
    """Test the closed-form S_5 Gram against all 120 embeddings of a genuine S_5 quintic."""
    assert discriminant(S5_QUINTIC) == 38569
    _assert_oracle_agrees(S5_QUINTIC, GaloisKind.SYMMETRIC, 120)
