"""Tests for LLL reduction and minimal-vector enumeration."""
import random
from fractions import Fraction
from itertools import product
from math import isqrt

import pytest
import sympy

from core.config import settings
from core.exceptions import DegenerateLatticeError, ResourceError
from schemas.models import GaloisClass, GaloisKind
from services.lattice import gram_numeric
from services.polynomial import IntPolynomial, find_roots
from services.svp import (
    enumerate_short,
    gram_schmidt,
    lll_reduce,
    norm_sq,
    planar_minimum,
    shortest_vectors,
)


WORKED = [[21, -6, -6], [-6, 21, -6], [-6, -6, 21]]


def test_lll_reduces_quadratic_gram():
    """Test the size-reduction and swap on [[15,10],[10,15]]."""
    transform, reduced = lll_reduce([[15, 10], [10, 15]])
    assert [transform[0][0], transform[1][0]] == [1, -1]
    assert reduced == [[10, 5], [5, 15]]


def test_lll_keeps_reduced_basis():
    """Test that an already reduced Gram is left alone."""
    transform, reduced = lll_reduce(WORKED)
    assert transform == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert reduced == WORKED

    transform, _ = lll_reduce([[1, 0], [0, 1]])
    assert transform == [[1, 0], [0, 1]]


def test_lll_preserves_determinant():
    """Test that the reduced Gram has the same determinant."""
    _, reduced = lll_reduce([[15, 10], [10, 15]])
    assert reduced[0][0] * reduced[1][1] - reduced[0][1] ** 2 == 125


def test_lll_rejects_semidefinite():
    """Test that a singular Gram is degenerate."""
    with pytest.raises(DegenerateLatticeError):
        lll_reduce([[1, 1], [1, 1]])


def test_gram_schmidt_squares():
    """Test orthogonalized lengths."""
    _, squares = gram_schmidt([[Fraction(15), Fraction(10)], [Fraction(10), Fraction(15)]])
    assert squares == [15, Fraction(25, 3)]


def test_enumerate_short_lists_all_vectors():
    """Test unpruned enumeration within a radius."""
    gram = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    found = enumerate_short(gram, Fraction(1), prune=False)
    assert sorted(x for _, x in found) == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_shortest_vectors_quadratics(make_gram):
    """Test minimal vectors of the reference quadratic Grams."""
    mv = shortest_vectors(make_gram([[15, 10], [10, 15]]))
    assert mv.min_norm_sq == 10
    assert mv.vectors == [(1, -1)]
    assert mv.kissing == 2

    mv = shortest_vectors(make_gram([[6, -2], [-2, 6]]))
    assert mv.min_norm_sq == 6
    assert mv.vectors == [(1, 0), (0, 1)]
    assert mv.kissing == 4


def test_shortest_vectors_worked_cubic(make_gram):
    """Test the three root vectors of the worked cubic."""
    mv = shortest_vectors(make_gram(WORKED))
    assert mv.min_norm_sq == 21
    assert mv.vectors == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert mv.kissing == 6
    assert norm_sq(WORKED, (1, 1, 1)) == 27
    assert norm_sq(WORKED, (1, -1, 0)) == 54


def test_shortest_vectors_hexagonal(make_gram):
    """Test that a hexagonal lattice has kissing number 6."""
    mv = shortest_vectors(make_gram([[2, -1], [-1, 2]]))
    assert mv.min_norm_sq == 2
    assert mv.kissing == 6
    assert set(mv.vectors) == {(1, 0), (0, 1), (1, 1)}


def test_shortest_vectors_schema(make_gram):
    """Test serialization of minimal vectors."""
    out = shortest_vectors(make_gram([[6, -2], [-2, 6]])).to_schema()
    assert out.min_norm_sq == 6
    assert out.vectors == [[1, 0], [0, 1]]


def test_shortest_vectors_numeric_ties():
    """Test tie detection on a numeric hexagonal Gram."""
    f = IntPolynomial.parse("x^3-2")
    galois = GaloisClass(kind=GaloisKind.SYMMETRIC, splitting_degree=6)
    _, gram = gram_numeric(f, galois, find_roots(f))
    mv = shortest_vectors(gram)
    assert not mv.exact
    assert mv.kissing == 6
    assert abs(float(mv.min_norm_sq) - 6 * 2 ** (2 / 3)) < 1e-8


def test_shortest_vectors_rank_cap(monkeypatch, make_gram):
    """Test the enumeration resource cap."""
    monkeypatch.setattr(settings, "SVP_MAX_RANK", 2)
    with pytest.raises(ResourceError):
        shortest_vectors(make_gram(WORKED))


def test_planar_minimum():
    """Test the reduced nine-candidate rule."""
    assert planar_minimum([[15, 10], [10, 15]]) == 10
    assert planar_minimum([[4, -3], [-3, 4]]) == 2
    assert planar_minimum([[10, 3], [3, 1]]) == 1
    # basis (3,1), (10,3) of Z^2: the minimum needs a coefficient of 3
    assert planar_minimum([[10, 33], [33, 109]]) == 1


def _positive(vector):
    for value in vector:
        if value:
            return tuple(vector) if value > 0 else tuple(-v for v in vector)
    return tuple(vector)


def _random_gram(rng, n):
    """Diagonally dominant integer Gram, with a Gershgorin floor on x^T G x / |x|^2."""
    off = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            off[i][j] = off[j][i] = rng.randint(-6, 6)
    gram = [
        [off[i][j] if i != j else sum(abs(v) for v in off[i]) + rng.randint(1, 30) for j in range(n)]
        for i in range(n)
    ]
    floor = min(gram[i][i] - sum(abs(v) for v in off[i]) for i in range(n))
    return gram, floor


def _random_unimodular(rng, n):
    u = sympy.eye(n)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2)
        u[:, i] = u[:, i] + rng.choice([-2, -1, 1, 2]) * u[:, j]
        if rng.random() < 0.3:
            u[:, i] = -u[:, i]
    return u


def test_shortest_vectors_match_exhaustive_search(make_gram):
    """Test enumeration against every coefficient vector with |c_i| <= 5."""
    rng = random.Random(7)
    checked = 0
    while checked < 60:
        n = rng.choice([2, 3])
        gram, floor = _random_gram(rng, n)
        norms = {}
        for c in product(range(-5, 6), repeat=n):
            if any(c):
                norms[_positive(c)] = norm_sq(gram, c)
        smallest = min(norms.values())
        # a vector outside the box has norm >= 36·floor
        if 36 * floor <= smallest:
            continue
        mv = shortest_vectors(make_gram(gram))
        assert mv.min_norm_sq == smallest
        assert set(mv.vectors) == {c for c, value in norms.items() if value == smallest}
        assert mv.kissing == 2 * len(mv.vectors)
        checked += 1


@pytest.mark.parametrize("seed", range(10))
def test_shortest_vectors_basis_independent(make_gram, seed):
    """Test that a unimodular change of basis keeps the minimum and maps the vectors."""
    rng = random.Random(seed)
    n = rng.choice([2, 3])
    gram, _ = _random_gram(rng, n)
    if seed == 0:
        gram, n = WORKED, 3
    u = _random_unimodular(rng, n)
    assert abs(u.det()) == 1
    changed = (u.T * sympy.Matrix(gram) * u).tolist()

    original = shortest_vectors(make_gram(gram))
    moved = shortest_vectors(make_gram([[int(v) for v in row] for row in changed]))
    assert moved.min_norm_sq == original.min_norm_sq
    assert moved.kissing == original.kissing
    mapped = {_positive([int(v) for v in u * sympy.Matrix(x)]) for x in moved.vectors}
    assert mapped == set(original.vectors)


@pytest.mark.slow
def test_planar_minimum_matches_enumeration():
    """Test the nine-candidate rule against enumeration on random positive definite Grams."""
    rng = random.Random(11)
    checked = 0
    while checked < 10_000:
        a, c = rng.randint(1, 200), rng.randint(1, 200)
        b = rng.randint(-isqrt(a * c), isqrt(a * c))
        if b * b >= a * c:
            continue
        gram = [[Fraction(a), Fraction(b)], [Fraction(b), Fraction(c)]]
        found = enumerate_short(gram, Fraction(min(a, c)))
        assert planar_minimum([[a, b], [b, c]]) == found[0][0]
        checked += 1
