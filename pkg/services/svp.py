"""LLL reduction and Fincke-Pohst enumeration on Gram matrices."""
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import List, Optional, Sequence, Tuple, Union

import mpmath

from core.config import settings
from core.exceptions import (
    ConstructionError,
    DegenerateLatticeError,
    PrecisionError,
    ResourceError,
)
from schemas.models import MinimalVectorsOut
from services.lattice import GramMatrix
from services.polynomial import mpf_to_fraction


Vector = Tuple[int, ...]
Matrix = List[List[Fraction]]


@dataclass
class MinimalVectorSet:
    """Minimal vectors up to sign, with the reduced basis they were found from."""

    min_norm_sq: Union[int, Fraction, mpmath.mpf]
    vectors: List[Vector]
    exact: bool = True
    transform: List[List[int]] = field(default_factory=list)
    reduced_gram: Matrix = field(default_factory=list)
    tolerance: Optional[Fraction] = None
    scale: int = 1

    @property
    def kissing(self) -> int:
        return 2 * len(self.vectors)

    @property
    def rank(self) -> int:
        return len(self.transform)

    def reduced_basis(self) -> List[Vector]:
        """Columns of the LLL transform as lattice coordinate vectors."""
        size = len(self.transform)
        return [tuple(self.transform[r][c] for r in range(size)) for c in range(size)]

    def to_schema(self) -> MinimalVectorsOut:
        value = self.min_norm_sq
        if isinstance(value, Fraction) and value.denominator == 1:
            value = value.numerator
        elif not isinstance(value, int):
            value = float(value)
        return MinimalVectorsOut(
            min_norm_sq=value,
            vectors=[list(v) for v in self.vectors],
            kissing=self.kissing,
            scale=self.scale,
        )


def _round(value: Fraction) -> int:
    return floor(value + Fraction(1, 2))


def as_fractions(gram: Union[GramMatrix, Sequence[Sequence]]) -> Matrix:
    entries = gram.entries if isinstance(gram, GramMatrix) else gram
    result = []
    for row in entries:
        converted = []
        for value in row:
            if isinstance(value, (int, Fraction)):
                converted.append(Fraction(value))
            else:
                converted.append(mpf_to_fraction(value))
        result.append(converted)
    return result


def norm_sq(gram: Sequence[Sequence], vector: Sequence[int]):
    """x^T G x."""
    size = len(vector)
    return sum(
        vector[i] * gram[i][j] * vector[j]
        for i in range(size)
        for j in range(size)
        if vector[i] and vector[j]
    )


def gram_schmidt(gram: Matrix) -> Tuple[Matrix, List[Fraction]]:
    """
    Exact Gram-Schmidt data from a Gram matrix.

    Returns:
        (mu, B) with B[i] the squared length of the i-th orthogonalized vector

    Raises:
        DegenerateLatticeError: If some B[i] <= 0
    """
    size = len(gram)
    mu = [[Fraction(0)] * size for _ in range(size)]
    squares: List[Fraction] = []
    for i in range(size):
        for j in range(i):
            total = gram[i][j] - sum(mu[j][k] * mu[i][k] * squares[k] for k in range(j))
            mu[i][j] = total / squares[j]
        square = gram[i][i] - sum(mu[i][k] ** 2 * squares[k] for k in range(i))
        if square <= 0:
            raise DegenerateLatticeError("Gram matrix is not positive definite")
        squares.append(square)
    return mu, squares


def _normalize_sign(vector: Sequence[int]) -> Vector:
    for value in vector:
        if value:
            return tuple(vector) if value > 0 else tuple(-v for v in vector)
    return tuple(vector)


def lll_reduce(gram, delta: Optional[Fraction] = None) -> Tuple[List[List[int]], Matrix]:
    """
    LLL-reduce a positive definite Gram matrix in exact arithmetic.

    Args:
        gram: GramMatrix or square matrix of rationals
        delta: Lovasz constant (defaults to LLL_DELTA)

    Returns:
        (U, U^T G U) where the columns of U are the reduced basis vectors,
        each with a positive first nonzero coordinate

    Raises:
        DegenerateLatticeError: If the Gram matrix is only semidefinite
    """
    delta = Fraction(delta if delta is not None else settings.LLL_DELTA)
    current = as_fractions(gram)
    size = len(current)
    basis = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    mu, squares = gram_schmidt(current)

    k = 1
    while k < size:
        for j in range(k - 1, -1, -1):
            q = _round(mu[k][j])
            if not q:
                continue
            basis[k] = [basis[k][t] - q * basis[j][t] for t in range(size)]
            diagonal = current[k][k] - 2 * q * current[k][j] + q * q * current[j][j]
            for t in range(size):
                if t != k:
                    current[k][t] -= q * current[j][t]
                    current[t][k] = current[k][t]
            current[k][k] = diagonal
            for t in range(j):
                mu[k][t] -= q * mu[j][t]
            mu[k][j] -= q
        if squares[k] >= (delta - mu[k][k - 1] ** 2) * squares[k - 1]:
            k += 1
            continue
        basis[k], basis[k - 1] = basis[k - 1], basis[k]
        current[k], current[k - 1] = current[k - 1], current[k]
        for row in current:
            row[k], row[k - 1] = row[k - 1], row[k]
        mu, squares = gram_schmidt(current)
        k = max(k - 1, 1)

    for i in range(size):
        signed = _normalize_sign(basis[i])
        if list(signed) != basis[i]:
            basis[i] = list(signed)
            for t in range(size):
                if t != i:
                    current[i][t] = -current[i][t]
                    current[t][i] = -current[t][i]

    transform = [[basis[c][r] for c in range(size)] for r in range(size)]
    return transform, current


def _decompose(gram: Matrix) -> Matrix:
    """q_ii and q_ij with x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2."""
    size = len(gram)
    q = [list(row) for row in gram]
    for i in range(size):
        for j in range(i + 1, size):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, size):
            for l in range(k, size):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def enumerate_short(gram: Matrix, radius: Fraction, prune: bool = True) -> List[Tuple[Fraction, Vector]]:
    """
    Nonzero x with x^T G x <= radius, by Fincke-Pohst.

    With prune set the radius shrinks to the best norm found so far, so only
    vectors of the minimal norm are returned. Each level walks outward from
    the nearest integer to its centre.
    """
    size = len(gram)
    q = _decompose(gram)
    bound = [Fraction(radius)]
    found: List[Tuple[Fraction, Vector]] = []
    x = [0] * size

    def visit(level: int, used: Fraction) -> None:
        centre = -sum(q[level][j] * x[j] for j in range(level + 1, size))
        start = _round(centre)
        for direction in (0, 1, -1):
            offset = 0 if direction == 0 else 1
            while True:
                value = start + direction * offset
                total = used + q[level][level] * (value - centre) ** 2
                if total > bound[0]:
                    break
                x[level] = value
                if level > 0:
                    visit(level - 1, total)
                elif any(x):
                    if prune and total < bound[0]:
                        found[:] = [(total, tuple(x))]
                        bound[0] = total
                    else:
                        found.append((total, tuple(x)))
                if direction == 0:
                    break
                offset += 1
        x[level] = 0

    visit(size - 1, Fraction(0))
    return found


def _apply(transform: List[List[int]], x: Vector) -> Vector:
    size = len(x)
    return tuple(sum(transform[r][c] * x[c] for c in range(size)) for r in range(size))


def _collect(transform, candidates) -> List[Vector]:
    vectors = {_normalize_sign(_apply(transform, x)) for _, x in candidates}
    return sorted(vectors, reverse=True)


def planar_minimum(gram: Sequence[Sequence[int]]) -> Fraction:
    """
    Minimum of a rank-2 lattice: Lagrange-reduce, then check the nine
    combinations a·x + b·y with a, b in {-1, 0, 1}.
    """
    a, b, c = (Fraction(gram[0][0]), Fraction(gram[0][1]), Fraction(gram[1][1]))
    if a <= 0 or a * c - b * b <= 0:
        raise DegenerateLatticeError("planar Gram is not positive definite")
    while True:
        if a > c:
            a, c = c, a
        q = _round(b / a)
        if q == 0:
            break
        c = c - 2 * q * b + q * q * a
        b = b - q * a
    return min(
        s * s * a + 2 * s * t * b + t * t * c
        for s in (-1, 0, 1)
        for t in (-1, 0, 1)
        if s or t
    )


def _exact_vectors(gram: GramMatrix) -> MinimalVectorSet:
    transform, reduced = lll_reduce(gram)
    radius = min(reduced[i][i] for i in range(len(reduced)))
    candidates = enumerate_short(reduced, radius)
    minimum = candidates[0][0]
    vectors = _collect(transform, candidates)

    if gram.basis_size == 2 and planar_minimum(gram.entries) != minimum:
        raise ConstructionError("planar minimum disagrees with enumeration")
    value = minimum.numerator if minimum.denominator == 1 else minimum
    return MinimalVectorSet(value, vectors, True, transform, reduced, scale=gram.scale)


def _numeric_vectors(gram: GramMatrix) -> MinimalVectorSet:
    error = mpf_to_fraction(gram.error_bound)
    transform, reduced = lll_reduce(gram)
    size = len(reduced)
    radius = min(reduced[i][i] for i in range(size))
    slack = 2 * size * error * (1 + radius)
    candidates = enumerate_short(reduced, radius + slack, prune=False)

    scored = []
    for norm, x in candidates:
        v = _apply(transform, x)
        weight = sum(abs(c) for c in v) ** 2
        scored.append((norm, 2 * error * weight, v))
    minimum = min(norm for norm, _, _ in scored)
    ties = [v for norm, tol, v in scored if norm - minimum <= tol]
    for norm, tol, v in scored:
        gap = norm - minimum
        if tol < gap <= 16 * tol:
            raise PrecisionError("numeric Gram cannot separate the minimal norm from the next one")

    vectors = sorted({_normalize_sign(v) for v in ties}, reverse=True)
    tolerance = max(tol for norm, tol, _ in scored if norm - minimum <= tol)
    with mpmath.workprec(128):
        value = mpmath.mpf(minimum.numerator) / minimum.denominator
    return MinimalVectorSet(value, vectors, False, transform, reduced, tolerance, gram.scale)


def shortest_vectors(gram: GramMatrix) -> MinimalVectorSet:
    """
    Complete set of minimal vectors, one per +/- pair.

    Exact Grams are enumerated in rational arithmetic; numeric Grams are
    rationalized and every norm is compared with its error allowance.

    Raises:
        ResourceError: If the rank exceeds SVP_MAX_RANK
        PrecisionError: If numeric norms are too close to separate
    """
    if gram.basis_size > settings.SVP_MAX_RANK:
        raise ResourceError(f"rank {gram.basis_size} exceeds {settings.SVP_MAX_RANK}")
    if gram.is_exact:
        return _exact_vectors(gram)
    return _numeric_vectors(gram)
