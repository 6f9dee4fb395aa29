"""Gram matrices of conjugate lattices under the trace form."""
from dataclasses import dataclass, field
from math import factorial
from typing import List, Optional, Sequence, Tuple

import mpmath
import sympy

from core.config import settings
from core.exceptions import (
    ExactnessUnsupportedError,
    MisclassificationError,
    PrecisionError,
    ResourceError,
    UnsupportedInputError,
)
from core.logging_config import logger
from schemas.models import GaloisClass, GaloisKind, GramMatrixOut, GramTier
from services.galois import group_elements
from services.polynomial import IntPolynomial, RootSet, find_roots, invariants


@dataclass
class GramMatrix:
    """
    Gram matrix of L_f.

    `full` is the n x n matrix of <alpha_i, alpha_j>; `entries` is the block
    for the lattice basis (the leading (n-1) block when a_{n-1} = 0).
    Entries are multiplied by `scale` = a_n^2.
    """

    full: List[List]
    entries: List[List]
    tier: GramTier
    rank: int
    splitting_degree: int
    row_sum: int
    scale: int = 1
    error_bound: Optional[mpmath.mpf] = None
    notes: List[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.full)

    @property
    def basis_size(self) -> int:
        return len(self.entries)

    @property
    def is_exact(self) -> bool:
        return self.tier == GramTier.EXACT

    def row_sums_hold(self) -> bool:
        """Every row of the full matrix sums to (d/n)·a_{n-1}^2 (scaled)."""
        if self.is_exact:
            return all(sum(row) == self.row_sum for row in self.full)
        slack = self.n * self.error_bound + mpmath.mpf(2) ** -40 * (1 + abs(self.row_sum))
        return all(abs(mpmath.fsum(row) - self.row_sum) <= slack for row in self.full)

    def to_schema(self) -> GramMatrixOut:
        if self.is_exact:
            entries = [[int(v) for v in row] for row in self.entries]
        else:
            entries = [[float(v) for v in row] for row in self.entries]
        return GramMatrixOut(
            tier=self.tier,
            n=self.n,
            entries=entries,
            row_sum=self.row_sum,
            rank=self.rank,
            basis_size=self.basis_size,
            scale=self.scale,
            error_bound=float(self.error_bound) if self.error_bound is not None else None,
        )


@dataclass
class EmbeddingMatrix:
    """Rows sigma(alpha_1), ..., sigma(alpha_n) for every embedding sigma."""

    rows: List[List[mpmath.mpc]]
    permutations: List[Tuple[int, ...]]

    @property
    def splitting_degree(self) -> int:
        return len(self.rows)


def is_positive_definite(entries: Sequence[Sequence[int]]) -> bool:
    """Sylvester's criterion on exact leading minors."""
    matrix = sympy.Matrix(entries)
    size = matrix.shape[0]
    return all(matrix[:k, :k].det(method="bareiss") > 0 for k in range(1, size + 1))


def lattice_rank(f: IntPolynomial, roots: Optional[RootSet] = None) -> int:
    """
    Rank of L_f.

    Prime degree gives n, or n - 1 when a_{n-1} = 0. Composite degrees are
    computed by integer-relation detection among the roots and are not
    certified.
    """
    n = f.degree
    if sympy.isprime(n):
        return n - 1 if f.coeff(n - 1) == 0 else n

    roots = roots or find_roots(f)
    independent: List = []
    with mpmath.workprec(roots.precision):
        mix = mpmath.e
        for z in roots.roots:
            candidate = independent + [z.real + mix * z.imag]
            if len(candidate) == 1:
                independent.append(candidate[0])
                continue
            relation = mpmath.pslq(candidate, maxcoeff=10 ** 6, maxsteps=10 ** 5)
            if relation is None or relation[-1] == 0:
                independent.append(candidate[-1])
    logger.info("Lattice rank computed, not certified", polynomial=str(f), rank=len(independent))
    return len(independent)


def _row_sum(f: IntPolynomial, d: int) -> int:
    n = f.degree
    return (d // n) * f.coeff(n - 1) ** 2


def _basis_block(full: List[List], rank: int) -> List[List]:
    n = len(full)
    if rank == n:
        return [list(row) for row in full]
    return [list(row[:rank]) for row in full[:rank]]


def _uniform_gram(n: int, diagonal: int, off: int) -> List[List[int]]:
    return [[diagonal if i == j else off for j in range(n)] for i in range(n)]


def symmetric_closed_gram(n: int, A: int, B: int) -> List[List[int]]:
    """Trace-sum Gram over S_n: diagonal (n-1)!A, off-diagonal 2(n-2)!B."""
    return _uniform_gram(n, factorial(n - 1) * A, 2 * factorial(n - 2) * B)


def alternating_closed_gram(n: int, A: int, B: int) -> List[List[int]]:
    """Closed-form A_n Gram: diagonal (n-1)!A, off-diagonal (n-2)!B."""
    return _uniform_gram(n, factorial(n - 1) * A, factorial(n - 2) * B)


def alternating_orbit_gram(n: int, A: int, B: int) -> List[List[int]]:
    """Trace-sum Gram over A_n (n >= 3): half of the S_n sum entrywise."""
    return _uniform_gram(n, factorial(n - 1) * A // 2, factorial(n - 2) * B)


def gram_quadratic(a2: int, a1: int, a0: int) -> List[List[int]]:
    """a_2^2 times the Gram of a quadratic lattice, both signs of D."""
    real_case = a1 * a1 - 4 * a2 * a0 > 0
    square_sum = a1 * a1 - 2 * a0 * a2
    mixed = 2 * a0 * a2
    if real_case:
        return [[square_sum, mixed], [mixed, square_sum]]
    return [[mixed, square_sum], [square_sum, mixed]]


def _assemble(f: IntPolynomial, full, tier: GramTier, d: int, scale: int = 1, error_bound=None, notes=None) -> GramMatrix:
    rank = lattice_rank(f)
    return GramMatrix(
        full=full,
        entries=_basis_block(full, rank),
        tier=tier,
        rank=rank,
        splitting_degree=d,
        row_sum=_row_sum(f, d),
        scale=scale,
        error_bound=error_bound,
        notes=list(notes or []),
    )


def closed_form_gram(f: IntPolynomial, galois: GaloisClass) -> GramMatrix:
    """
    Integer trace-sum Gram for S_n or A_n classes, without conjugation.

    Coincides with the Hermitian Gram only for totally real f.
    """
    if galois.kind not in (GaloisKind.SYMMETRIC, GaloisKind.ALTERNATING):
        raise UnsupportedInputError("closed-form Gram needs a symmetric or alternating class")
    inv = invariants(f)
    n = f.degree
    if galois.kind == GaloisKind.SYMMETRIC:
        full = symmetric_closed_gram(n, inv.A, inv.B)
    else:
        full = alternating_orbit_gram(n, inv.A, inv.B)
    return _assemble(f, full, GramTier.EXACT, galois.splitting_degree, notes=["trace sum without conjugation"])


def gram_exact(f: IntPolynomial, galois: GaloisClass, roots: Optional[RootSet] = None) -> GramMatrix:
    """
    Exact integer Gram matrix where a closed form applies.

    Args:
        f: Irreducible polynomial (monic unless quadratic)
        galois: Its Galois class
        roots: Certified roots; required for cyclic n >= 5 and for the
            totally-real check of symmetric and alternating classes

    Returns:
        Tier-exact GramMatrix

    Raises:
        ExactnessUnsupportedError: Symmetric/alternating class with complex roots
        UnsupportedInputError: Unknown class or non-monic input of degree > 2
    """
    n = f.degree
    if n == 2:
        a2, a1, a0 = f.coeff(2), f.coeff(1), f.coeff(0)
        return _assemble(f, gram_quadratic(a2, a1, a0), GramTier.EXACT, 2, scale=a2 * a2)
    if not f.is_monic:
        raise UnsupportedInputError("exact Gram needs a monic polynomial beyond degree 2")
    if galois.kind == GaloisKind.UNKNOWN:
        raise UnsupportedInputError("no exact Gram for an unknown Galois class")

    if galois.kind == GaloisKind.CYCLIC:
        if n == 3:
            inv = invariants(f)
            return _assemble(f, _uniform_gram(3, inv.A, inv.B), GramTier.EXACT, 3)
        roots = roots or find_roots(f)
        return gram_cyclic_circulant(f, galois.cycle, roots)

    roots = roots or find_roots(f)
    if not roots.totally_real:
        raise ExactnessUnsupportedError("closed-form Gram needs totally real roots")
    return closed_form_gram(f, galois)


def gram_cyclic_circulant(f: IntPolynomial, cycle: Sequence[int], roots: RootSet) -> GramMatrix:
    """
    Circulant Gram from c_t = sum_k alpha_k alpha_{cycle^t(k)}.

    Raises:
        PrecisionError: If a c_t is not within tolerance of an integer or
            the rounded values miss the row-sum identity
        MisclassificationError: If the rounded matrix is not positive definite
    """
    n = f.degree
    powers = [tuple(range(n))]
    for _ in range(n - 1):
        powers.append(tuple(cycle[k] for k in powers[-1]))

    values = []
    with mpmath.workprec(roots.precision):
        alpha = [z.real for z in roots.roots]
        for t in range(n):
            c_t = mpmath.fsum(alpha[k] * alpha[powers[t][k]] for k in range(n))
            nearest = int(mpmath.nint(c_t))
            if abs(c_t - nearest) >= settings.ROUNDING_TOLERANCE:
                raise PrecisionError(f"circulant entry c_{t} is not within tolerance of an integer")
            values.append(nearest)

    a = f.coeff(n - 1)
    if sum(values) != a * a:
        raise PrecisionError("rounded circulant entries miss the row-sum identity")
    if any(values[t] != values[n - t] for t in range(1, n)):
        raise PrecisionError("rounded circulant entries are not symmetric")

    full = [[0] * n for _ in range(n)]
    for t in range(n):
        for i in range(n):
            full[i][powers[t][i]] = values[t]

    gram = _assemble(f, full, GramTier.EXACT, n, notes=[f"circulant in cycle order {list(cycle)}"])
    if not is_positive_definite(gram.entries):
        logger.error("Circulant Gram is not positive definite", polynomial=str(f), cycle=list(cycle))
        raise MisclassificationError("circulant Gram is not positive definite")
    return gram


def embedding_matrix(galois: GaloisClass, roots: RootSet) -> EmbeddingMatrix:
    """Embedding rows sigma(alpha_i) = alpha_{sigma(i)}."""
    n = roots.degree
    d = galois.splitting_degree
    if d is None:
        raise UnsupportedInputError("no embeddings for an unknown Galois class")
    if d > settings.MAX_SPLITTING_DEGREE:
        raise ResourceError(f"splitting degree {d} exceeds {settings.MAX_SPLITTING_DEGREE}")
    elements = group_elements(galois, n)
    rows = [[roots.roots[sigma[i]] for i in range(n)] for sigma in elements]
    return EmbeddingMatrix(rows=rows, permutations=elements)


def gram_numeric(f: IntPolynomial, galois: GaloisClass, roots: RootSet) -> Tuple[EmbeddingMatrix, GramMatrix]:
    """
    Hermitian Gram Re(E^H E) summed over all embeddings.

    Returns:
        (embedding matrix, tier-numeric GramMatrix with entrywise error bound)
    """
    n = f.degree
    if n > 2 and not f.is_monic:
        raise UnsupportedInputError("numeric Gram needs a monic polynomial beyond degree 2")
    embeddings = embedding_matrix(galois, roots)
    d = embeddings.splitting_degree
    scale = f.leading ** 2

    with mpmath.workprec(roots.precision):
        full = [[mpmath.mpf(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                total = mpmath.fsum(
                    (row[i] * mpmath.conj(row[j])).real for row in embeddings.rows
                )
                full[i][j] = full[j][i] = total * scale
        largest = max(abs(z) for z in roots.roots)
        radius = roots.max_radius()
        rounding = mpmath.mpf(2) ** (-roots.precision) * (largest + 1) ** 2
        bound = d * scale * (2 * largest * radius + radius ** 2 + rounding)

    gram = _assemble(f, full, GramTier.NUMERIC, d, scale=scale, error_bound=bound)
    if not gram.row_sums_hold():
        logger.error("Numeric Gram misses the row-sum identity", polynomial=str(f), kind=galois.kind.value)
        raise MisclassificationError("numeric Gram misses the row-sum identity")
    return embeddings, gram


def max_deviation(exact: GramMatrix, numeric: GramMatrix):
    """Largest entrywise gap between two full Gram matrices."""
    return max(
        abs(mpmath.mpf(exact.full[i][j]) - numeric.full[i][j])
        for i in range(exact.n)
        for j in range(exact.n)
    )


def cross_check(exact: GramMatrix, numeric: GramMatrix) -> None:
    """
    Compare an exact Gram with the numeric embedding oracle.

    Raises:
        MisclassificationError: If they disagree beyond the error bound
    """
    gap = max_deviation(exact, numeric)
    if gap > numeric.error_bound + mpmath.mpf(10) ** -20:
        logger.error("Exact Gram disagrees with the embedding oracle", gap=float(gap))
        raise MisclassificationError(f"exact and numeric Gram differ by {mpmath.nstr(gap, 5)}")
