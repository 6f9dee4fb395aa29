"""Well-roundedness certificates and closed-form lattice criteria."""
from fractions import Fraction
from itertools import combinations, permutations
from typing import List, Optional, Sequence, Tuple

import mpmath
import sympy

from core.config import settings
from core.exceptions import (
    ConstructionError,
    DomainError,
    ReducibleError,
    UnsupportedInputError,
)
from core.logging_config import logger
from schemas.models import (
    CubicCriterion,
    DivisibilityResult,
    Flag,
    GaloisClass,
    GaloisKind,
    LatticeCertificate,
    PlanarCriterion,
    flag_value,
)
from services.galois import group_generators
from services.lattice import GramMatrix
from services.polynomial import IntPolynomial, invariants, is_square
from services.svp import MinimalVectorSet, as_fractions, gram_schmidt


BY_ENUMERATION = "enumeration"
BY_PLANAR = "planar-criterion"
BY_CUBIC = "cubic-criterion"
BY_COEFFICIENT_SUM = "coefficient-sum-criterion"
BY_DIVISIBILITY = "divisibility-law"
BY_FAMILY = "family-construction"

MAX_BASIS_COMBINATIONS = 20000
MAX_CANDIDATE_BASES = 16
NEAR_ORTHOGONAL_RATIO = Fraction(3, 4)


def _basis_gram(gram: Sequence[Sequence[Fraction]], basis: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    size = len(basis)
    return [
        [
            sum(basis[i][r] * gram[r][c] * basis[j][c] for r in range(size) for c in range(size))
            for j in range(size)
        ]
        for i in range(size)
    ]


def minimal_bases(vectors: Sequence[Tuple[int, ...]], rank: int, limit: int = MAX_CANDIDATE_BASES):
    """
    Sets of `rank` minimal vectors with determinant +/-1.

    Returns:
        (bases found, whether the search was exhaustive)
    """
    found = []
    for count, chosen in enumerate(combinations(vectors, rank)):
        if count >= MAX_BASIS_COMBINATIONS:
            return found, False
        if abs(sympy.Matrix(chosen).det(method="bareiss")) == 1:
            found.append([tuple(v) for v in chosen])
            if len(found) >= limit:
                return found, True
    return found, True


def _ordering_ratios(basis_gram: List[List[Fraction]], order: Sequence[int]) -> List[Fraction]:
    permuted = [[basis_gram[i][j] for j in order] for i in order]
    _, squares = gram_schmidt(permuted)
    return [squares[i] / permuted[i][i] for i in range(1, len(order))]


def nearly_orthogonal(
    basis_gram: List[List[Fraction]],
    margin: Fraction = Fraction(0),
) -> Optional[bool]:
    """
    Whether every ordering of a basis is weakly nearly orthogonal.

    The angle between b_i and the span of its predecessors is at least
    pi/3 iff |b_i*|^2 / |b_i|^2 >= 3/4. Ratios within `margin` of 3/4
    give None.
    """
    size = len(basis_gram)
    if size > settings.ORDERING_CHECK_MAX_RANK:
        return None
    undecided = False
    for order in permutations(range(size)):
        for ratio in _ordering_ratios(basis_gram, order):
            if abs(ratio - NEAR_ORTHOGONAL_RATIO) <= margin and margin:
                undecided = True
            elif ratio < NEAR_ORTHOGONAL_RATIO:
                return False
    return None if undecided else True


def certify(gram: GramMatrix, mv: MinimalVectorSet) -> LatticeCertificate:
    """
    Certificate flags for a lattice from its complete minimal-vector set.

    Args:
        gram: Gram matrix of the lattice basis
        mv: Minimal vectors from shortest_vectors

    Returns:
        LatticeCertificate with every flag tagged "enumeration"
    """
    rank = gram.basis_size
    notes: List[str] = []
    span = sympy.Matrix(mv.vectors).rank() if mv.vectors else 0
    is_wr = span == rank
    is_gwr = is_wr and mv.kissing == 2 * rank

    bases, exhaustive = minimal_bases(mv.vectors, rank) if is_wr else ([], True)
    if bases:
        has_basis: Optional[bool] = True
    elif exhaustive:
        has_basis = False
    else:
        has_basis = None
        notes.append("minimal-basis search truncated")

    exact_gram = as_fractions(gram)
    margin = Fraction(0)
    if not gram.is_exact:
        smallest = min(exact_gram[i][i] for i in range(rank))
        margin = 8 * rank * mv.tolerance / smallest if mv.tolerance else Fraction(1, 10 ** 9)

    orthogonal: Optional[bool] = False
    candidates = bases + [mv.reduced_basis()]
    for basis in candidates:
        verdict = nearly_orthogonal(_basis_gram(exact_gram, basis), margin)
        if verdict:
            orthogonal = True
            break
        if verdict is None:
            orthogonal = None
    if orthogonal is None:
        notes.append("near-orthogonality undetermined")

    determinant = None
    if gram.is_exact:
        determinant = int(sympy.Matrix(gram.entries).det(method="bareiss"))
    else:
        determinant = float(sympy.Matrix(exact_gram).det(method="bareiss"))

    return LatticeCertificate(
        rank=rank,
        min_norm_sq=mv.to_schema().min_norm_sq,
        kissing=mv.kissing,
        is_wr=Flag(value=is_wr, by=BY_ENUMERATION),
        is_gwr=Flag(value=is_gwr, by=BY_ENUMERATION),
        is_nearly_orthogonal=Flag(value=flag_value(orthogonal), by=BY_ENUMERATION),
        has_minimal_basis=Flag(value=flag_value(has_basis), by=BY_ENUMERATION),
        minimal_basis=[list(v) for v in bases[0]] if bases else None,
        determinant=determinant,
        notes=notes,
    )


# Closed-form criteria

def planar_closed_form(a2: int, a1: int, a0: int) -> bool:
    """a_1^2 >= 2·max(3·a_0·a_2, -a_0·a_2); decisive for real quadratic fields."""
    return a1 * a1 >= 2 * max(3 * a0 * a2, -a0 * a2)


def planar_wr(a2: int, a1: int, a0: int) -> PlanarCriterion:
    """
    Well-roundedness of a quadratic lattice from its coefficients.

    The roots have equal norm and cos(angle) = (a_1^2 - |D|)/(a_1^2 + |D|);
    the lattice is WR iff |cos| <= 1/2.

    Raises:
        DomainError: If a_1 = 0
        ReducibleError: If the discriminant is a square
    """
    if a1 == 0:
        raise DomainError("planar criterion needs a_1 != 0")
    disc = a1 * a1 - 4 * a2 * a0
    if is_square(disc):
        raise ReducibleError(f"reducible (discriminant {disc} is a square)")

    size = abs(disc)
    cos = Fraction(a1 * a1 - size, a1 * a1 + size)
    is_wr = abs(cos) <= Fraction(1, 2)
    if abs(cos) < Fraction(1, 2):
        minimal, group = "roots", "Z/2 x Z/2"
    elif abs(cos) == Fraction(1, 2):
        minimal, group = "hexagonal", "order 12"
    elif cos > 0:
        minimal, group = "beta = alpha_1 - alpha_2", None
    else:
        minimal, group = "gamma = alpha_1 + alpha_2", None
    return PlanarCriterion(
        is_wr=is_wr,
        discriminant=disc,
        cos_angle=str(cos),
        minimal_set=minimal,
        automorphism_group=group,
    )


def cubic_norm_sq(c: Sequence[int], A: int, B: int) -> int:
    """Norm of c_1·alpha_1 + c_2·alpha_2 + c_3·alpha_3 in a cyclic cubic lattice."""
    c1, c2, c3 = c
    return (c1 * c1 + c2 * c2 + c3 * c3) * A + 2 * (c1 * c2 + c2 * c3 + c1 * c3) * B


def cubic_wr(f: IntPolynomial) -> CubicCriterion:
    """
    Sufficient WR test for cyclic cubics from A and B.

    Fires when A < 3·a_2^2 (so |L_f| < sqrt(3)|a_2|) and 2B < A; the roots
    are then minimal when also 3|B| < A.
    """
    if f.degree != 3:
        raise DomainError("cubic criterion needs degree 3")
    a2 = f.coeff(2)
    if a2 == 0:
        return CubicCriterion(
            wr_by_criterion="undetermined",
            roots_are_minimal="undetermined",
            note="inconclusive: a_2 = 0",
        )
    inv = invariants(f)
    if inv.A >= 3 * a2 * a2:
        return CubicCriterion(
            wr_by_criterion="undetermined",
            roots_are_minimal="undetermined",
            note="inconclusive: A >= 3·a_2^2",
        )
    if 2 * inv.B >= inv.A:
        return CubicCriterion(
            wr_by_criterion="undetermined",
            roots_are_minimal="undetermined",
            note="inconclusive: 2B >= A",
        )
    minimal = True if 3 * abs(inv.B) < inv.A else "undetermined"
    return CubicCriterion(wr_by_criterion=True, roots_are_minimal=minimal)


def divisibility_check(min_norm_sq, kissing: int, f: IntPolynomial, galois: GaloisClass) -> DivisibilityResult:
    """
    Kissing-number divisibility: if |L_f|^2 < d·a_{n-1}^2 then n divides |S(L_f)|.
    """
    n = f.degree
    if not sympy.isprime(n):
        raise UnsupportedInputError("divisibility law needs prime degree")
    d = galois.splitting_degree
    if d is None:
        raise UnsupportedInputError("divisibility law needs a known splitting degree")
    a = f.coeff(n - 1)
    if min_norm_sq < d * a * a:
        holds = kissing % n == 0
        return DivisibilityResult(
            holds=holds,
            vacuous=False,
            note=f"kissing {kissing} {'is' if holds else 'is not'} divisible by {n}",
        )
    return DivisibilityResult(holds=True, vacuous=True, note="hypothesis not met")


def coefficient_sum_criterion(mv: MinimalVectorSet, n: int, galois: GaloisClass) -> Optional[bool]:
    """
    WR witness for cyclic lattices of prime rank n: a minimal vector with
    nonzero coefficient sum that is not a multiple of (1, ..., 1).

    Returns:
        True when such a vector exists, None otherwise
    """
    if galois.kind != GaloisKind.CYCLIC or galois.splitting_degree != n or not sympy.isprime(n):
        return None
    if mv.rank != n:
        return None
    for v in mv.vectors:
        if sum(v) != 0 and len(set(v)) > 1:
            return True
    return None


def _induced_action(perm: Sequence[int], size: int) -> List[List[int]]:
    """Matrix of alpha_k -> alpha_perm[k] on the first `size` roots."""
    n = len(perm)
    columns = []
    for k in range(size):
        image = perm[k]
        if image < size:
            columns.append([1 if r == image else 0 for r in range(size)])
        else:
            # alpha_n = -(alpha_1 + ... + alpha_{n-1}) when a_{n-1} = 0
            columns.append([-1] * size)
    return [[columns[c][r] for c in range(size)] for r in range(size)]


def verify_galois_isometry(gram: GramMatrix, galois: GaloisClass) -> bool:
    """
    Check that the Galois generators act as isometries: M^T G M = G.

    Raises:
        UnsupportedInputError: For numeric Grams or unknown classes
        ConstructionError: If some generator is not an isometry
    """
    if not gram.is_exact:
        raise UnsupportedInputError("isometry check needs an exact Gram")
    size = gram.basis_size
    if size < gram.n - 1:
        raise UnsupportedInputError("isometry check needs rank n or n - 1")
    g = sympy.Matrix(gram.entries)
    for perm in group_generators(galois, gram.n):
        m = sympy.Matrix(_induced_action(perm, size))
        if m.T * g * m != g:
            logger.error("Galois generator is not an isometry", permutation=list(perm))
            raise ConstructionError(f"permutation {list(perm)} does not preserve the Gram matrix")
    return True


def coherence_bound(n: int, d: Optional[int] = None) -> float:
    """(sqrt((n-2)^2 + 16(n-1)) - (n-2)) / (8(n-1)), the family coherence ceiling."""
    if n < 3:
        raise DomainError("coherence bound needs n >= 3")
    if d is not None and d < n:
        raise DomainError("coherence bound needs n <= d")
    with mpmath.workdps(30):
        root = mpmath.sqrt((n - 2) ** 2 + 16 * (n - 1))
        return float((root - (n - 2)) / (8 * (n - 1)))


def t_threshold(n: int, d: int) -> float:
    """8d(n-1) / (sqrt((n-2)^2 + 16(n-1)) - (n-2))."""
    if n < 3:
        raise DomainError("threshold needs n >= 3")
    if d < n:
        raise DomainError("threshold needs n <= d")
    with mpmath.workdps(30):
        root = mpmath.sqrt((n - 2) ** 2 + 16 * (n - 1))
        return float(8 * d * (n - 1) / (root - (n - 2)))


def max_coherence(entries: Sequence[Sequence[int]]) -> float:
    """Largest |cos| between two basis vectors of a Gram matrix."""
    size = len(entries)
    if size < 2:
        return 0.0
    with mpmath.workdps(30):
        return float(max(
            abs(mpmath.mpf(entries[i][j])) / mpmath.sqrt(mpmath.mpf(entries[i][i]) * entries[j][j])
            for i in range(size)
            for j in range(i + 1, size)
        ))
