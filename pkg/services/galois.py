"""Galois group classification from cycle types modulo primes."""
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Iterable, List, Optional, Sequence, Tuple

import mpmath
import sympy
from sympy.combinatorics import Permutation

from core.config import settings
from core.exceptions import (
    NotCyclicError,
    PrecisionError,
    ReducibleError,
    UnsupportedInputError,
)
from core.logging_config import logger
from schemas.models import CycleTypeSample, GaloisClass, GaloisKind
from services.polynomial import (
    X,
    IntPolynomial,
    RootSet,
    degree_pattern,
    discriminant,
    find_roots,
    is_irreducible,
    is_square,
    mpf_to_fraction,
    refine_roots,
)


Perm = Tuple[int, ...]


def sample_primes(f: IntPolynomial, count: Optional[int] = None) -> List[int]:
    """First `count` primes coprime to disc(f)·a_n."""
    wanted = count or settings.GALOIS_SAMPLE_PRIMES
    bad = discriminant(f) * f.leading
    primes = []
    p = 1
    while len(primes) < wanted:
        p = int(sympy.nextprime(p))
        if bad % p:
            primes.append(p)
    return primes


def cycle_type_sample(f: IntPolynomial, primes: Iterable[int]) -> List[CycleTypeSample]:
    """
    Degree patterns of f modulo each admissible prime.

    Args:
        f: Squarefree polynomial
        primes: Candidate primes

    Returns:
        One sample per prime not dividing disc(f)·a_n
    """
    bad = discriminant(f) * f.leading
    samples = []
    for p in primes:
        if bad % p == 0:
            logger.debug("Skipping prime dividing the discriminant", prime=p, polynomial=str(f))
            continue
        pattern = degree_pattern(f, p)
        if pattern is None:
            logger.debug("Skipping prime with non-squarefree reduction", prime=p)
            continue
        samples.append(CycleTypeSample(prime=p, pattern=list(pattern)))
    return samples


def splitting_degree(kind: GaloisKind, n: int) -> Optional[int]:
    if kind == GaloisKind.CYCLIC:
        return n
    if kind == GaloisKind.SYMMETRIC:
        return factorial(n)
    if kind == GaloisKind.ALTERNATING:
        return factorial(n) // 2
    return None


def _make(kind: GaloisKind, n: int, cycle: Optional[Sequence[int]] = None, notes=None) -> GaloisClass:
    return GaloisClass(
        kind=kind,
        cycle=list(cycle) if cycle is not None else None,
        splitting_degree=splitting_degree(kind, n),
        notes=list(notes or []),
    )


def _powers_to_transposition(pattern: Sequence[int]) -> bool:
    return pattern.count(2) == 1 and all(part % 2 for part in pattern if part != 2)


def _powers_to_prime_cycle(pattern: Sequence[int], n: int) -> bool:
    for q in set(pattern):
        if q < 3 or q > n - 3 or not sympy.isprime(q):
            continue
        if pattern.count(q) == 1 and all(part % q for part in pattern if part != q):
            return True
    return False


def _outside_affine_quintic(pattern: Sequence[int]) -> bool:
    moved = [part for part in pattern if part > 1]
    if not moved:
        return False
    return pattern.count(1) >= 2 or len(set(moved)) > 1


def classify_galois(
    f: IntPolynomial,
    samples: Sequence[CycleTypeSample],
    roots: Optional[RootSet] = None,
) -> GaloisClass:
    """
    Classify Gal(f) as cyclic, symmetric, alternating or unknown.

    Args:
        f: Irreducible polynomial
        samples: Cycle-type samples (Dedekind patterns)
        roots: Certified roots, needed to recover a cyclic generator for n >= 5

    Returns:
        GaloisClass

    Raises:
        ReducibleError: If f is reducible
    """
    verdict = is_irreducible(f)
    if verdict.value is False:
        raise ReducibleError(verdict.reason)

    n = f.degree
    disc = discriminant(f)
    square = is_square(disc)

    if n == 2:
        return _make(GaloisKind.CYCLIC, n, [1, 0])
    if n == 3:
        if square:
            return _make(GaloisKind.CYCLIC, n, [1, 2, 0])
        return _make(GaloisKind.SYMMETRIC, n)
    if not sympy.isprime(n):
        return _make(GaloisKind.UNKNOWN, n, notes=["composite degree"])

    patterns = [tuple(s.pattern) for s in samples]
    if any(_powers_to_transposition(p) for p in patterns):
        if square:
            logger.warning("Transposition pattern with square discriminant", polynomial=str(f))
            return _make(GaloisKind.UNKNOWN, n, notes=["transposition pattern contradicts square discriminant"])
        return _make(GaloisKind.SYMMETRIC, n, notes=["transposition pattern"])

    large = any(_powers_to_prime_cycle(p, n) for p in patterns)
    if n == 5:
        large = large or any(_outside_affine_quintic(p) for p in patterns)
    if large:
        kind = GaloisKind.ALTERNATING if square else GaloisKind.SYMMETRIC
        return _make(kind, n, notes=["prime-cycle pattern"])

    trivial = {(n,), (1,) * n}
    if square and patterns and all(p in trivial for p in patterns):
        if roots is None:
            roots = find_roots(f)
        try:
            cycle = cyclic_generator(f, roots)
        except NotCyclicError as e:
            logger.warning("Cyclic generator not found", polynomial=str(f), error=str(e))
            return _make(GaloisKind.UNKNOWN, n, notes=["no verified cyclic generator"])
        return _make(GaloisKind.CYCLIC, n, cycle, notes=["generator verified exactly"])

    logger.warning("Galois class undetermined", polynomial=str(f), samples=len(patterns))
    return _make(GaloisKind.UNKNOWN, n, notes=["cycle types do not pin the group"])


def _candidate_cycles(n: int, anchor: int) -> Iterable[Perm]:
    rest = [k for k in range(1, n) if k != anchor]
    for order in permutations(rest):
        chain = (0, anchor) + order
        image = [0] * n
        for position, index in enumerate(chain):
            image[index] = chain[(position + 1) % n]
        yield tuple(image)


def _interpolant(roots: Sequence, cycle: Perm) -> List:
    n = len(roots)
    vandermonde = mpmath.matrix(n, n)
    for i, z in enumerate(roots):
        power = mpmath.mpc(1)
        for k in range(n):
            vandermonde[i, k] = power
            power *= z
    targets = mpmath.matrix([roots[cycle[i]] for i in range(n)])
    solution = mpmath.lu_solve(vandermonde, targets)
    return [solution[k] for k in range(n)]


def _rationalize(values: Sequence, bound: int, tolerance) -> Optional[List[Fraction]]:
    result = []
    for value in values:
        if abs(value.imag) > tolerance:
            return None
        real = value.real
        approx = mpf_to_fraction(real).limit_denominator(bound)
        if abs(real - mpmath.mpf(approx.numerator) / approx.denominator) > tolerance * max(1, abs(real)):
            return None
        result.append(approx)
    return result


def _divides_composition(f: IntPolynomial, coeffs: Sequence[Fraction]) -> bool:
    g = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)],
        X,
        domain=sympy.QQ,
    )
    fq = f.to_sympy(sympy.QQ)
    return fq.compose(g).rem(fq).is_zero


def _maps_roots(f: IntPolynomial, roots: RootSet, coeffs: Sequence[Fraction], cycle: Perm) -> bool:
    bits = roots.precision * 2
    refined = refine_roots(f, roots, bits)
    with mpmath.workprec(bits):
        poly = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(coeffs)]
        for i, z in enumerate(refined.roots):
            image = mpmath.polyval(poly, z)
            if abs(image - refined.roots[cycle[i]]) > refined.radii[cycle[i]] + mpmath.mpf(2) ** (-(bits // 4)):
                return False
    return True


def cyclic_generator(f: IntPolynomial, roots: RootSet) -> List[int]:
    """
    Recover a generating n-cycle of a cyclic Galois group.

    The cycle is returned as root-index images, cycle[i] = index of
    sigma(alpha_i). Candidates send root 0 to root 1 first; the interpolant
    g with g(alpha_i) = alpha_cycle[i] must have rational coefficients and
    satisfy f | f(g) exactly.

    Raises:
        NotCyclicError: If no candidate verifies
        PrecisionError: If an exactly verified candidate mislabels roots
    """
    n = f.degree
    if n == 2:
        return [1, 0]
    if n == 3:
        return [1, 2, 0]

    bound = abs(discriminant(f))
    with mpmath.workprec(roots.precision):
        tolerance = mpmath.mpf(2) ** (-(roots.precision // 4))
        for anchor in range(1, n):
            for cycle in _candidate_cycles(n, anchor):
                coeffs = _rationalize(_interpolant(roots.roots, cycle), bound, tolerance)
                if coeffs is None or not _divides_composition(f, coeffs):
                    continue
                if not _maps_roots(f, roots, coeffs, cycle):
                    raise PrecisionError("cyclic generator mislabels roots at doubled precision")
                logger.info("Cyclic generator recovered", polynomial=str(f), cycle=list(cycle))
                return list(cycle)
    raise NotCyclicError(f"no verified {n}-cycle for {f}")


def _compose(p: Perm, q: Perm) -> Perm:
    return tuple(p[q[i]] for i in range(len(q)))


def group_elements(galois: GaloisClass, n: int) -> List[Perm]:
    """Permutations of root indices realizing the embeddings, identity first."""
    if galois.kind == GaloisKind.CYCLIC:
        cycle = tuple(galois.cycle)
        elements = [tuple(range(n))]
        for _ in range(n - 1):
            elements.append(_compose(cycle, elements[-1]))
        return elements
    if galois.kind == GaloisKind.SYMMETRIC:
        return list(permutations(range(n)))
    if galois.kind == GaloisKind.ALTERNATING:
        return [p for p in permutations(range(n)) if Permutation(list(p)).is_even]
    raise UnsupportedInputError("no embedding set for an unknown Galois class")


def group_generators(galois: GaloisClass, n: int) -> List[Perm]:
    """Generators of the group acting on root indices."""
    if galois.kind == GaloisKind.CYCLIC:
        return [tuple(galois.cycle)]
    generators = []
    if galois.kind == GaloisKind.SYMMETRIC:
        for i in range(n - 1):
            image = list(range(n))
            image[i], image[i + 1] = image[i + 1], image[i]
            generators.append(tuple(image))
        return generators
    if galois.kind == GaloisKind.ALTERNATING:
        for i in range(n - 2):
            image = list(range(n))
            image[i], image[i + 1], image[i + 2] = i + 1, i + 2, i
            generators.append(tuple(image))
        return generators
    raise UnsupportedInputError("no generators for an unknown Galois class")
