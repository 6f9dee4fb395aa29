"""Large-Pisot trinomial family x^n + a_{n-1}x^{n-1} + a_0 and its certification."""
from math import factorial, floor
from typing import Iterable, List, Optional

import sympy

from core.exceptions import (
    DomainError,
    ExactnessUnsupportedError,
    LatticeToolkitError,
    PrecisionError,
)
from core.logging_config import logger
from schemas.models import FamilyMember, FamilySpec, Flag, GaloisKind, GramTier
from services.certify import (
    BY_ENUMERATION,
    BY_FAMILY,
    certify,
    coherence_bound,
    max_coherence,
    t_threshold,
)
from services.galois import classify_galois, cycle_type_sample, sample_primes
from services.lattice import gram_exact
from services.polynomial import IntPolynomial, find_roots, perron_criterion
from services.precision import escalate_precision
from services.svp import shortest_vectors


COHERENCE_SLACK = 1e-12


def _check_degree(n: int) -> None:
    if n < 3 or not sympy.isprime(n):
        raise DomainError(f"family degree must be a prime >= 3, got {n}")


def bound_radicand(n: int) -> int:
    """(n-2)^2 + 16(n-1), the radicand inside the family bound."""
    return (n - 2) ** 2 + 16 * (n - 1)


def main_bound(n: int) -> float:
    """Lower bound on |a_0|: 8(n-1)n! / (sqrt((n-2)^2 + 16(n-1)) - (n-2))."""
    _check_degree(n)
    return t_threshold(n, factorial(n))


def is_admissible(f: IntPolynomial) -> bool:
    """Whether f is a trinomial x^n + a_{n-1}x^{n-1} + a_0 meeting both bounds."""
    n = f.degree
    if n < 3 or not sympy.isprime(n) or not f.is_monic:
        return False
    if any(f.coeff(k) for k in range(1, n - 1)):
        return False
    a0, top = abs(f.coeff(0)), abs(f.coeff(n - 1))
    return a0 > main_bound(n) and top >= a0 + 2


def generate_family(spec: FamilySpec) -> List[IntPolynomial]:
    """
    The `count` smallest family members for the requested signs.

    Members are ordered by |a_0|, then |a_{n-1}| from |a_0| + 2 up to
    |a_0| + 2 + spread.
    """
    _check_degree(spec.n)
    members: List[IntPolynomial] = []
    a0 = floor(main_bound(spec.n)) + 1
    while len(members) < spec.count:
        for top in range(a0 + 2, a0 + 3 + spec.spread):
            coeffs = [0] * (spec.n + 1)
            coeffs[0] = spec.sign_const * a0
            coeffs[spec.n - 1] = spec.sign_top * top
            coeffs[spec.n] = 1
            members.append(IntPolynomial(tuple(coeffs)))
            if len(members) == spec.count:
                break
        a0 += 1
    return members


def _cubic_note(f: IntPolynomial) -> Optional[str]:
    if f.degree == 3 and f.coeff(2) * f.coeff(0) > 0:
        return "square discriminant impossible: a_2·a_0 > 0"
    return None


def certify_member(f: IntPolynomial, precision: Optional[int] = None) -> FamilyMember:
    """
    Classify and, where an exact Gram exists, certify one family member.

    The certificate must show GWR, near-orthogonality, a minimal basis,
    kissing number 2n and basis coherence within coherence_bound(n).
    Members without an exact Gram are reported as certified by construction.
    """
    n = f.degree
    notes = []
    cubic = _cubic_note(f)
    if cubic:
        notes.append(cubic)
    perron = perron_criterion(f)
    if not is_admissible(f):
        notes.append("not an admissible family member")

    def stage(bits: int):
        roots = find_roots(f, bits)
        galois = classify_galois(f, cycle_type_sample(f, sample_primes(f)), roots)
        return roots, galois

    roots, galois = escalate_precision(stage, start_bits=precision)
    member = FamilyMember(
        polynomial=str(f),
        coefficients=f.to_list(),
        perron=perron,
        galois=galois.kind,
        verified=Flag(value="undetermined", by=BY_FAMILY),
        notes=notes,
    )
    if galois.kind == GaloisKind.UNKNOWN:
        member.notes.append("Galois class undetermined; geometric verification skipped")
        member.verified = Flag(value=is_admissible(f) or "undetermined", by=BY_FAMILY)
        return member

    try:
        gram = gram_exact(f, galois, roots)
        minimal = shortest_vectors(gram)
    except (ExactnessUnsupportedError, PrecisionError) as e:
        logger.info("Family member without exact Gram", polynomial=str(f), reason=str(e))
        member.notes.append("certified by construction, geometric verification skipped")
        member.verified = Flag(value=is_admissible(f) or "undetermined", by=BY_FAMILY)
        return member

    cert = certify(gram, minimal)
    coherence = max_coherence(gram.entries)
    checks = {
        "generic well-rounded": cert.is_gwr.value is True,
        "nearly orthogonal": cert.is_nearly_orthogonal.value is True,
        "minimal basis": cert.has_minimal_basis.value is True,
        "kissing 2n": cert.kissing == 2 * n,
        "coherence": coherence <= coherence_bound(n) + COHERENCE_SLACK,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        logger.error("Family member failed certification", polynomial=str(f), failed=failed)
        member.notes.append("failed: " + ", ".join(failed))

    member.tier = GramTier.EXACT
    member.certificate = cert
    member.max_coherence = coherence
    member.verified = Flag(value=not failed, by=BY_ENUMERATION)
    return member


def certify_family(polynomials: Iterable[IntPolynomial], precision: Optional[int] = None) -> List[FamilyMember]:
    """Certify family members in order; per-member errors become notes."""
    members = []
    for f in polynomials:
        try:
            members.append(certify_member(f, precision))
        except LatticeToolkitError as e:
            logger.error("Family member certification failed", polynomial=str(f), error=str(e))
            members.append(FamilyMember(
                polynomial=str(f),
                coefficients=f.to_list(),
                perron=perron_criterion(f),
                galois=GaloisKind.UNKNOWN,
                verified=Flag(value="undetermined", by=BY_FAMILY),
                notes=[f"{e.code}: {e}"],
            ))
    logger.info("Family certified", count=len(members))
    return members
