"""Lattice determinants: exact Gram elimination, closed forms and circulant products."""
from dataclasses import dataclass
from math import factorial
from typing import Optional, Sequence, Tuple

import mpmath
import sympy

from core.exceptions import InconsistencyError, UnsupportedInputError
from core.logging_config import logger
from schemas.models import DeterminantReport, GaloisClass, GaloisKind
from services.lattice import GramMatrix
from services.polynomial import IntPolynomial, RootSet, find_roots, invariants


CIRCULANT_TOLERANCE = 1e-6


@dataclass(frozen=True)
class ClosedFormDeterminant:
    """det(L) = sqrt(radicand), radicand the exact Gram determinant."""

    name: str
    radicand: int

    @property
    def value(self) -> float:
        with mpmath.workdps(30):
            return float(mpmath.sqrt(self.radicand))


def det_gram_exact(gram: GramMatrix) -> int:
    """Fraction-free (Bareiss) determinant of a tier-exact Gram matrix."""
    if not gram.is_exact:
        raise UnsupportedInputError("exact determinant needs an exact Gram")
    return int(sympy.Matrix(gram.entries).det(method="bareiss"))


def det_gram_numeric(gram: GramMatrix) -> float:
    with mpmath.workdps(40):
        return float(mpmath.det(mpmath.matrix(gram.entries)))


def _checked(name: str, radicand: int) -> ClosedFormDeterminant:
    if radicand < 0:
        logger.error("Negative determinant radicand", formula=name, radicand=radicand)
        raise InconsistencyError(f"{name} determinant radicand {radicand} is negative")
    return ClosedFormDeterminant(name, radicand)


def det_symmetric(n: int, A: int, B: int) -> ClosedFormDeterminant:
    """((n-2)!)^n (n-1)(A+2B)((n-1)A-2B)^{n-1} under the root."""
    radicand = factorial(n - 2) ** n * (n - 1) * (A + 2 * B) * ((n - 1) * A - 2 * B) ** (n - 1)
    return _checked("symmetric", radicand)


def det_alternating(n: int, A: int, B: int) -> ClosedFormDeterminant:
    """((n-2)!)^n (n-1)(A+B)((n-1)A-B)^{n-1} under the root (closed-form A_n Gram)."""
    radicand = factorial(n - 2) ** n * (n - 1) * (A + B) * ((n - 1) * A - B) ** (n - 1)
    return _checked("alternating", radicand)


def det_alternating_orbit(n: int, A: int, B: int) -> ClosedFormDeterminant:
    """Determinant for the orbit-count A_n Gram, half the S_n Gram entrywise."""
    symmetric = det_symmetric(n, A, B).radicand
    if symmetric % 2 ** n:
        raise InconsistencyError("symmetric radicand not divisible by 2^n")
    return ClosedFormDeterminant("alternating-orbit", symmetric // 2 ** n)


def det_circulant(f: IntPolynomial, cycle: Sequence[int], roots: RootSet) -> Tuple[mpmath.mpf, mpmath.mpf]:
    """
    Circulant products of g(x) = sum_k alpha_{cycle^k(0)} x^k over n-th roots of unity.

    Returns:
        (|prod_{j=0}^{n-1} g(zeta^j)|, |prod_{j=1}^{n-1} g(zeta^j)|)
    """
    n = f.degree
    orbit = [0]
    for _ in range(n - 1):
        orbit.append(cycle[orbit[-1]])
    with mpmath.workprec(roots.precision):
        coefficients = [roots.roots[k] for k in reversed(orbit)]
        zeta = mpmath.expjpi(mpmath.mpf(2) / n)
        values = [mpmath.polyval(coefficients, zeta ** j) for j in range(n)]
        partial = mpmath.fprod(values[1:])
        full = values[0] * partial
        return abs(full), abs(partial)


def determinant_report(
    gram: GramMatrix,
    f: IntPolynomial,
    galois: GaloisClass,
    roots: Optional[RootSet] = None,
) -> DeterminantReport:
    """Gram determinant with every applicable closed form and its agreement."""
    notes = []
    if gram.is_exact:
        det_gram = det_gram_exact(gram)
        with mpmath.workdps(30):
            det_lattice = float(mpmath.sqrt(det_gram))
    else:
        det_gram = det_gram_numeric(gram)
        det_lattice = float(mpmath.sqrt(max(det_gram, 0.0)))

    report = DeterminantReport(det_gram=det_gram, det_gram_exact=gram.is_exact, det_lattice=det_lattice)
    full_rank = gram.basis_size == f.degree

    if galois.kind in (GaloisKind.SYMMETRIC, GaloisKind.ALTERNATING) and f.is_monic:
        if not full_rank:
            notes.append("closed form skipped: rank-deficient lattice")
        else:
            inv = invariants(f)
            n = f.degree
            if galois.kind == GaloisKind.SYMMETRIC:
                closed = det_symmetric(n, inv.A, inv.B)
            else:
                closed = det_alternating_orbit(n, inv.A, inv.B)
                closed_an = det_alternating(n, inv.A, inv.B)
                notes.append(f"closed-form alternating radicand {closed_an.radicand}")
            report.closed_form = closed.value
            report.closed_form_name = closed.name
            report.closed_form_radicand = closed.radicand
            if gram.is_exact:
                report.closed_form_agrees = closed.radicand == det_gram
            else:
                report.closed_form_agrees = None
                notes.append("closed form is a trace sum; Hermitian Gram differs for complex roots")

    if galois.kind == GaloisKind.CYCLIC and galois.cycle is not None:
        if not full_rank:
            notes.append("circulant products skipped: rank-deficient lattice")
        else:
            roots = roots or find_roots(f)
            full, partial = det_circulant(f, galois.cycle, roots)
            report.circulant_full = float(full)
            report.circulant_partial = float(partial)
            with mpmath.workprec(roots.precision):
                squared = full * full * gram.scale ** f.degree
                target = mpmath.mpf(det_gram)
                report.circulant_agrees = bool(abs(squared - target) <= CIRCULANT_TOLERANCE * abs(target))
            if report.circulant_agrees is False:
                logger.warning("Circulant product disagrees with the Gram determinant", polynomial=str(f))

    report.notes = notes
    return report
