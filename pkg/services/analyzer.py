"""Analysis pipeline that composes every lattice module for one polynomial."""
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Optional, Union

import sympy

from core.exceptions import (
    ConstructionError,
    DivisibilityViolationError,
    DomainError,
    ExactnessUnsupportedError,
    PrecisionError,
    ReducibleError,
    RepeatedRootError,
    UnsupportedInputError,
)
from core.logging_config import logger
from schemas.models import (
    AnalysisReport,
    Flag,
    GaloisClass,
    GaloisKind,
    flag_value,
)
from services.certify import (
    BY_COEFFICIENT_SUM,
    BY_CUBIC,
    BY_DIVISIBILITY,
    BY_ENUMERATION,
    BY_PLANAR,
    certify,
    coefficient_sum_criterion,
    cubic_wr,
    divisibility_check,
    planar_wr,
    verify_galois_isometry,
)
from services.detform import determinant_report
from services.galois import classify_galois, cycle_type_sample, sample_primes
from services.lattice import (
    GramMatrix,
    closed_form_gram,
    cross_check,
    gram_exact,
    gram_numeric,
)
from services.polynomial import (
    IntPolynomial,
    RootSet,
    classify_pisot,
    discriminant,
    find_roots,
    invariants,
    is_irreducible,
)
from services.precision import escalate_precision
from services.svp import MinimalVectorSet, shortest_vectors


@dataclass
class NumericStage:
    """Everything computed at one working precision."""

    roots: RootSet
    galois: GaloisClass
    gram: GramMatrix
    minimal: MinimalVectorSet
    trace_sum_gram: Optional[GramMatrix] = None


class LatticeAnalyzer:
    """Runs the full analysis of one polynomial."""

    def __init__(self, precision: Optional[int] = None, timing: bool = False):
        """
        Initialize analyzer.

        Args:
            precision: Starting precision in bits (defaults to CL_PRECISION)
            timing: Record wall-clock timings per stage
        """
        self.precision = precision
        self.timing = timing
        self._timings: Dict[str, float] = {}

    @contextmanager
    def _timed(self, stage: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            if self.timing:
                self._timings[stage] = round((time.perf_counter() - start) * 1000, 3)

    def _numeric_stage(self, f: IntPolynomial, bits: int) -> NumericStage:
        roots = find_roots(f, bits)
        samples = cycle_type_sample(f, sample_primes(f))
        galois = classify_galois(f, samples, roots)
        if galois.kind == GaloisKind.UNKNOWN:
            raise UnsupportedInputError(
                "Galois class unknown: " + "; ".join(galois.notes or ["no Gram construction"])
            )

        trace_sum = None
        try:
            gram = gram_exact(f, galois, roots)
            _, oracle = gram_numeric(f, galois, roots)
            cross_check(gram, oracle)
        except ExactnessUnsupportedError:
            logger.info("Falling back to numeric Gram", polynomial=str(f), kind=galois.kind.value)
            _, gram = gram_numeric(f, galois, roots)
            trace_sum = closed_form_gram(f, galois)

        minimal = shortest_vectors(gram)
        return NumericStage(roots, galois, gram, minimal, trace_sum)

    def analyze(self, polynomial: Union[str, IntPolynomial]) -> AnalysisReport:
        """
        Analyze one polynomial.

        Args:
            polynomial: Polynomial text or IntPolynomial

        Returns:
            AnalysisReport

        Raises:
            DomainError: Degree below 2, repeated roots or reducible input
            UnsupportedInputError: Non-monic beyond degree 2 or unknown Galois class
            PrecisionError: If certification fails at the precision ceiling
        """
        self._timings = {}
        f = IntPolynomial.parse(polynomial) if isinstance(polynomial, str) else polynomial
        n = f.degree
        logger.info("Analysis started", polynomial=str(f))
        if n < 2:
            raise DomainError("lattice analysis needs degree >= 2")

        with self._timed("exact"):
            disc = discriminant(f)
            if disc == 0:
                raise RepeatedRootError(f"{f} has a repeated root")
            irreducibility = is_irreducible(f)
            if irreducibility.value is False:
                raise ReducibleError(irreducibility.reason)
            if not f.is_monic and n != 2:
                raise UnsupportedInputError("non-monic input is only supported for quadratics")

        with self._timed("numeric"):
            stage = escalate_precision(lambda bits: self._numeric_stage(f, bits), start_bits=self.precision)

        notes = []
        pisot = None
        if f.is_monic:
            try:
                value = classify_pisot(f, stage.roots)
                pisot = Flag(value=value, by="certified roots")
                dominant = max(stage.roots.roots, key=abs)
                if value and dominant.real < 0:
                    notes.append("dominant root is negative")
            except PrecisionError:
                pisot = Flag(value="undetermined", by="certified roots")

        with self._timed("certify"):
            cert = certify(stage.gram, stage.minimal)
            planar, cubic = self._criteria(f, stage, cert, notes)

        with self._timed("determinant"):
            determinant = determinant_report(stage.gram, f, stage.galois, stage.roots)
            if determinant.closed_form_agrees is False:
                raise ConstructionError("closed-form determinant disagrees with the Gram determinant")
            if determinant.circulant_agrees is False:
                notes.append("circulant product disagrees with the Gram determinant")

        report = AnalysisReport(
            polynomial=str(f),
            coefficients=f.to_list(),
            degree=n,
            discriminant=disc,
            irreducible=flag_value(irreducibility.value),
            irreducibility_reason=irreducibility.reason,
            pisot=pisot,
            galois=stage.galois,
            invariants=invariants(f) if f.is_monic else None,
            rank=stage.gram.rank,
            rank_certified=bool(sympy.isprime(n)),
            gram=stage.gram.to_schema(),
            trace_sum_gram=stage.trace_sum_gram.to_schema() if stage.trace_sum_gram else None,
            minimal_vectors=stage.minimal.to_schema(),
            certificate=cert,
            planar=planar,
            cubic=cubic,
            determinant=determinant,
            notes=notes,
            timing_ms=dict(self._timings) if self.timing else None,
        )
        logger.info(
            "Analysis completed",
            polynomial=str(f),
            galois=stage.galois.kind.value,
            tier=stage.gram.tier.value,
            min_norm_sq=report.certificate.min_norm_sq,
            kissing=cert.kissing,
        )
        return report

    def _criteria(self, f: IntPolynomial, stage: NumericStage, cert, notes):
        """
        Closed-form criteria, each checked against the enumeration.

        A criterion that decides WR becomes the flag's provenance.
        """
        n = f.degree
        gram, galois, minimal = stage.gram, stage.galois, stage.minimal
        planar = cubic = None

        if n == 2:
            a2, a1, a0 = f.coeff(2), f.coeff(1), f.coeff(0)
            if a1 == 0:
                notes.append("planar criterion needs a_1 != 0")
            else:
                planar = planar_wr(a2, a1, a0)
                if planar.is_wr != cert.is_wr.value:
                    raise ConstructionError("planar criterion disagrees with enumeration")
                cert.criteria.append(BY_PLANAR)
                cert.is_wr = Flag(value=planar.is_wr, by=BY_PLANAR)

        if n == 3 and galois.kind == GaloisKind.CYCLIC:
            cubic = cubic_wr(f)
            if cubic.wr_by_criterion is True:
                if cert.is_wr.value is not True:
                    raise ConstructionError("cubic criterion fired on a lattice that is not WR")
                cert.criteria.append(BY_CUBIC)
                cert.is_wr = Flag(value=True, by=BY_CUBIC)
            if cubic.roots_are_minimal is True:
                units = {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
                if not units <= set(minimal.vectors):
                    raise ConstructionError("cubic criterion claims minimal roots that are not minimal")
        elif n == 3:
            notes.append("cubic criterion: hypothesis scope exceeded for S_3")

        if gram.is_exact and sympy.isprime(n):
            divisibility = divisibility_check(minimal.min_norm_sq, minimal.kissing, f, galois)
            if not divisibility.holds:
                raise DivisibilityViolationError(f"divisibility law violated: {divisibility.note}")
            if not divisibility.vacuous:
                cert.criteria.append(BY_DIVISIBILITY)

        if coefficient_sum_criterion(minimal, n, galois):
            if cert.is_wr.value is not True:
                raise ConstructionError("coefficient-sum criterion fired on a lattice that is not WR")
            cert.criteria.append(BY_COEFFICIENT_SUM)
            if cert.is_wr.by == BY_ENUMERATION:
                cert.is_wr = Flag(value=True, by=BY_COEFFICIENT_SUM)

        if gram.is_exact:
            verify_galois_isometry(gram, galois)
            cert.notes.append("Galois action verified as isometries")
        return planar, cubic
