"""Reproduce the reference corpus and compare expected with computed values."""
from typing import Any, Callable, List, Optional

from core.exceptions import LatticeToolkitError
from core.logging_config import logger
from schemas.models import AnalysisReport, CorpusCheck, CorpusReport
from services.analyzer import LatticeAnalyzer
from services.certify import coherence_bound
from services.pisotgen import is_admissible, main_bound
from services.polynomial import IntPolynomial, find_roots, is_square
from sources.reference_corpus import CONSTANTS, ROOT_TOLERANCE, ReferenceCorpus, ReferenceRow


def _computed(report: AnalysisReport, key: str) -> Any:
    cert = report.certificate
    readers = {
        "discriminant": lambda: report.discriminant,
        "min_norm_sq": lambda: cert.min_norm_sq,
        "vectors": lambda: sorted(report.minimal_vectors.vectors),
        "kissing": lambda: cert.kissing,
        "is_wr": lambda: cert.is_wr.value,
        "is_gwr": lambda: cert.is_gwr.value,
        "pisot": lambda: report.pisot.value if report.pisot else None,
        "galois": lambda: report.galois.kind.value,
        "square_discriminant": lambda: is_square(report.discriminant),
        "A": lambda: report.invariants.A,
        "B": lambda: report.invariants.B,
        "cubic_wr": lambda: report.cubic.wr_by_criterion if report.cubic else None,
        "roots_minimal": lambda: report.cubic.roots_are_minimal if report.cubic else None,
        "det_gram": lambda: report.determinant.det_gram,
        "det_lattice": lambda: report.determinant.det_lattice,
    }
    return readers[key]()


def _matches(key: str, expected: Any, computed: Any) -> bool:
    if key == "vectors":
        return sorted(expected) == computed
    if key == "det_lattice":
        return abs(computed - expected) <= 1e-9 * max(1, abs(expected))
    return computed == expected


class CorpusVerifier:
    """Runs every reference row and the family constants."""

    def __init__(self, precision: Optional[int] = None):
        self.corpus = ReferenceCorpus()
        self.analyzer = LatticeAnalyzer(precision)
        self.precision = precision
        self.checks: List[CorpusCheck] = []

    def _check(self, name: str, expected: Any, computed: Any, passed: bool, annotation: Optional[str] = None):
        self.checks.append(CorpusCheck(
            name=name,
            expected=str(expected),
            computed=str(computed),
            passed=passed,
            annotation=annotation,
        ))
        if not passed:
            logger.warning("Corpus mismatch", check=name, expected=str(expected), computed=str(computed))

    def _verify_row(self, row: ReferenceRow) -> None:
        f = row.polynomial
        try:
            report = self.analyzer.analyze(f)
        except LatticeToolkitError as e:
            self._check(f"{row.name}: analysis", "report", f"{e.code}: {e}", False, row.annotation)
            return
        for key, expected in row.expected.items():
            if key == "roots":
                self._verify_roots(row, f, expected)
                continue
            computed = _computed(report, key)
            self._check(f"{row.name}: {key}", expected, computed, _matches(key, expected, computed), row.annotation)

    def _verify_roots(self, row: ReferenceRow, f: IntPolynomial, expected: List[float]) -> None:
        roots = [complex(z).real for z in find_roots(f, self.precision).roots]
        remaining = list(roots)
        passed = True
        for value in expected:
            nearest = min(remaining, key=lambda r: abs(r - value))
            passed = passed and abs(nearest - value) <= ROOT_TOLERANCE
            remaining.remove(nearest)
        shown = [round(r, 6) for r in roots]
        self._check(f"{row.name}: roots", expected, shown, passed, row.annotation)

    def _verify_constant(self, name: str, expected: Any, compute: Callable[[], Any], passes: Callable[[Any], bool]):
        computed = compute()
        self._check(name, expected, computed, passes(computed))

    def run(self) -> CorpusReport:
        """
        Verify every row and constant.

        Returns:
            CorpusReport with pass/fail counts
        """
        self.checks = []
        self.corpus.start_run()
        for row in self.corpus.rows:
            self._verify_row(row)

        self._verify_constant(
            "coherence bound n=3",
            CONSTANTS["coherence_bound_3"],
            lambda: f"{coherence_bound(3):.4f}",
            lambda value: value == CONSTANTS["coherence_bound_3"],
        )
        low, high = CONSTANTS["main_bound_3"]
        self._verify_constant(
            "family bound n=3",
            f"({low}, {high})",
            lambda: main_bound(3),
            lambda value: low < value < high,
        )
        example = IntPolynomial(CONSTANTS["admissible_example"])
        self._verify_constant(
            f"{example} admissible",
            True,
            lambda: is_admissible(example),
            lambda value: value is True,
        )

        passed = sum(1 for c in self.checks if c.passed)
        failed = len(self.checks) - passed
        self.corpus.complete_run(records_read=self.corpus.size(), records_emitted=len(self.checks))
        logger.info("Corpus verified", passed=passed, failed=failed)
        return CorpusReport(checks=self.checks, passed=passed, failed=failed)
