"""Scan runner: analyze every polynomial of a source through a worker pool."""
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from core.config import settings
from core.exceptions import (
    DivisibilityViolationError,
    DomainError,
    LatticeToolkitError,
    ReducibleError,
    RepeatedRootError,
)
from core.logging_config import logger
from services.analyzer import LatticeAnalyzer
from services.polynomial import IntPolynomial
from sources.base_source import BaseSource


SCAN_COLUMNS = [
    "polynomial",
    "coefficients",
    "discriminant",
    "galois",
    "splitting_degree",
    "pisot",
    "tier",
    "rank",
    "min_norm_sq",
    "kissing",
    "is_wr",
    "is_gwr",
    "is_nearly_orthogonal",
    "has_minimal_basis",
    "closed_form_wr",
    "divisibility",
]

FILTERS = {
    "wr": lambda row: row["is_wr"] is True,
    "gwr": lambda row: row["is_gwr"] is True,
    "cyclic": lambda row: row["galois"] == "cyclic",
    "pisot": lambda row: row["pisot"] is True,
    "tier-e": lambda row: row["tier"] == "exact",
}


def scan_item(coeffs: Tuple[int, ...], precision: Optional[int] = None) -> Dict[str, Any]:
    """
    Analyze one polynomial for a scan.

    Module-level so a process pool can pickle it.

    Returns:
        Dict with "status" (ok, reducible, repeated-root, violation, error)
        and, for ok, the scan columns
    """
    f = IntPolynomial(tuple(coeffs))
    try:
        report = LatticeAnalyzer(precision).analyze(f)
    except ReducibleError:
        return {"status": "reducible", "polynomial": str(f)}
    except RepeatedRootError:
        return {"status": "repeated-root", "polynomial": str(f)}
    except DivisibilityViolationError as e:
        return {"status": "violation", "polynomial": str(f), "error": str(e)}
    except LatticeToolkitError as e:
        return {"status": "error", "polynomial": str(f), "error": f"{e.code}: {e}"}

    cert = report.certificate
    closed_form = None
    if report.planar is not None:
        closed_form = report.planar.is_wr
    elif report.cubic is not None:
        closed_form = report.cubic.wr_by_criterion

    divisibility = None
    if cert is not None and "divisibility-law" in cert.criteria:
        divisibility = "holds"
    elif report.gram is not None and report.gram.tier.value == "exact":
        divisibility = "vacuous"

    return {
        "status": "ok",
        "polynomial": report.polynomial,
        "coefficients": str(report.coefficients),
        "discriminant": report.discriminant,
        "galois": report.galois.kind.value,
        "splitting_degree": report.galois.splitting_degree,
        "pisot": report.pisot.value if report.pisot else None,
        "tier": report.gram.tier.value,
        "rank": report.rank,
        "min_norm_sq": cert.min_norm_sq,
        "kissing": cert.kissing,
        "is_wr": cert.is_wr.value,
        "is_gwr": cert.is_gwr.value,
        "is_nearly_orthogonal": cert.is_nearly_orthogonal.value,
        "has_minimal_basis": cert.has_minimal_basis.value,
        "closed_form_wr": closed_form,
        "divisibility": divisibility,
    }


class ScanRunner:
    """Orchestrates a scan over one polynomial source."""

    def __init__(
        self,
        source: BaseSource,
        filters: Sequence[str] = (),
        precision: Optional[int] = None,
        workers: Optional[int] = None,
    ):
        """
        Initialize scan runner.

        Args:
            source: Polynomial source
            filters: Names from FILTERS; a record must pass all of them
            precision: Starting precision in bits
            workers: Worker processes (defaults to SCAN_WORKERS, 0 = in-process)
        """
        unknown = [name for name in filters if name not in FILTERS]
        if unknown:
            raise DomainError(f"unknown scan filter(s): {', '.join(unknown)}")
        self.source = source
        self.filters = list(filters)
        self.precision = precision
        self.workers = settings.SCAN_WORKERS if workers is None else workers

    def _results(self, items: List[Tuple[int, ...]]) -> Iterable[Dict[str, Any]]:
        if self.workers and self.workers > 0:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                yield from pool.map(
                    scan_item,
                    items,
                    repeat(self.precision),
                    chunksize=settings.SCAN_CHUNK_SIZE,
                )
        else:
            for coeffs in items:
                yield scan_item(coeffs, self.precision)

    def run(self) -> Tuple[pd.DataFrame, Dict[str, int]]:
        """
        Run the scan.

        Returns:
            (DataFrame of emitted records in source order, summary counts)
        """
        self.source.start_run()
        summary = {
            "total": 0,
            "analyzed": 0,
            "reducible": 0,
            "repeated_root": 0,
            "errors": 0,
            "violations": 0,
            "wr": 0,
            "gwr": 0,
            "nearly_orthogonal": 0,
            "minimal_basis": 0,
            "cyclic": 0,
            "pisot": 0,
            "emitted": 0,
        }
        rows = []
        try:
            items = [f.coeffs for f in self.source.polynomials()]
            for result in self._results(items):
                summary["total"] += 1
                status = result["status"]
                if status == "reducible":
                    summary["reducible"] += 1
                    continue
                if status == "repeated-root":
                    summary["repeated_root"] += 1
                    continue
                if status == "violation":
                    summary["violations"] += 1
                    logger.error("Divisibility law violated", polynomial=result["polynomial"], error=result["error"])
                    continue
                if status == "error":
                    summary["errors"] += 1
                    logger.warning("Scan item failed", polynomial=result["polynomial"], error=result["error"])
                    continue
                summary["analyzed"] += 1
                summary["wr"] += result["is_wr"] is True
                summary["gwr"] += result["is_gwr"] is True
                summary["nearly_orthogonal"] += result["is_nearly_orthogonal"] is True
                summary["minimal_basis"] += result["has_minimal_basis"] is True
                summary["cyclic"] += result["galois"] == "cyclic"
                summary["pisot"] += result["pisot"] is True
                if all(FILTERS[name](result) for name in self.filters):
                    rows.append({column: result[column] for column in SCAN_COLUMNS})
        except Exception as e:
            self.source.fail_run(str(e))
            raise

        summary["emitted"] = len(rows)
        self.source.complete_run(records_read=summary["total"], records_emitted=len(rows))
        frame = pd.DataFrame(rows, columns=SCAN_COLUMNS)
        return frame, summary
