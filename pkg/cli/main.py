"""Command-line front end: analyze, scan, pisot and verify-paper."""
import argparse
import sys
from typing import List, Optional

from core.exceptions import LatticeToolkitError
from core.logging_config import logger
from schemas.models import FamilySpec
from services.analyzer import LatticeAnalyzer
from services.corpus_verifier import CorpusVerifier
from services.scan_runner import FILTERS, ScanRunner
from sources.box_source import BoxSource
from sources.family_source import FamilySource
from cli.formatters import format_analysis, format_corpus, format_family, format_scan


EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNDETERMINED = 2


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="Starting precision in bits (overrides CL_PRECISION)")
    common.add_argument("--format", choices=["json", "text", "csv"], default="text")
    common.add_argument("--timing", action="store_true", help="Add wall-clock timings to reports")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="conjugate-lattice",
        description="Conjugate lattices of integer polynomials",
    )
    verbs = parser.add_subparsers(dest="command", required=True)

    analyze = verbs.add_parser("analyze", parents=[common], help="Analyze one polynomial")
    analyze.add_argument("polynomial", help='e.g. "x^3+3x^2-6x+1" or "[1, -6, 3, 1]"')

    scan = verbs.add_parser("scan", parents=[common], help="Scan a coefficient box")
    scan.add_argument("--degree", type=int, required=True)
    scan.add_argument("--box", type=int, required=True, help="Bound on |a_k| for k < n")
    scan.add_argument("--lead-max", type=int, default=1, help="Leading coefficients 1..L")
    scan.add_argument("--filter", action="append", default=[], choices=sorted(FILTERS), dest="filters")
    scan.add_argument("--workers", type=int, default=None)

    pisot = verbs.add_parser("pisot", parents=[common], help="Generate and certify a Pisot family")
    pisot.add_argument("--degree", type=int, required=True)
    pisot.add_argument("--count", type=int, required=True)
    pisot.add_argument("--sign-top", type=int, choices=[1, -1], default=1)
    pisot.add_argument("--sign-const", type=int, choices=[1, -1], default=-1)
    pisot.add_argument("--spread", type=int, default=0)

    verbs.add_parser(
        "verify-paper",
        aliases=["verify-corpus"],
        parents=[common],
        help="Reproduce the reference corpus",
    )
    return parser


def cmd_analyze(args) -> int:
    report = LatticeAnalyzer(args.precision, timing=args.timing).analyze(args.polynomial)
    print(format_analysis(report, args.format))
    return EXIT_UNDETERMINED if report.has_undetermined() else EXIT_OK


def cmd_scan(args) -> int:
    source = BoxSource(args.degree, args.box, args.lead_max)
    frame, summary = ScanRunner(source, args.filters, args.precision, args.workers).run()
    print(format_scan(frame, summary, args.format))
    return EXIT_OK


def cmd_pisot(args) -> int:
    spec = FamilySpec(
        n=args.degree,
        count=args.count,
        sign_top=args.sign_top,
        sign_const=args.sign_const,
        spread=args.spread,
    )
    members = FamilySource(spec).certify(args.precision)
    print(format_family(members, args.format))
    values = [m.verified.value for m in members]
    if any(v is False for v in values):
        return EXIT_ERROR
    if any(v == "undetermined" for v in values):
        return EXIT_UNDETERMINED
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    report = CorpusVerifier(args.precision).run()
    print(format_corpus(report, args.format))
    return EXIT_OK if report.failed == 0 else EXIT_ERROR


COMMANDS = {
    "analyze": cmd_analyze,
    "scan": cmd_scan,
    "pisot": cmd_pisot,
    "verify-paper": cmd_verify_paper,
    "verify-corpus": cmd_verify_paper,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one verb and return its exit code."""
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except LatticeToolkitError as e:
        logger.error("Command failed", command=args.command, code=e.code, error=str(e))
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as e:
        # pydantic validation of family requests
        print(f"error [domain]: {e}", file=sys.stderr)
        return EXIT_ERROR
