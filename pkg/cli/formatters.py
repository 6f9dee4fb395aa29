"""Render reports as JSON, text or CSV for the command line."""
from typing import Dict, List, Sequence

import pandas as pd

from schemas.models import AnalysisReport, CorpusReport, FamilyMember, Flag


def _flag(flag: Flag) -> str:
    value = flag.value
    shown = value if isinstance(value, str) else str(value).lower()
    return f"{shown} ({flag.by})"


def cycle_notation(images: Sequence[int]) -> str:
    """0-based root-index images as a 1-based cycle, e.g. [1, 2, 0] -> (1 2 3)."""
    seen, cycles = set(), []
    for start in range(len(images)):
        if start in seen or images[start] == start:
            continue
        cycle, k = [], start
        while k not in seen:
            seen.add(k)
            cycle.append(str(k + 1))
            k = images[k]
        cycles.append("(" + " ".join(cycle) + ")")
    return "".join(cycles) or "()"


def _matrix(rows: List[List]) -> List[str]:
    cells = [[str(v) for v in row] for row in rows]
    width = max((len(c) for row in cells for c in row), default=1)
    return ["  [" + " ".join(c.rjust(width) for c in row) + "]" for row in cells]


def _analysis_text(report: AnalysisReport) -> str:
    lines = [
        f"polynomial: {report.polynomial}",
        f"degree: {report.degree}",
        f"discriminant: {report.discriminant}",
        f"irreducible: {str(report.irreducible).lower()} ({report.irreducibility_reason})",
    ]
    if report.pisot is not None:
        lines.append(f"pisot: {_flag(report.pisot)}")
    galois = report.galois
    lines.append(f"galois: {galois.kind.value} (d = {galois.splitting_degree})")
    if galois.cycle is not None:
        lines.append(f"cycle: {cycle_notation(galois.cycle)}")
    if report.invariants is not None:
        lines.append(f"A = {report.invariants.A}, B = {report.invariants.B}")
    certified = "certified" if report.rank_certified else "computed, not certified"
    lines.append(f"rank: {report.rank} ({certified})")

    if report.gram is not None:
        lines.append(f"gram ({report.gram.tier.value}, scale {report.gram.scale}):")
        lines.extend(_matrix(report.gram.entries))
    if report.minimal_vectors is not None:
        mv = report.minimal_vectors
        shown = f"{mv.min_norm_sq} (scale {mv.scale})" if mv.scale != 1 else f"{mv.min_norm_sq}"
        lines.append(f"min norm^2: {shown}")
        lines.append(f"minimal vectors (+/-): {mv.vectors}")
        lines.append(f"kissing: {mv.kissing}")

    cert = report.certificate
    if cert is not None:
        lines.append(f"WR: {_flag(cert.is_wr)}")
        lines.append(f"GWR: {_flag(cert.is_gwr)}")
        lines.append(f"nearly orthogonal: {_flag(cert.is_nearly_orthogonal)}")
        lines.append(f"minimal basis: {_flag(cert.has_minimal_basis)}")
        if cert.criteria:
            lines.append("criteria: " + ", ".join(cert.criteria))

    if report.planar is not None:
        lines.append(f"planar: {report.planar.minimal_set}, cos = {report.planar.cos_angle}")
    if report.cubic is not None:
        lines.append(f"cubic criterion: {report.cubic.wr_by_criterion}")

    det = report.determinant
    if det is not None:
        lines.append(f"det(Gram): {det.det_gram}")
        lines.append(f"det(L): {det.det_lattice:.10g}")
        if det.closed_form is not None:
            lines.append(f"closed form ({det.closed_form_name}): {det.closed_form:.10g}")
        if det.circulant_full is not None:
            lines.append(f"circulant full/partial: {det.circulant_full:.10g} / {det.circulant_partial:.10g}")
        for note in det.notes:
            lines.append(f"note: {note}")

    for note in report.notes:
        lines.append(f"note: {note}")
    if report.timing_ms:
        lines.append("timing (ms): " + ", ".join(f"{k}={v}" for k, v in report.timing_ms.items()))
    return "\n".join(lines)


def _analysis_row(report: AnalysisReport) -> Dict:
    cert = report.certificate
    return {
        "polynomial": report.polynomial,
        "discriminant": report.discriminant,
        "galois": report.galois.kind.value,
        "tier": report.gram.tier.value if report.gram else None,
        "rank": report.rank,
        "min_norm_sq": cert.min_norm_sq if cert else None,
        "kissing": cert.kissing if cert else None,
        "is_wr": cert.is_wr.value if cert else None,
        "is_gwr": cert.is_gwr.value if cert else None,
        "det_gram": report.determinant.det_gram if report.determinant else None,
    }


def format_analysis(report: AnalysisReport, fmt: str) -> str:
    if fmt == "json":
        return report.model_dump_json(by_alias=True, indent=2)
    if fmt == "csv":
        return pd.DataFrame([_analysis_row(report)]).to_csv(index=False).rstrip("\n")
    return _analysis_text(report)


def format_summary(summary: Dict[str, int]) -> str:
    return "# summary " + " ".join(f"{k}={v}" for k, v in summary.items())


def format_scan(frame: pd.DataFrame, summary: Dict[str, int], fmt: str) -> str:
    """Scan records (CSV, JSON lines or a text table) followed by the summary line."""
    if fmt == "csv":
        body = frame.to_csv(index=False)
    elif fmt == "json":
        body = frame.to_json(orient="records", lines=True) if len(frame) else ""
    else:
        body = frame.to_string(index=False) if len(frame) else "(no records)"
    body = body.rstrip("\n")
    return (body + "\n" if body else "") + format_summary(summary)


def format_family(members: List[FamilyMember], fmt: str) -> str:
    """One JSON line per member for json; a table otherwise."""
    if fmt == "json":
        return "\n".join(m.model_dump_json() for m in members)
    rows = [
        {
            "polynomial": m.polynomial,
            "perron": m.perron,
            "galois": m.galois.value,
            "tier": m.tier.value if m.tier else None,
            "verified": m.verified.value,
            "by": m.verified.by,
            "max_coherence": m.max_coherence,
            "notes": "; ".join(m.notes),
        }
        for m in members
    ]
    frame = pd.DataFrame(rows)
    if fmt == "csv":
        return frame.to_csv(index=False).rstrip("\n")
    return frame.to_string(index=False)


def format_corpus(report: CorpusReport, fmt: str) -> str:
    if fmt == "json":
        return report.model_dump_json(by_alias=True, indent=2)
    if fmt == "csv":
        return pd.DataFrame([c.model_dump() for c in report.checks]).to_csv(index=False).rstrip("\n")
    lines = []
    for check in report.checks:
        mark = "PASS" if check.passed else "FAIL"
        lines.append(f"{mark}  {check.name}: expected {check.expected}, computed {check.computed}")
        if check.annotation:
            lines.append(f"      ({check.annotation})")
    lines.append(f"{report.passed} passed, {report.failed} failed")
    return "\n".join(lines)
