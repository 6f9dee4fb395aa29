"""Tests for polynomial sources and the scan runner."""
import pytest

from core.config import settings
from core.exceptions import DomainError, ResourceError
from schemas.models import DivisibilityResult, FamilySpec
from services.certify import planar_wr
from services.polynomial import IntPolynomial, is_square
from services.scan_runner import SCAN_COLUMNS, ScanRunner, scan_item
from sources.base_source import RunStatus
from sources.box_source import BoxSource
from sources.family_source import FamilySource


def test_box_source_order_and_size():
    """Test lexicographic enumeration of the coefficient box."""
    source = BoxSource(degree=2, box=1)
    polys = [str(f) for f in source.polynomials()]
    assert source.size() == 9
    assert polys[0] == "x^2-x-1"
    assert polys[-1] == "x^2+x+1"


def test_box_source_volume_cap(monkeypatch):
    """Test that oversized boxes are refused."""
    monkeypatch.setattr(settings, "SCAN_MAX_BOX_VOLUME", 100)
    with pytest.raises(ResourceError):
        BoxSource(degree=3, box=2)


def test_box_source_rejects_linear():
    """Test the degree floor for scans."""
    with pytest.raises(DomainError):
        BoxSource(degree=1, box=3)


def test_scan_item_statuses():
    """Test reducible, repeated-root and analyzed items."""
    assert scan_item((-2, 1, 1))["status"] == "reducible"
    assert scan_item((1, 2, 1))["status"] == "repeated-root"
    record = scan_item((-1, -2, 1))
    assert record["status"] == "ok"
    assert record["is_wr"] is True
    assert record["closed_form_wr"] is True


def test_scan_item_without_linear_term():
    """Test that x^2-2 is emitted with no planar verdict."""
    record = scan_item((-2, 0, 1))
    assert record["status"] == "ok"
    assert record["rank"] == 1
    assert record["closed_form_wr"] is None


def test_scan_small_box():
    """Test summary counts over the monic quadratics with |a_k| <= 2."""
    source = BoxSource(degree=2, box=2)
    frame, summary = ScanRunner(source, workers=0).run()
    assert summary["total"] == 25
    assert summary["analyzed"] == 15
    assert summary["reducible"] == 7
    assert summary["repeated_root"] == 3
    assert summary["errors"] == summary["violations"] == 0
    assert summary["emitted"] == summary["analyzed"] == len(frame)
    assert list(frame.columns) == SCAN_COLUMNS
    decided = frame[frame["closed_form_wr"].notna()]
    assert len(decided) == 12
    assert (decided["is_wr"] == decided["closed_form_wr"]).all()
    assert source.current_run.status == RunStatus.SUCCESS
    assert source.current_run.records_read == 25


def test_scan_counts_divisibility_violations(monkeypatch):
    """Test that a broken divisibility law gets its own status and counter."""
    monkeypatch.setattr(
        "services.analyzer.divisibility_check",
        lambda *args: DivisibilityResult(holds=False, vacuous=False, note="kissing 2 is not divisible by 2"),
    )
    assert scan_item((-1, -2, 1))["status"] == "violation"
    frame, summary = ScanRunner(BoxSource(degree=2, box=1), workers=0).run()
    assert summary["violations"] == 5
    assert summary["analyzed"] == summary["errors"] == 0
    assert len(frame) == 0


def test_scan_filters():
    """Test that filters restrict the emitted records but not the summary."""
    frame, summary = ScanRunner(BoxSource(degree=2, box=2), filters=["wr"], workers=0).run()
    assert summary["emitted"] == summary["wr"] == len(frame)
    assert frame["is_wr"].map(lambda v: v is True).all()


def test_scan_unknown_filter():
    """Test filter validation."""
    with pytest.raises(DomainError):
        ScanRunner(BoxSource(degree=2, box=1), filters=["round"])


def test_scan_family_source():
    """Test scanning generated family members."""
    source = FamilySource(FamilySpec(n=3, count=2))
    frame, summary = ScanRunner(source, workers=0).run()
    assert summary["analyzed"] == 2
    assert frame["is_gwr"].map(lambda v: v is True).all()
    assert frame["pisot"].map(lambda v: v is True).all()


def test_family_source_certify_run():
    """Test that certifying a family is one tracked source run."""
    source = FamilySource(FamilySpec(n=3, count=2))
    members = source.certify()
    assert [m.polynomial for m in members] == ["x^3+23x^2-21", "x^3+24x^2-22"]
    assert source.current_run.status == RunStatus.SUCCESS
    assert source.current_run.records_read == 2
    assert source.current_run.records_emitted == 2


@pytest.mark.slow
def test_scan_quadratics_match_planar_criterion():
    """Test every monic quadratic with |a_k| <= 25 and a_1 != 0 against the closed form."""
    frame, summary = ScanRunner(BoxSource(degree=2, box=25), workers=2).run()
    assert summary["errors"] == summary["violations"] == 0
    checked = 0
    for row in frame.itertuples():
        f = IntPolynomial.parse(row.polynomial)
        if f.coeff(1) == 0:
            assert row.closed_form_wr is None
            continue
        assert planar_wr(1, f.coeff(1), f.coeff(0)).is_wr == row.is_wr
        checked += 1
    assert checked > 0


@pytest.mark.slow
def test_scan_cyclic_cubics_have_square_discriminants():
    """Test that every cyclic cubic record has a square discriminant."""
    frame, summary = ScanRunner(BoxSource(degree=3, box=3), filters=["cyclic"], workers=2).run()
    assert summary["cyclic"] == len(frame) > 0
    assert frame["discriminant"].map(is_square).all()


@pytest.mark.slow
def test_scan_cubic_kissing_divisibility():
    """Test that exact cubic records with |a_k| <= 10 below d·a_2^2 have kissing divisible by 3."""
    frame, summary = ScanRunner(BoxSource(degree=3, box=10), filters=["tier-e"], workers=4).run()
    assert summary["errors"] == 0
    assert summary["violations"] == 0
    assert len(frame) > 0
    violations = []
    for row in frame.itertuples():
        a2 = IntPolynomial.parse(row.polynomial).coeff(2)
        if row.min_norm_sq < row.splitting_degree * a2 * a2 and row.kissing % 3:
            violations.append(row.polynomial)
    assert violations == []
