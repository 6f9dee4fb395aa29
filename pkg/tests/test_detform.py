"""Tests for lattice determinants."""
import random

import pytest

from core.exceptions import InconsistencyError, UnsupportedInputError
from schemas.models import GaloisClass, GaloisKind
from services.detform import (
    det_alternating,
    det_alternating_orbit,
    det_circulant,
    det_gram_exact,
    det_gram_numeric,
    det_symmetric,
    determinant_report,
)
from services.lattice import (
    alternating_closed_gram,
    gram_exact,
    gram_numeric,
    is_positive_definite,
    symmetric_closed_gram,
)
from services.polynomial import find_roots


CYCLIC_3 = GaloisClass(kind=GaloisKind.CYCLIC, cycle=[1, 2, 0], splitting_degree=3)
SYMMETRIC_3 = GaloisClass(kind=GaloisKind.SYMMETRIC, splitting_degree=6)


def test_det_gram_exact(make_gram, worked_cubic):
    """Test Bareiss elimination on small Grams."""
    assert det_gram_exact(gram_exact(worked_cubic, CYCLIC_3)) == 6561
    assert det_gram_exact(make_gram([[6, -2], [-2, 6]])) == 32
    assert det_gram_exact(make_gram([[1764, 0, 0], [0, 1764, 0], [0, 0, 1764]])) == 1764 ** 3


def test_det_gram_exact_needs_exact_tier(worked_cubic):
    """Test that a numeric Gram is refused."""
    _, numeric = gram_numeric(worked_cubic, CYCLIC_3, find_roots(worked_cubic))
    with pytest.raises(UnsupportedInputError):
        det_gram_exact(numeric)
    assert det_gram_numeric(numeric) == pytest.approx(6561, rel=1e-9)


def test_det_symmetric():
    """Test the S_n closed form."""
    closed = det_symmetric(3, 1024, 0)
    assert closed.radicand == 2048 ** 3
    assert closed.value == pytest.approx(2048 ** 1.5)


def test_det_alternating_forms():
    """Test the closed-form A_n radicand and the orbit-count variant."""
    assert det_alternating(3, 21, -6).radicand == 69120
    # A_3 is cyclic, so the orbit form reproduces the worked cubic
    assert det_alternating_orbit(3, 21, -6).radicand == 6561


def test_det_closed_form_degenerate():
    """Test that B = -A/2 gives a zero determinant."""
    assert det_symmetric(3, 4, -2).radicand == 0


def test_det_closed_form_negative_radicand():
    """Test that a negative radicand is an inconsistency."""
    with pytest.raises(InconsistencyError):
        det_symmetric(3, 1, -1)


def test_det_circulant(worked_cubic, pisot_cubic):
    """Test the full and partial circulant products."""
    full, partial = det_circulant(worked_cubic, [1, 2, 0], find_roots(worked_cubic))
    assert float(full) == pytest.approx(81)
    assert float(partial) == pytest.approx(27)

    full, partial = det_circulant(pisot_cubic, [1, 2, 0], find_roots(pisot_cubic))
    assert float(full) == pytest.approx(74088)
    assert float(partial) == pytest.approx(1764)


def test_determinant_report_cyclic(worked_cubic):
    """Test circulant agreement in the report."""
    roots = find_roots(worked_cubic)
    report = determinant_report(gram_exact(worked_cubic, CYCLIC_3, roots), worked_cubic, CYCLIC_3, roots)
    assert report.det_gram == 6561
    assert report.det_gram_exact
    assert report.det_lattice == pytest.approx(81)
    assert report.circulant_agrees is True
    assert report.closed_form is None


def test_determinant_report_symmetric(symmetric_cubic):
    """Test closed-form agreement for a totally real S_3 cubic."""
    report = determinant_report(gram_exact(symmetric_cubic, SYMMETRIC_3), symmetric_cubic, SYMMETRIC_3)
    assert report.closed_form_name == "symmetric"
    assert report.closed_form_radicand == report.det_gram == 2048 ** 3
    assert report.closed_form_agrees is True
    assert report.circulant_full is None


def test_closed_forms_match_bareiss(make_gram):
    """Test both closed forms against exact elimination on random positive definite Grams."""
    rng = random.Random(20)
    checked = 0
    while checked < 100:
        n = rng.choice([3, 5, 7])
        A, B = rng.randint(1, 60), rng.randint(-60, 60)
        symmetric = symmetric_closed_gram(n, A, B)
        alternating = alternating_closed_gram(n, A, B)
        if not (is_positive_definite(symmetric) and is_positive_definite(alternating)):
            continue
        assert det_symmetric(n, A, B).radicand == det_gram_exact(make_gram(symmetric))
        assert det_alternating(n, A, B).radicand == det_gram_exact(make_gram(alternating))
        checked += 1
