"""Built-in reference rows with their expected values."""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

from services.polynomial import IntPolynomial
from sources.base_source import BaseSource


@dataclass(frozen=True)
class ReferenceRow:
    """One reference polynomial and the values it must reproduce."""
    name: str
    coefficients: Tuple[int, ...]  # ascending powers
    expected: Dict[str, Any] = field(default_factory=dict)
    annotation: Optional[str] = None

    @property
    def polynomial(self) -> IntPolynomial:
        return IntPolynomial(self.coefficients)


def _cubic(a: int, b: int, c: int) -> Tuple[int, ...]:
    """x^3 + a x^2 + b x + c."""
    return (c, b, a, 1)


QUADRATIC_ROWS: List[ReferenceRow] = [
    ReferenceRow(
        name="quadratic x^2+x+2",
        coefficients=(2, 1, 1),
        expected={"min_norm_sq": 2, "vectors": [[1, 1]], "is_wr": False, "kissing": 2},
        annotation="substituted for x^2+x-2, which is reducible; x^2+x+2 has D = -7 and |L| = sqrt(2)",
    ),
    ReferenceRow(
        name="quadratic x^2+5x+5",
        coefficients=(5, 5, 1),
        expected={"discriminant": 5, "min_norm_sq": 10, "vectors": [[1, -1]], "is_wr": False, "kissing": 2},
    ),
    ReferenceRow(
        name="quadratic x^2-2x-1",
        coefficients=(-1, -2, 1),
        expected={
            "discriminant": 8,
            "min_norm_sq": 6,
            "vectors": [[1, 0], [0, 1]],
            "is_wr": True,
            "is_gwr": True,
            "kissing": 4,
        },
    ),
]

PISOT_ROWS: List[ReferenceRow] = [
    ReferenceRow("pisot (42, 0, -24)", _cubic(42, 0, -24), {"pisot": True, "galois": "cyclic"}),
    ReferenceRow("pisot (-42, 0, 24)", _cubic(-42, 0, 24), {"pisot": True, "galois": "cyclic"}),
    ReferenceRow("pisot (-2, -1, 1)", _cubic(-2, -1, 1), {"pisot": True, "galois": "cyclic"}),
    ReferenceRow("pisot (32, 0, -28)", _cubic(32, 0, -28), {"pisot": True, "galois": "symmetric"}),
    ReferenceRow("pisot (49, 0, 47)", _cubic(49, 0, 47), {"pisot": True, "galois": "symmetric"}),
    ReferenceRow("pisot (-47, 0, 28)", _cubic(-47, 0, 28), {"pisot": True, "galois": "symmetric"}),
]

NON_PISOT_ROWS: List[ReferenceRow] = [
    ReferenceRow(
        "non-pisot (3, -6, 1)",
        _cubic(3, -6, 1),
        {"pisot": False, "galois": "cyclic", "square_discriminant": True},
        annotation="tabulated roots duplicate the (-3, 0, 3) row; recomputed here",
    ),
    ReferenceRow(
        "non-pisot (5, 6, 1)",
        _cubic(5, 6, 1),
        {
            "pisot": False,
            "galois": "cyclic",
            "square_discriminant": True,
            "roots": [-0.198062, -3.24698, -1.55496],
        },
    ),
    ReferenceRow(
        "non-pisot (-1, -2, 1)",
        _cubic(-1, -2, 1),
        {
            "pisot": False,
            "galois": "cyclic",
            "square_discriminant": True,
            "roots": [1.80194, -1.24698, 0.445042],
        },
    ),
    ReferenceRow(
        "non-pisot (-3, 0, 3)",
        _cubic(-3, 0, 3),
        {
            "pisot": False,
            "galois": "cyclic",
            "square_discriminant": True,
            "roots": [2.53209, 1.3473, -0.879385],
        },
    ),
]

WORKED_ROWS: List[ReferenceRow] = [
    ReferenceRow(
        "worked cubic (3, -6, 1)",
        _cubic(3, -6, 1),
        {
            "A": 21,
            "B": -6,
            "cubic_wr": True,
            "roots_minimal": True,
            "min_norm_sq": 21,
            "kissing": 6,
            "is_wr": True,
            "is_gwr": True,
            "det_gram": 6561,
            "det_lattice": 81,
        },
    ),
]

CONSTANTS: Dict[str, Any] = {
    "coherence_bound_3": "0.2965",
    "main_bound_3": (20.23, 20.24),
    "admissible_example": _cubic(42, 0, -24),
}

ROOT_TOLERANCE = 1e-5


class ReferenceCorpus(BaseSource):
    """Reference polynomials with the values they must reproduce."""

    def __init__(self):
        super().__init__("reference")
        self.rows: List[ReferenceRow] = QUADRATIC_ROWS + PISOT_ROWS + NON_PISOT_ROWS + WORKED_ROWS

    def size(self) -> int:
        return len(self.rows)

    def polynomials(self) -> Iterator[IntPolynomial]:
        for row in self.rows:
            yield row.polynomial
