"""Coefficient-box source for scans."""
from itertools import product
from typing import Iterator

from core.config import settings
from core.exceptions import DomainError, ResourceError
from services.polynomial import IntPolynomial
from sources.base_source import BaseSource


class BoxSource(BaseSource):
    """
    Every polynomial of degree n with 1 <= a_n <= lead_max and
    |a_k| <= box for k < n, in lexicographic order of (a_n, ..., a_0).
    """

    def __init__(self, degree: int, box: int, lead_max: int = 1):
        """
        Initialize box source.

        Args:
            degree: Polynomial degree n
            box: Bound on |a_k| for k < n
            lead_max: Largest leading coefficient

        Raises:
            ResourceError: If the box holds more than SCAN_MAX_BOX_VOLUME polynomials
        """
        super().__init__("box")
        if degree < 2:
            raise DomainError("scan degree must be at least 2")
        if box < 0 or lead_max < 1:
            raise DomainError("box bound must be >= 0 and lead_max >= 1")
        self.degree = degree
        self.box = box
        self.lead_max = lead_max
        if self.size() > settings.SCAN_MAX_BOX_VOLUME:
            raise ResourceError(
                f"box volume {self.size()} exceeds {settings.SCAN_MAX_BOX_VOLUME}"
            )

    def size(self) -> int:
        return self.lead_max * (2 * self.box + 1) ** self.degree

    def polynomials(self) -> Iterator[IntPolynomial]:
        span = range(-self.box, self.box + 1)
        for lead, *rest in product(range(1, self.lead_max + 1), *([span] * self.degree)):
            yield IntPolynomial.from_descending([lead] + rest)
