"""Large-Pisot family source."""
from typing import Iterator, List, Optional

from schemas.models import FamilyMember, FamilySpec
from services.pisotgen import certify_family, generate_family
from services.polynomial import IntPolynomial
from sources.base_source import BaseSource


class FamilySource(BaseSource):
    """Family members in order of |a_0|, then |a_{n-1}|."""

    def __init__(self, spec: FamilySpec):
        super().__init__("family")
        self.spec = spec

    def size(self) -> int:
        return self.spec.count

    def polynomials(self) -> Iterator[IntPolynomial]:
        yield from generate_family(self.spec)

    def certify(self, precision: Optional[int] = None) -> List[FamilyMember]:
        """
        Certify every member as one run.

        Returns:
            FamilyMember per generated polynomial, in source order
        """
        self.start_run()
        try:
            members = certify_family(self.polynomials(), precision)
        except Exception as e:
            self.fail_run(str(e))
            raise
        verified = sum(m.verified.value is True for m in members)
        self.complete_run(records_read=len(members), records_emitted=verified)
        return members
