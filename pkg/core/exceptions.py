"""Exception hierarchy shared by the services, CLI and API."""


class LatticeToolkitError(Exception):
    """Base class for every error raised by the toolkit."""

    code = "error"


class DomainError(LatticeToolkitError):
    """Input outside the mathematical domain of an operation."""

    code = "domain"


class ParseError(DomainError):
    code = "parse"


class ReducibleError(DomainError):
    """Polynomial is reducible over Q; the message names the witness."""

    code = "reducible"


class RepeatedRootError(DomainError):
    code = "repeated-root"


class UnsupportedInputError(LatticeToolkitError):
    """Input is valid but not handled by the requested construction."""

    code = "unsupported"


class ExactnessUnsupportedError(UnsupportedInputError):
    """An exact (tier E) construction does not apply; use the numeric path."""

    code = "exactness-unsupported"


class PrecisionError(LatticeToolkitError):
    """Numerical certification failed at the current working precision."""

    code = "precision"


class NotCyclicError(LatticeToolkitError):
    code = "not-cyclic"


class MisclassificationError(LatticeToolkitError):
    """A Galois class disagreed with the numeric embedding oracle."""

    code = "misclassification"


class DegenerateLatticeError(LatticeToolkitError):
    code = "degenerate-lattice"


class InconsistencyError(LatticeToolkitError):
    code = "inconsistency"


class ConstructionError(LatticeToolkitError):
    """An invariant that holds for every correctly built lattice failed."""

    code = "construction"


class DivisibilityViolationError(ConstructionError):
    """A kissing number broke the divisibility law its hypothesis promises."""

    code = "divisibility-violation"


class ResourceError(LatticeToolkitError):
    code = "resource"
