"""Exception types shared across the library."""


class MinphaseError(Exception):
    """Base class for all library-specific errors."""


class DomainError(MinphaseError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class GridMismatchError(MinphaseError, ValueError):
    """Two objects that must share a grid do not."""


class QuantizationError(DomainError):
    """A continuous parameter does not align with the sample grid."""


class FactorizationError(MinphaseError):
    """Inner-outer factorization is not possible for the given data."""


class IdentificationError(MinphaseError):
    """Operator identification failed (ill-conditioned or invalid data)."""


class OperatorValidityError(MinphaseError):
    """Operator data violates the product-composition model requirements."""


class SerializationError(MinphaseError, ValueError):
    """Malformed input file (CSV/JSON)."""
