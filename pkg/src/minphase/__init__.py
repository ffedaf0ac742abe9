"""Minimum-phase signal analysis and operator identification.

Causal L2 signals, Hardy-space transforms between the half plane and
the disk, inner-outer factorization, product-composition operator
models, and reconstruction of minimum-phase-preserving operators from
their responses to two probe signals.
"""

from .errors import (
    DomainError,
    FactorizationError,
    GridMismatchError,
    IdentificationError,
    MinphaseError,
    OperatorValidityError,
    QuantizationError,
    SerializationError,
)
from .signals import (
    CausalSignal,
    TimeGrid,
    from_callable,
    inner_product,
    partial_energy,
    rho0,
    rho1,
    sigma0,
    sigma1,
    translate,
)

__version__ = "0.1.0"

__all__ = [
    "CausalSignal",
    "TimeGrid",
    "from_callable",
    "inner_product",
    "partial_energy",
    "translate",
    "rho0",
    "rho1",
    "sigma0",
    "sigma1",
    "MinphaseError",
    "DomainError",
    "GridMismatchError",
    "QuantizationError",
    "FactorizationError",
    "IdentificationError",
    "OperatorValidityError",
    "SerializationError",
    "__version__",
]
