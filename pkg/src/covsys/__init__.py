"""Covering systems of congruences: verification, transforms, enumeration."""

from .core import (
    CongruenceClass,
    CongruenceSystem,
    CovSysError,
    LcmOverflowError,
    ParseError,
    PreconditionError,
    SystemReport,
    analyze,
    coverage_bitmap,
    covers,
    is_distinct,
    is_exact,
    is_minimal,
    reciprocal_sum,
)
from .transforms import (
    AffineParams,
    affine_apply,
    canonical_form,
    delta,
    delta_preimage,
    is_delta_primitive,
)

__version__ = "0.1.0"
