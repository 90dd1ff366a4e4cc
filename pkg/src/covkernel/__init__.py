"""Correlation functions of characteristic polynomials of sample covariance matrices.

Three independent routes to E[det(Z-mu) det(Z-nu)] (enumeration / Monte
Carlo, generating-function coefficients, contour quadrature) and a harness
that compares the rescaled values with the sine and Airy kernel limits.
"""
from ._accel import BACKEND
from .errors import (CovkernelError, DomainError, PrecisionError, ResourceError,
                     SingularityError, ValidationError)
from .logcomplex import LogComplex

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CovkernelError", "DomainError", "LogComplex", "PrecisionError",
    "ResourceError", "SingularityError", "ValidationError", "__version__",
]
