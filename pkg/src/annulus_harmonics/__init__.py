"""Radial harmonic maps between annuli and Nitsche-type modulus bounds."""

from .errors import (
    DomainError,
    IntegrationError,
    OrderingViolation,
    ParameterError,
    PhaseUnwrapError,
    QuadratureError,
)
from .metrics import (
    GeodesicProfile,
    RadialMetric,
    cigar,
    custom_metric,
    euclidean,
    hyperbolic_annulus,
    hyperbolic_disk,
    metric_by_kind,
    punctured_disk,
    sphere,
)

__all__ = [
    "DomainError", "IntegrationError", "OrderingViolation", "ParameterError",
    "PhaseUnwrapError", "QuadratureError",
    "GeodesicProfile", "RadialMetric",
    "cigar", "custom_metric", "euclidean", "hyperbolic_annulus",
    "hyperbolic_disk", "metric_by_kind", "punctured_disk", "sphere",
]

__version__ = "0.1.0"
