"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the valid chart or coordinate domain."""


class ParameterError(ValueError):
    """Parameters violate a documented precondition (admissibility, ordering, ...)."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to converge, typically a divergent integral."""


class IntegrationError(RuntimeError):
    """Numerical ODE integration failed (no crossing, step breakdown)."""


class PhaseUnwrapError(RuntimeError):
    """Phase unwrapping failed: vanishing modulus or inconsistent winding."""


class OrderingViolation(RuntimeError):
    """A figure pipeline found data violating a required row-wise ordering."""
