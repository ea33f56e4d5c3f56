"""Thin wrapper around scipy's adaptive quadrature with divergence detection."""

import math
import warnings

from scipy.integrate import quad, IntegrationWarning

from .errors import QuadratureError

DEFAULT_REL_TOL = 1e-10
# Subinterval cap doubles as the divergence detector: integrals that keep
# subdividing past this are reported as non-convergent rather than guessed.
MAX_SUBINTERVALS = 200


def adaptive_quad(f, a, b, rel_tol=DEFAULT_REL_TOL, abs_tol=1e-14):
    """Integrate ``f`` over [a, b]; raise ``QuadratureError`` on non-convergence."""
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value, _ = quad(f, a, b, epsabs=abs_tol, epsrel=rel_tol,
                            limit=MAX_SUBINTERVALS)
        except IntegrationWarning as exc:
            raise QuadratureError(
                f"quadrature on [{a}, {b}] did not converge: {exc}") from exc
        except (ZeroDivisionError, OverflowError) as exc:
            raise QuadratureError(
                f"integrand blew up inside [{a}, {b}]: {exc}") from exc
    if not math.isfinite(value):
        raise QuadratureError(f"quadrature on [{a}, {b}] returned {value}")
    return value
