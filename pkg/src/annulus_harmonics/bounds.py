"""Nitsche-type modulus bounds for harmonic maps between annuli.

Every bound here is a necessary condition on the domain annulus A(r1, 1) (or
any annulus of the same modulus) for a harmonic diffeomorphism onto a given
target annulus to exist; none asserts sufficiency.  Reports state the
comparison `lhs >= rhs` with a small tie tolerance, and carry an
``applicable`` flag for hypotheses such as the hemisphere restriction on the
sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quad import DEFAULT_REL_TOL
from .errors import ParameterError
from .maps import HYPERBOLIC, extremal_inner_radius
from .metrics import (
    BASE_UNIT_CIRCLE,
    HYPERBOLIC_ANNULUS,
    HYPERBOLIC_DISK,
    SPHERE,
    RadialMetric,
    euclidean,
)

TIE_TOL = 1e-12  # |lhs - rhs| below this counts as satisfied (equality cases)


@dataclass(frozen=True)
class BoundReport:
    """One evaluated inequality of the form lhs >= rhs."""

    bound_id: str
    lhs: float
    rhs: float
    satisfied: bool
    applicable: bool
    citation: str
    reason: str = ""


def _satisfied(lhs, rhs):
    if math.isinf(rhs):
        return math.isinf(lhs)
    return lhs >= rhs or abs(lhs - rhs) <= TIE_TOL


def _check_r1(r1):
    if not 0.0 < r1 <= 1.0:
        raise ParameterError(f"domain inner radius r1 must lie in (0, 1], got {r1}")


# -- annulus descriptions -------------------------------------------------------

@dataclass(frozen=True)
class AnnulusSpec:
    """A target annulus in both geodesic (rho) and chart-radius coordinates."""

    metric: RadialMetric
    rho0: float
    rho1: float
    chart_r0: float
    chart_r1: float

    def __post_init__(self):
        if not self.rho0 < self.rho1:
            raise ParameterError(
                f"need rho0 < rho1, got {self.rho0}, {self.rho1}")
        if not self.chart_r0 < self.chart_r1:
            raise ParameterError("chart radii must be strictly increasing")

    @classmethod
    def from_geodesic(cls, metric, rho0, rho1):
        if metric.base != BASE_UNIT_CIRCLE and rho0 <= 0.0:
            raise ParameterError(f"need rho0 > 0, got {rho0}")
        prof = metric.profile()
        return cls(metric=metric, rho0=float(rho0), rho1=float(rho1),
                   chart_r0=float(prof.g(rho0)), chart_r1=float(prof.g(rho1)))

    @classmethod
    def from_chart(cls, metric, r0, r1):
        prof = metric.profile()
        return cls(metric=metric, rho0=float(prof.omega(r0)),
                   rho1=float(prof.omega(r1)),
                   chart_r0=float(r0), chart_r1=float(r1))

    @classmethod
    def euclidean_chart(cls, r_in, r_out):
        if not 0.0 < r_in < r_out:
            raise ParameterError(f"need 0 < r_in < r_out, got {r_in}, {r_out}")
        return cls(metric=euclidean(), rho0=float(r_in), rho1=float(r_out),
                   chart_r0=float(r_in), chart_r1=float(r_out))


# -- classical Euclidean bounds --------------------------------------------------

def euclid_nitsche(r1):
    """Largest image inner radius 2 r1/(1 + r1^2) (Nitsche, 1962)."""
    if not 0.0 <= r1 <= 1.0:
        raise ParameterError(f"need 0 <= r1 <= 1, got {r1}")
    return 2.0 * r1 / (1.0 + r1 * r1)


def euclid_weitsman(r1):
    """Weitsman's upper bound 1/(1 + (r1 log r1)^2 / 2)."""
    if not 0.0 < r1 < 1.0:
        raise ParameterError(f"need 0 < r1 < 1, got {r1}")
    return 1.0 / (1.0 + 0.5 * (r1 * math.log(r1)) ** 2)


def euclid_kalaj(r1):
    """Kalaj's improvement 1/(1 + log^2(r1) / 2) of Weitsman's bound."""
    if not 0.0 < r1 < 1.0:
        raise ParameterError(f"need 0 < r1 < 1, got {r1}")
    return 1.0 / (1.0 + 0.5 * math.log(r1) ** 2)


# -- the general curvature-signed bound -----------------------------------------

def _half_plus_log_derivative(metric, q):
    """1/2 + (h'/h)(q^2) q^2, the bracket entering the general bound."""
    t = q * q
    return 0.5 + metric.h_prime(t) / metric.h(t) * t


def general_bound(spec, r1, samples=64):
    """Curvature-signed modulus bound for any radially symmetric target.

    lhs = rho1/rho0; rhs = 1 + (q0/rho0) log^2(r1) * h(q^2)(1/2 + (h'/h) q^2)
    with q = q0 for negatively curved targets and q = q1 for positively
    curved ones.  Indefinite curvature on the relevant range is an error; a
    nonpositive bracket in the positive case makes the bound trivial and is
    reported as inapplicable.
    """
    _check_r1(r1)
    metric = spec.metric
    q0, q1 = spec.chart_r0, spec.chart_r1
    sign = metric.classify_curvature((q0 * q0, q1 * q1), samples=samples)
    if sign == "indefinite":
        raise ParameterError(
            "curvature sign is indefinite on the target range; the "
            "curvature-signed bound does not apply")
    q = q1 if sign == "positive" else q0
    bracket = _half_plus_log_derivative(metric, q)
    applicable, reason = True, ""
    if sign == "positive" and bracket <= TIE_TOL:
        applicable = False
        reason = ("positive curvature with 1/2 + (h'/h) q1^2 <= 0: "
                  "the inequality is trivial")
    with np.errstate(divide="ignore", over="ignore"):
        factor = float(metric.h(q * q)) * bracket
        rhs = 1.0 + q0 / spec.rho0 * math.log(r1) ** 2 * factor
    lhs = spec.rho1 / spec.rho0
    return BoundReport(
        bound_id="general_radial", lhs=lhs, rhs=float(rhs),
        satisfied=_satisfied(lhs, rhs), applicable=applicable,
        citation="curvature-signed radial-metric annulus bound", reason=reason)


# -- sphere ----------------------------------------------------------------------

def sphere_rhs_polar(rho1, r1):
    """1 + sin(2 rho1)/(4 rho1) log^2 r1."""
    return 1.0 + math.sin(2.0 * rho1) / (4.0 * rho1) * math.log(r1) ** 2


def sphere_rhs_chart(sigma, r1):
    """1 + sigma(1-sigma^2) / (2 (1+sigma^2)^2 arctan sigma) log^2 r1."""
    coeff = sigma * (1.0 - sigma * sigma) / (
        2.0 * (1.0 + sigma * sigma) ** 2 * math.atan(sigma))
    return 1.0 + coeff * math.log(r1) ** 2


def sphere_bound(spec, r1):
    """Spherical-annulus bound; applicable while the image stays in a hemisphere.

    Both the geodesic-polar and the chart-radius formulations are evaluated
    and must agree on satisfaction; the chart form is reported.
    """
    _check_r1(r1)
    if spec.metric.kind != SPHERE:
        raise ParameterError("sphere_bound expects a sphere target")
    tau, sigma = spec.chart_r0, spec.chart_r1
    rho0, rho1 = spec.rho0, spec.rho1
    lhs = math.atan(sigma) / math.atan(tau)
    rhs_chart = sphere_rhs_chart(sigma, r1)
    rhs_polar = sphere_rhs_polar(rho1, r1)
    ok_chart = _satisfied(lhs, rhs_chart)
    ok_polar = _satisfied(rho1 / rho0, rhs_polar)
    if ok_chart != ok_polar:
        raise RuntimeError(
            f"polar/chart forms disagree at tau={tau}, sigma={sigma}, r1={r1}")
    applicable, reason = True, ""
    if rho1 >= math.pi / 2.0 - TIE_TOL:
        applicable = False
        reason = "image annulus is not contained in an open hemisphere"
    return BoundReport(
        bound_id="sphere_annulus", lhs=lhs, rhs=rhs_chart, satisfied=ok_chart,
        applicable=applicable,
        citation="hemispheric spherical-annulus modulus bound", reason=reason)


def sphere_r_lower(sigma, tau):
    """Closed-form lower bound for the domain inner radius on the sphere.

    Solving the chart-form bound for r1 at equality gives
    exp(-sqrt(2 (1+s^2)^2 atan(s)(atan(s)-atan(t)) / (s (1-s^2) atan(t)))).
    """
    if not 0.0 < tau < sigma < 1.0:
        raise ParameterError(f"need 0 < tau < sigma < 1, got {tau}, {sigma}")
    x = (2.0 * (1.0 + sigma * sigma) ** 2 * math.atan(sigma)
         * (math.atan(sigma) - math.atan(tau))
         / (sigma * (1.0 - sigma * sigma) * math.atan(tau)))
    return math.exp(-math.sqrt(x))


def cmc_modulus_bound(rho0, rho1):
    """Modulus cap (1/pi) sqrt((rho1-rho0)/rho0 * rho1/sin(2 rho1)).

    Caps the conformal modulus of a ring domain on a constant-mean-curvature
    surface whose Gauss map covers the spherical annulus A(rho0, rho1)
    properly; requires the annulus to sit in an open hemisphere.
    """
    if not 0.0 < rho0 <= rho1:
        raise ParameterError(f"need 0 < rho0 <= rho1, got {rho0}, {rho1}")
    if rho1 >= math.pi / 2.0:
        raise ParameterError(
            f"rho1={rho1} >= pi/2: the image leaves the hemisphere and the "
            "cap fails (the cylinder Gauss map covers the equator)")
    return math.sqrt((rho1 - rho0) / rho0 * rho1 / math.sin(2.0 * rho1)) / math.pi


# -- hyperbolic disk ---------------------------------------------------------------

def hyperbolic_rhs_polar(rho0, r1):
    """1 + sinh(2 rho0)/(4 rho0) log^2 r1."""
    return 1.0 + math.sinh(2.0 * rho0) / (4.0 * rho0) * math.log(r1) ** 2


def hyperbolic_rhs_chart(q0, r1):
    """q0 (1+q0^2)/(1-q0^2)^2 log^2 r1, compared against rho1 - rho0."""
    return q0 * (1.0 + q0 * q0) / (1.0 - q0 * q0) ** 2 * math.log(r1) ** 2


def hyperbolic_disk_bound(spec, r1):
    """Hyperbolic-disk annulus bound in polar and chart forms (must agree)."""
    _check_r1(r1)
    if spec.metric.kind != HYPERBOLIC_DISK:
        raise ParameterError("hyperbolic_disk_bound expects a hyperbolic-disk target")
    q0, q1 = spec.chart_r0, spec.chart_r1
    if not 0.0 < q0 < q1 < 1.0:
        raise ParameterError(f"need 0 < q0 < q1 < 1, got {q0}, {q1}")
    rho0, rho1 = spec.rho0, spec.rho1
    lhs_chart = math.log(((1.0 + q1) / (1.0 - q1)) / ((1.0 + q0) / (1.0 - q0)))
    rhs_chart = hyperbolic_rhs_chart(q0, r1)
    ok_chart = _satisfied(lhs_chart, rhs_chart)
    ok_polar = _satisfied(rho1 / rho0, hyperbolic_rhs_polar(rho0, r1))
    if ok_chart != ok_polar:
        raise RuntimeError(
            f"polar/chart forms disagree at q0={q0}, q1={q1}, r1={r1}")
    return BoundReport(
        bound_id="hyperbolic_disk_annulus", lhs=lhs_chart, rhs=rhs_chart,
        satisfied=ok_chart, applicable=True,
        citation="hyperbolic-disk annulus modulus bound")


# -- hyperbolic annulus -------------------------------------------------------------

def annulus_coefficient_closed(R, q0):
    """pi^2/(8 log^2 R) sec(u) tan(u), u = pi log(q0) / (2 log R)."""
    L = math.log(R)
    u = math.pi * math.log(q0) / (2.0 * L)
    return math.pi ** 2 / (8.0 * L * L) * math.tan(u) / math.cos(u)


def annulus_coefficient_general(metric, q0):
    """q0 (h(q0^2)/2 + h'(q0^2) q0^2) straight from the density."""
    t = q0 * q0
    return q0 * (float(metric.h(t)) / 2.0 + float(metric.h_prime(t)) * t)


def hyperbolic_annulus_bound(spec, r1):
    """Bound rho1 - rho0 >= C(q0, R) log^2 r1 on the hyperbolic annulus A(1/R, R).

    The closed-form coefficient and its evaluation straight from the density
    must agree to 1e-9; the geodesic radii are measured from the core circle
    |z| = 1, so rho0 > 0 places the image in the outer half.
    """
    _check_r1(r1)
    if spec.metric.kind != HYPERBOLIC_ANNULUS:
        raise ParameterError("hyperbolic_annulus_bound expects a hyperbolic annulus")
    if spec.rho0 <= 0.0:
        raise ParameterError(f"need rho0 > 0, got {spec.rho0}")
    R = spec.metric.R
    q0 = spec.chart_r0
    coeff = annulus_coefficient_closed(R, q0)
    coeff_direct = annulus_coefficient_general(spec.metric, q0)
    if abs(coeff - coeff_direct) > 1e-9 * max(1.0, abs(coeff)):
        raise RuntimeError(
            f"closed-form and density-based coefficients disagree: "
            f"{coeff} vs {coeff_direct}")
    lhs = spec.rho1 - spec.rho0
    rhs = coeff * math.log(r1) ** 2
    return BoundReport(
        bound_id="hyperbolic_annulus", lhs=lhs, rhs=rhs,
        satisfied=_satisfied(lhs, rhs), applicable=True,
        citation="hyperbolic-annulus (core-circle) modulus bound")


# -- the one-parameter comparison family --------------------------------------------

def f1(s, rel_tol=DEFAULT_REL_TOL):
    """Extremal-family inner radius along tau = 1-2s, sigma = 1-s."""
    if not 0.0 < s < 0.5:
        raise ParameterError(f"need 0 < s < 1/2, got {s}")
    return extremal_inner_radius(HYPERBOLIC, 1.0 - 2.0 * s, 1.0 - s,
                                 rel_tol=rel_tol)


def f2(s):
    """Closed-form necessary lower bound along the same family."""
    if not 0.0 < s < 0.5:
        raise ParameterError(f"need 0 < s < 1/2, got {s}")
    tau = 1.0 - 2.0 * s
    x = ((1.0 - tau * tau) ** 2 * math.log((2.0 - s) / (1.0 - s))
         / ((1.0 + tau * tau) * tau))
    return math.exp(-math.sqrt(x))
