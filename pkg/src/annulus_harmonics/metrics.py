"""Radially symmetric conformal metrics h(|z|^2)|dz| and their geodesic structure.

A metric here is a positive density of the form h(t), t = |z|^2, on a chart of
a surface.  The module provides the built-in densities (Euclidean plane,
Poincare disk, punctured hyperbolic disk, hyperbolic annulus A(1/R, R),
round sphere, cigar soliton), Gauss curvature K = -(4 t h'/h)' / h^2,
geodesic distance along rays, geodesic polar profiles (the distance function
omega and its inverse g, coupled by 1 = g'(rho) h(g(rho)^2)), and a direct
check that radial segments solve the geodesic equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import BPoly
from scipy.optimize import brentq

from ._quad import DEFAULT_REL_TOL, adaptive_quad
from .errors import DomainError, IntegrationError, ParameterError

EUCLIDEAN = "euclidean"
HYPERBOLIC_DISK = "hyperbolic_disk"
PUNCTURED_DISK = "punctured_disk"
HYPERBOLIC_ANNULUS = "hyperbolic_annulus"
SPHERE = "sphere"
CIGAR = "cigar"
CUSTOM = "custom"

BASE_ORIGIN = "origin"
BASE_UNIT_CIRCLE = "unit_circle"

ROOT_TOL = 1e-12  # tolerance of the bracketing root-finder used for g


@dataclass(frozen=True)
class RadialMetric:
    """A conformal density h(|z|^2) with its analytic derivative.

    ``h`` and ``h_prime`` accept floats or numpy arrays of t = |z|^2 values.
    ``h_second`` is the analytic second derivative where available (all
    built-ins); custom metrics fall back to central differences of h_prime.
    ``t_domain`` is (lo, hi) with ``t_lo_open`` marking whether lo is excluded.
    """

    kind: str
    h: Callable
    h_prime: Callable
    t_domain: tuple
    base: str
    t_lo_open: bool = False
    R: Optional[float] = None
    h_second: Optional[Callable] = None

    # -- basic access ------------------------------------------------------

    def _check_t(self, t):
        lo, hi = self.t_domain
        bad = (t < lo) | (t > hi) if isinstance(t, np.ndarray) else (t < lo or t > hi)
        if np.any(bad):
            raise DomainError(f"t={t} outside t-domain {self.t_domain} of {self.kind}")
        if self.t_lo_open:
            at_lo = (t == lo) if not isinstance(t, np.ndarray) else np.any(t == lo)
            if at_lo:
                raise DomainError(f"t={lo} excluded from t-domain of {self.kind}")

    def density(self, t):
        """h(t) for t = |z|^2 in the chart domain."""
        self._check_t(t)
        return self.h(t)

    def density_at_radius(self, r):
        """Density evaluated at chart radius r, i.e. h(r^2)."""
        return self.density(np.asarray(r) ** 2 if isinstance(r, np.ndarray) else r * r)

    def _h_second(self, t):
        if self.h_second is not None:
            return self.h_second(t)
        # Central differences of the supplied h'; step scales like sqrt(t) to
        # avoid cancellation near t = 0.
        step = 1e-5 * math.sqrt(t) if t > 0 else 1e-9
        lo, hi = self.t_domain
        t_minus, t_plus = t - step, t + step
        if t_minus <= lo:
            t_minus, t_plus = t, t + 2 * step
        if t_plus >= hi:
            t_minus, t_plus = t - 2 * step, t
        return (self.h_prime(t_plus) - self.h_prime(t_minus)) / (t_plus - t_minus)

    def curvature(self, t):
        """Gauss curvature K(t) = -(4 t h'/h)'(t) / h(t)^2."""
        self._check_t(t)
        h = self.h(t)
        hp = self.h_prime(t)
        hpp = self._h_second(t)
        # (4 t h'/h)' = (4/h)(h' + t h'' - t h'^2 / h)
        phi_prime = 4.0 * (hp + t * hpp - t * hp * hp / h) / h
        return -phi_prime / (h * h)

    def monotone_quantity(self, t):
        """4 t h'(t)/h(t); nondecreasing iff K <= 0, nonincreasing iff K >= 0."""
        self._check_t(t)
        return 4.0 * t * self.h_prime(t) / self.h(t)

    def classify_curvature(self, t_range, samples=64, rel_tol=1e-9):
        """Classify curvature sign on ``t_range`` from monotone_quantity samples.

        Returns one of "negative", "zero", "positive", "indefinite".
        """
        lo, hi = t_range
        if samples < 3:
            raise ParameterError("samples must be >= 3")
        ts = np.linspace(lo, hi, samples)
        phi = np.array([self.monotone_quantity(float(t)) for t in ts])
        diffs = np.diff(phi)
        tol = rel_tol * (np.max(np.abs(phi)) + 1e-12)
        if np.all(np.abs(diffs) <= tol):
            return "zero"
        if np.all(diffs >= -tol):
            return "negative"
        if np.all(diffs <= tol):
            return "positive"
        return "indefinite"

    # -- distances and profiles ---------------------------------------------

    def radial_distance(self, a, b, rel_tol=DEFAULT_REL_TOL):
        """Geodesic length of the radial segment [a, b], i.e. int_a^b h(s^2) ds."""
        if not 0.0 <= a <= b:
            raise ParameterError(f"need 0 <= a <= b, got a={a}, b={b}")
        return adaptive_quad(lambda s: self.h(s * s), a, b, rel_tol=rel_tol)

    def profile(self, r_max=None, table_size=800, rel_tol=DEFAULT_REL_TOL):
        """Geodesic polar profile (omega, g) about the metric's base set."""
        return _build_profile(self, r_max, table_size, rel_tol)

    def verify_radial_geodesic(self, a, b, steps=4096, rel_tol=DEFAULT_REL_TOL):
        """Integrate the geodesic system from (a, 0) along the x-axis up to x = b.

        Returns a GeodesicCheck with the maximal |y| along the trajectory and
        the discrepancy between the integrated arc length and the radial
        distance quadrature.  Both vanish under step refinement for a correct
        metric implementation.
        """
        return _verify_radial_geodesic(self, a, b, steps, rel_tol)


# -- built-in densities ------------------------------------------------------

def euclidean():
    return RadialMetric(
        kind=EUCLIDEAN,
        h=lambda t: np.ones_like(t) if isinstance(t, np.ndarray) else 1.0,
        h_prime=lambda t: np.zeros_like(t) if isinstance(t, np.ndarray) else 0.0,
        h_second=lambda t: np.zeros_like(t) if isinstance(t, np.ndarray) else 0.0,
        t_domain=(0.0, math.inf),
        base=BASE_ORIGIN,
    )


def hyperbolic_disk():
    return RadialMetric(
        kind=HYPERBOLIC_DISK,
        h=lambda t: 2.0 / (1.0 - t),
        h_prime=lambda t: 2.0 / (1.0 - t) ** 2,
        h_second=lambda t: 4.0 / (1.0 - t) ** 3,
        t_domain=(0.0, 1.0),
        base=BASE_ORIGIN,
    )


def punctured_disk():
    def h(t):
        return 1.0 / (np.sqrt(t) * np.log(1.0 / np.sqrt(t)))

    def h_prime(t):
        log_t = np.log(t)
        return t ** -1.5 * (1.0 / log_t + 2.0 / log_t ** 2)

    def h_second(t):
        log_t = np.log(t)
        return t ** -2.5 * (-1.5 / log_t - 4.0 / log_t ** 2 - 4.0 / log_t ** 3)

    return RadialMetric(
        kind=PUNCTURED_DISK, h=h, h_prime=h_prime, h_second=h_second,
        t_domain=(0.0, 1.0), t_lo_open=True, base=BASE_ORIGIN,
    )


def hyperbolic_annulus(R):
    """Hyperbolic metric of the annulus A(1/R, R), R > 1; base is |z| = 1."""
    if not R > 1.0:
        raise ParameterError(f"hyperbolic annulus needs R > 1, got {R}")
    L = math.log(R)
    k = math.pi / (4.0 * L)

    def h(t):
        return (math.pi / (2.0 * L)) / (np.sqrt(t) * np.cos(k * np.log(t)))

    def h_prime(t):
        u = k * np.log(t)
        return (math.pi / (2.0 * L)) * t ** -1.5 / np.cos(u) * (-0.5 + k * np.tan(u))

    def h_second(t):
        u = k * np.log(t)
        sec = 1.0 / np.cos(u)
        v = -0.5 + k * np.tan(u)
        return (math.pi / (2.0 * L)) * t ** -2.5 * sec * (
            -1.5 * v + k * np.tan(u) * v + k * k * sec * sec)

    return RadialMetric(
        kind=HYPERBOLIC_ANNULUS, h=h, h_prime=h_prime, h_second=h_second,
        t_domain=(1.0 / R ** 2, R ** 2), t_lo_open=True,
        base=BASE_UNIT_CIRCLE, R=R,
    )


def sphere():
    return RadialMetric(
        kind=SPHERE,
        h=lambda t: 2.0 / (1.0 + t),
        h_prime=lambda t: -2.0 / (1.0 + t) ** 2,
        h_second=lambda t: 4.0 / (1.0 + t) ** 3,
        t_domain=(0.0, math.inf),
        base=BASE_ORIGIN,
    )


def cigar():
    return RadialMetric(
        kind=CIGAR,
        h=lambda t: (1.0 + t) ** -0.5,
        h_prime=lambda t: -0.5 * (1.0 + t) ** -1.5,
        h_second=lambda t: 0.75 * (1.0 + t) ** -2.5,
        t_domain=(0.0, math.inf),
        base=BASE_ORIGIN,
    )


def custom_metric(h, h_prime, t_domain, base=BASE_ORIGIN, t_lo_open=False,
                  h_second=None):
    """Wrap user-supplied h(t) and h'(t) callables as a RadialMetric."""
    lo, hi = t_domain
    if not lo < hi:
        raise ParameterError(f"empty t-domain {t_domain}")
    return RadialMetric(kind=CUSTOM, h=h, h_prime=h_prime, h_second=h_second,
                        t_domain=(float(lo), float(hi)), base=base,
                        t_lo_open=t_lo_open)


_FACTORIES = {
    EUCLIDEAN: euclidean,
    HYPERBOLIC_DISK: hyperbolic_disk,
    PUNCTURED_DISK: punctured_disk,
    SPHERE: sphere,
    CIGAR: cigar,
}


def metric_by_kind(kind, R=None):
    """Instantiate a built-in metric from its kind string."""
    if kind == HYPERBOLIC_ANNULUS:
        if R is None:
            raise ParameterError("hyperbolic_annulus requires R")
        return hyperbolic_annulus(R)
    try:
        return _FACTORIES[kind]()
    except KeyError:
        raise ParameterError(f"unknown metric kind {kind!r}") from None


# -- geodesic polar profiles --------------------------------------------------

@dataclass(frozen=True)
class GeodesicProfile:
    """Distance profile omega(r) from the base set and its inverse g(rho).

    omega is strictly increasing with omega(base radius) = 0; for the
    hyperbolic annulus the base is |z| = 1 and omega is signed (negative for
    r < 1).  The inverse satisfies 1 = g'(rho) h(g(rho)^2).
    """

    metric: RadialMetric
    base: str
    omega: Callable
    g: Callable
    r_table: np.ndarray
    rho_table: np.ndarray

    def g_many(self, rhos):
        return np.array([self.g(float(p)) for p in np.atleast_1d(rhos)])


def _closed_profile(metric, omega, g, r_lo, r_hi, table_size):
    r = np.linspace(r_lo, r_hi, table_size)
    rho = omega(r)
    return GeodesicProfile(metric=metric, base=metric.base, omega=omega, g=g,
                           r_table=r, rho_table=rho)


def _build_profile(metric, r_max, table_size, rel_tol):
    kind = metric.kind
    if kind == SPHERE:
        return _closed_profile(
            metric,
            omega=lambda r: 2.0 * np.arctan(r),
            g=lambda rho: np.tan(rho / 2.0),
            r_lo=0.0, r_hi=r_max or 20.0, table_size=table_size)
    if kind == HYPERBOLIC_DISK:
        return _closed_profile(
            metric,
            omega=lambda r: 2.0 * np.arctanh(r),
            g=lambda rho: np.tanh(rho / 2.0),
            r_lo=0.0, r_hi=r_max or 1.0 - 1e-6, table_size=table_size)
    if kind == EUCLIDEAN:
        return _closed_profile(
            metric,
            omega=lambda r: np.asarray(r, dtype=float) + 0.0,
            g=lambda rho: np.asarray(rho, dtype=float) + 0.0,
            r_lo=0.0, r_hi=r_max or 10.0, table_size=table_size)
    if kind == HYPERBOLIC_ANNULUS:
        R = metric.R
        L = math.log(R)

        def omega(r):
            return 2.0 * np.arctanh(np.tan(math.pi * np.log(r) / (4.0 * L)))

        def g(rho):
            return np.exp((4.0 * L / math.pi) * np.arctan(np.tanh(rho / 2.0)))

        span = R ** 0.999
        return _closed_profile(metric, omega=omega, g=g,
                               r_lo=1.0 / span, r_hi=span, table_size=table_size)
    if kind == PUNCTURED_DISK:
        raise ParameterError(
            "punctured disk has no origin-based profile: the distance to the "
            "puncture diverges")
    return _numeric_profile(metric, r_max or 10.0, table_size, rel_tol)


def _numeric_profile(metric, r_max, table_size, rel_tol):
    """Quadrature-tabulated profile for metrics without a closed form."""
    if metric.base != BASE_ORIGIN:
        raise ParameterError(f"numeric profile expects an origin base, "
                             f"got {metric.base}")
    lo, hi = metric.t_domain
    if r_max ** 2 > hi:
        raise ParameterError(f"r_max={r_max} outside chart")
    r = np.linspace(0.0, r_max, table_size)
    seg = np.zeros(table_size)
    for k in range(1, table_size):
        seg[k] = adaptive_quad(lambda s: metric.h(s * s), r[k - 1], r[k],
                               rel_tol=rel_tol)
    rho = np.cumsum(seg)
    # Quintic Hermite interpolation: omega' = h(r^2) and omega'' = 2 r h'(r^2)
    # are known exactly at the nodes.
    d1 = np.array([metric.h(v * v) for v in r])
    d2 = np.array([2.0 * v * metric.h_prime(v * v) for v in r])
    interp = BPoly.from_derivatives(r, np.column_stack([rho, d1, d2]))

    def omega(rr):
        return interp(rr)

    def g(p):
        if p < 0.0 or p > rho[-1]:
            raise DomainError(f"rho={p} outside tabulated range [0, {rho[-1]}]")
        return brentq(lambda rr: interp(rr) - p, 0.0, r_max, xtol=ROOT_TOL)

    return GeodesicProfile(metric=metric, base=metric.base, omega=omega, g=g,
                           r_table=r, rho_table=rho)


# -- radial geodesic verification ---------------------------------------------

@dataclass(frozen=True)
class GeodesicCheck:
    max_abs_y: float
    arclength: float
    distance: float
    arclength_error: float
    steps: int


def _geodesic_rhs(metric, state):
    x, y, vx, vy = state
    t = x * x + y * y
    ratio = metric.h_prime(t) / metric.h(t)
    px = 2.0 * x * ratio
    py = 2.0 * y * ratio
    ax = -(px * vx * vx + 2.0 * py * vx * vy - px * vy * vy)
    ay = -(-py * vx * vx + 2.0 * px * vx * vy + py * vy * vy)
    return np.array([vx, vy, ax, ay])


def _rk4_step(metric, state, ds):
    k1 = _geodesic_rhs(metric, state)
    k2 = _geodesic_rhs(metric, state + 0.5 * ds * k1)
    k3 = _geodesic_rhs(metric, state + 0.5 * ds * k2)
    k4 = _geodesic_rhs(metric, state + ds * k3)
    return state + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _verify_radial_geodesic(metric, a, b, steps, rel_tol):
    if not 0.0 < a < b:
        raise ParameterError(f"need 0 < a < b, got a={a}, b={b}")
    metric._check_t(b * b)
    distance = metric.radial_distance(a, b, rel_tol=rel_tol)
    # Unit metric speed: the affine parameter coincides with arc length.
    state = np.array([a, 0.0, 1.0 / metric.h(a * a), 0.0])
    ds = distance / steps
    max_abs_y = 0.0
    s = 0.0
    max_s = 1.25 * distance + 10.0 * ds
    crossed = False
    while s < max_s:
        prev = state
        state = _rk4_step(metric, state, ds)
        s += ds
        max_abs_y = max(max_abs_y, abs(state[1]))
        if state[0] >= b:
            crossed = True
            break
    if not crossed:
        raise IntegrationError(
            f"geodesic from r={a} failed to reach r={b} within {max_s:.3g} "
            "of affine parameter")
    # Refine the crossing inside the final step with sub-steps of the same rule.
    if prev[0] >= b:
        arclength = s - ds
    else:
        frac = brentq(lambda q: _rk4_step(metric, prev, q * ds)[0] - b,
                      0.0, 1.0, xtol=1e-15)
        arclength = s - ds + frac * ds
    return GeodesicCheck(
        max_abs_y=max_abs_y,
        arclength=arclength,
        distance=distance,
        arclength_error=abs(arclength - distance),
        steps=steps,
    )
