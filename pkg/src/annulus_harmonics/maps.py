"""Radial harmonic diffeomorphisms between annuli on the sphere and the disk.

A radial map w(z) = g(|z|) z/|z| of A(r_in, 1) onto A(tau, sigma) is harmonic
for the target density exactly when y(x) = g(e^x) satisfies the first
integral

    y'(x)^2 = y^2 + c (1 + y^2)^2      (sphere target),
    y'(x)^2 = y^2 + c (1 - y^2)^2      (hyperbolic-disk target),

for a constant c.  Inverting the quadrature r = exp(int_sigma^y dz/sqrt(...))
produces the map; the admissibility boundary c = -(1/tau + tau)^-2 (sphere)
or c = -(1/tau - tau)^-2 (disk) gives the extremal family attaining the
smallest domain inner radius.  At the extremal constant the integrand has an
inverse-square-root zero at z = tau which is removed by the substitution
z = tau + u^2 together with the exact factorization of the radicand.

The classical Euclidean counterparts f(z) = A z + B / conj(z) are provided by
``nitsche_euclidean_map``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import BPoly

from ._quad import DEFAULT_REL_TOL, adaptive_quad
from .errors import DomainError, ParameterError

SPHERE = "sphere"
HYPERBOLIC = "hyperbolic"
_SURFACES = (SPHERE, HYPERBOLIC)

# c within this relative distance of the admissibility boundary switches the
# tabulation to endpoint-clustered grading.
NEAR_EXTREMAL_REL = 1e-6
BOUNDARY_TOL = 1e-9   # |z| may exceed the annulus by this much in evaluate()


def _check_surface(surface):
    if surface not in _SURFACES:
        raise ParameterError(f"surface must be one of {_SURFACES}, got {surface!r}")


def radicand(surface, y, c):
    """y^2 + c (1 +/- y^2)^2, the square of r g'(r) at image radius y."""
    _check_surface(surface)
    arr = np.asarray(y, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise DomainError(f"image radius y must lie in (0, 1], got {y}")
    sign = 1.0 if surface == SPHERE else -1.0
    out = arr * arr + c * (1.0 + sign * arr * arr) ** 2
    return float(out) if np.ndim(y) == 0 else out


def radicand_prime(surface, y, c):
    """d/dy of ``radicand``."""
    _check_surface(surface)
    arr = np.asarray(y, dtype=float)
    sign = 1.0 if surface == SPHERE else -1.0
    out = 2.0 * arr + 4.0 * sign * c * arr * (1.0 + sign * arr * arr)
    return float(out) if np.ndim(y) == 0 else out


def extremal_constant(surface, tau):
    """Smallest admissible first-integral constant for inner image radius tau."""
    _check_surface(surface)
    if not 0.0 < tau < 1.0:
        raise ParameterError(f"tau must lie in (0, 1), got {tau}")
    if surface == SPHERE:
        return -((tau / (1.0 + tau * tau)) ** 2)
    return -((tau / (1.0 - tau * tau)) ** 2)


@dataclass(frozen=True)
class RadialMapParams:
    """Parameters (surface, c, tau, sigma) of one radial harmonic map.

    Requires 0 < tau < sigma <= 1 and c at or above the admissibility
    boundary.  For the sphere, sigma = 1 is allowed for construction but the
    hemisphere-type modulus bound no longer applies (``bound_applicable``).
    """

    surface: str
    c: float
    tau: float
    sigma: float

    def __post_init__(self):
        _check_surface(self.surface)
        if not 0.0 < self.tau < self.sigma <= 1.0:
            raise ParameterError(
                f"need 0 < tau < sigma <= 1, got tau={self.tau}, sigma={self.sigma}")
        c_min = extremal_constant(self.surface, self.tau)
        slack = 1e-13 * max(abs(c_min), 1.0)
        if self.c < c_min - slack:
            raise ParameterError(
                f"c={self.c} below the admissibility boundary {c_min} "
                f"for {self.surface}, tau={self.tau}")

    @classmethod
    def extremal(cls, surface, tau, sigma):
        return cls(surface=surface, c=extremal_constant(surface, tau),
                   tau=tau, sigma=sigma)

    @property
    def extremal_c(self):
        return extremal_constant(self.surface, self.tau)

    @property
    def is_exactly_extremal(self):
        c_min = self.extremal_c
        return abs(self.c - c_min) <= 8.0 * np.finfo(float).eps * max(abs(c_min), 1e-300)

    @property
    def is_near_extremal(self):
        c_min = self.extremal_c
        return (self.c - c_min) <= NEAR_EXTREMAL_REL * max(abs(c_min), 1.0)

    @property
    def bound_applicable(self):
        """False for the sphere with sigma = 1 (image touches the equator)."""
        return self.surface != SPHERE or self.sigma < 1.0


# -- quadrature of 1/sqrt(radicand) -------------------------------------------

def _factored_positive_part(surface, tau, u):
    """radicand(tau + u^2) / u^2 at the exact extremal constant (smooth, > 0)."""
    y = tau + u * u
    if surface == SPHERE:
        a = tau / (1.0 + tau * tau)
        return a * (1.0 / tau - tau - u * u) * (y + a * (1.0 + y * y))
    a = tau / (1.0 - tau * tau)
    return (1.0 + tau * y) / (1.0 - tau * tau) * (y + a * (1.0 - y * y))


def _inverse_sqrt_integral(params, y_lo, y_hi, rel_tol):
    """int_{y_lo}^{y_hi} dz / sqrt(radicand(z)) with endpoint-safe handling."""
    if y_hi <= y_lo:
        return 0.0
    surface, c, tau = params.surface, params.c, params.tau
    if params.is_exactly_extremal:
        f = lambda u: 2.0 / math.sqrt(_factored_positive_part(surface, tau, u))
        return adaptive_quad(f, math.sqrt(y_lo - tau), math.sqrt(y_hi - tau),
                             rel_tol=rel_tol)
    if params.is_near_extremal:
        def f(u):
            y = tau + u * u
            return 2.0 * u / math.sqrt(max(radicand(surface, y, c), 0.0))
        return adaptive_quad(f, math.sqrt(y_lo - tau), math.sqrt(y_hi - tau),
                             rel_tol=rel_tol)
    f = lambda z: 1.0 / math.sqrt(radicand(surface, z, c))
    return adaptive_quad(f, y_lo, y_hi, rel_tol=rel_tol)


def inner_radius(params, rel_tol=DEFAULT_REL_TOL):
    """Domain inner radius exp(-int_tau^sigma dz/sqrt(radicand)) in (0, 1)."""
    total = _inverse_sqrt_integral(params, params.tau, params.sigma, rel_tol)
    return math.exp(-total)


def extremal_inner_radius(surface, tau, sigma, rel_tol=DEFAULT_REL_TOL):
    """Inner radius of the extremal map: the smallest over admissible c."""
    return inner_radius(RadialMapParams.extremal(surface, tau, sigma),
                        rel_tol=rel_tol)


# -- constructed maps ----------------------------------------------------------

@dataclass(frozen=True)
class RadialHarmonicMap:
    """Tabulated radial harmonic map w(z) = g(|z|) z/|z| of A(r_in, 1).

    ``g`` interpolates the table with a two-point quintic Hermite scheme whose
    node derivatives come from the first integral, so r g'(r) agrees with
    sqrt(radicand(g(r))) to rounding at the nodes.
    """

    params: RadialMapParams
    inner_radius: float
    r_table: np.ndarray
    y_table: np.ndarray
    x_table: np.ndarray = field(repr=False)
    _spline: BPoly = field(repr=False)
    _dspline: BPoly = field(repr=False)
    rel_tol: float = DEFAULT_REL_TOL

    # interpolated inverse profile -------------------------------------------

    def _to_x(self, r):
        arr = np.asarray(r, dtype=float)
        if np.any(arr < self.inner_radius * (1.0 - BOUNDARY_TOL)) or \
           np.any(arr > 1.0 + BOUNDARY_TOL):
            raise DomainError(
                f"radius {r} outside the annulus [{self.inner_radius}, 1]")
        x = np.log(arr)
        return np.clip(x, self.x_table[0], 0.0)

    def g(self, r):
        """Image radius g(r), increasing from tau to sigma."""
        y = self._spline(self._to_x(r))
        y = np.clip(y, self.params.tau, self.params.sigma)
        return float(y) if np.ndim(r) == 0 else y

    def g_prime(self, r):
        """g'(r) evaluated through the first integral, sqrt(radicand(g))/r."""
        rad = radicand(self.params.surface, self.g(r), self.params.c)
        out = np.sqrt(np.maximum(rad, 0.0)) / r
        return float(out) if np.ndim(r) == 0 else out

    def evaluate(self, z):
        """w(z) = g(|z|) z/|z| on the annulus A(r_in, 1)."""
        r = np.abs(z)
        return self.g(r) * z / r

    def __call__(self, z):
        return self.evaluate(z)

    def domain_radius(self, y, rel_tol=None):
        """Forward map q_{c,sigma}(y): the domain radius with image radius y."""
        if not self.params.tau <= y <= self.params.sigma:
            raise DomainError(f"image radius {y} outside "
                              f"[{self.params.tau}, {self.params.sigma}]")
        total = _inverse_sqrt_integral(self.params, y, self.params.sigma,
                                       rel_tol or self.rel_tol)
        return math.exp(-total)

    # pointwise field equation check ------------------------------------------

    def ode_residual(self, r):
        """|ODE left side| at interior radius r.

        g and g' come from the interpolant; g'' is eliminated analytically by
        differentiating (r g')^2 = radicand(g), so the residual measures the
        tabulation/interpolation error only.
        """
        if not self.inner_radius < r < 1.0:
            raise DomainError(f"r={r} not interior to ({self.inner_radius}, 1)")
        x = math.log(r)
        y = float(np.clip(self._spline(x), self.params.tau, self.params.sigma))
        rgp = float(self._dspline(x))          # r g'(r) = dy/dx
        r2gpp = 0.5 * radicand_prime(self.params.surface, y, self.params.c) - rgp
        nonlinear = (2.0 * y / (1.0 + y * y)) * (rgp * rgp - y * y)
        if self.params.surface == SPHERE:
            return abs(r2gpp + rgp - y - nonlinear)
        nonlinear = (2.0 * y / (1.0 - y * y)) * (rgp * rgp - y * y)
        return abs(r2gpp + rgp - y + nonlinear)

    def inverted_image(self):
        """Decreasing-g companion map z -> 1/conj(w(z)) on the sphere.

        Post-composition with the sphere isometry w -> 1/conj(w) turns the
        increasing family into the decreasing one without a second quadrature
        branch.  The hyperbolic disk has no such inversion isometry.
        """
        if self.params.surface != SPHERE:
            raise ParameterError("image inversion is an isometry only on the sphere")
        return InvertedRadialMap(base=self)


@dataclass(frozen=True)
class InvertedRadialMap:
    """Sphere map with decreasing radial profile 1/g(|z|), image in |w| >= 1."""

    base: RadialHarmonicMap

    @property
    def inner_radius(self):
        return self.base.inner_radius

    def g(self, r):
        return 1.0 / self.base.g(r)

    def evaluate(self, z):
        return 1.0 / np.conj(self.base.evaluate(z))

    def __call__(self, z):
        return self.evaluate(z)


def build_map(params, table_size=512, rel_tol=DEFAULT_REL_TOL):
    """Tabulate and interpolate the radial harmonic map for ``params``.

    Node grading clusters toward the inner image radius when c is near the
    admissibility boundary (where the quadrature endpoint is singular) and is
    geometric in y otherwise, which keeps log r roughly uniform.
    """
    if table_size < 16:
        raise ParameterError(f"table_size must be >= 16, got {table_size}")
    tau, sigma = params.tau, params.sigma
    n = int(table_size)
    if params.is_near_extremal:
        u = np.linspace(0.0, math.sqrt(sigma - tau), n)
        y = tau + u * u
    else:
        y = tau * (sigma / tau) ** (np.arange(n) / (n - 1.0))
    y[0], y[-1] = tau, sigma

    seg = np.zeros(n)
    for k in range(1, n):
        seg[k] = _inverse_sqrt_integral(params, y[k - 1], y[k], rel_tol)
    # x = log r decreases from 0 at y = sigma as y moves down to tau
    x = -(np.cumsum(seg[::-1])[::-1] - seg)  # suffix sums: x[k] = -sum_{j>k} seg
    x[-1] = 0.0
    if np.any(np.diff(x) <= 0.0):
        raise ParameterError("tabulation produced a non-monotone log-radius grid")

    rad = np.maximum(radicand(params.surface, y, params.c), 0.0)
    d1 = np.sqrt(rad)                                   # dy/dx from first integral
    d2 = 0.5 * radicand_prime(params.surface, y, params.c)   # d2y/dx2
    spline = BPoly.from_derivatives(x, np.column_stack([y, d1, d2]))
    r = np.exp(x)
    for arr in (r, y, x):
        arr.flags.writeable = False
    return RadialHarmonicMap(
        params=params, inner_radius=float(r[0]), r_table=r, y_table=y,
        x_table=x, _spline=spline, _dspline=spline.derivative(), rel_tol=rel_tol)


# -- classical Euclidean maps --------------------------------------------------

@dataclass(frozen=True)
class EuclideanNitscheMap:
    """Euclidean harmonic map A z + B/conj(z) of A(r1, 1) onto A(rho, 1).

    rho = 0 degenerates to the punctured-disk map (z - r1^2/conj(z))/(1-r1^2);
    rho may not exceed 2 r1 / (1 + r1^2), beyond which no univalent harmonic
    map of this annulus exists.
    """

    r1: float
    rho: float
    a_coef: float
    b_coef: float

    def evaluate(self, z):
        return self.a_coef * z + self.b_coef / np.conj(z)

    def __call__(self, z):
        return self.evaluate(z)


def nitsche_euclidean_map(r1, rho):
    if not 0.0 < r1 < 1.0:
        raise ParameterError(f"need 0 < r1 < 1, got {r1}")
    limit = 2.0 * r1 / (1.0 + r1 * r1)
    if not 0.0 <= rho <= limit + 1e-12:
        raise ParameterError(
            f"rho={rho} outside [0, {limit}]: the image annulus A({rho}, 1) "
            f"cannot be covered univalently from A({r1}, 1)")
    a = (r1 * rho - 1.0) / (r1 * r1 - 1.0)
    b = (r1 * r1 - r1 * rho) / (r1 * r1 - 1.0)
    return EuclideanNitscheMap(r1=r1, rho=rho, a_coef=a, b_coef=b)
