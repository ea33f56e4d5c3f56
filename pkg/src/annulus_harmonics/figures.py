"""Deterministic data pipelines behind the four survey figures.

Each pipeline returns (header, rows) of plain floats ready for CSV output:

* figure 1: the modulus (1/2pi) log(1/h(tau)) of the extremal sphere domains
  with sigma = 1, plus an endpoint extrapolation of the tau -> 1 limit;
* figures 2/3: the extremal sphere inner radius against the closed-form
  necessary lower bound, for fixed sigma < 1;
* figure 4: the hyperbolic comparison functions f1 >= f2 along the slice
  tau = 1 - 2s, sigma = 1 - s.

Row-wise orderings that the underlying inequalities guarantee are asserted
and raise OrderingViolation (a hard failure, exit status 2 in the CLI).
"""

from __future__ import annotations

import math

import numpy as np

from ._quad import DEFAULT_REL_TOL
from .bounds import f1, f2, sphere_r_lower
from .errors import OrderingViolation, ParameterError
from .maps import SPHERE, extremal_inner_radius

ORDER_MARGIN = 1e-12


def default_tau_grid(points=50, upper=1.0):
    """tau_k = upper * k/(points+1), k = 1..points: an open grid in (0, upper)."""
    return upper * np.arange(1, points + 1) / (points + 1.0)


def default_s_grid(points=101):
    """s_k = k/(2 points + 1): an open grid in (0, 1/2)."""
    return np.arange(1, points + 1) / (2.0 * points + 1.0)


def extremal_modulus(tau, rel_tol=DEFAULT_REL_TOL):
    """(1/2pi) log(1/h(tau)) for the extremal sphere family with sigma = 1."""
    h = extremal_inner_radius(SPHERE, tau, 1.0, rel_tol=rel_tol)
    return h, math.log(1.0 / h) / (2.0 * math.pi)


def aitken_limit(seq):
    """One Aitken delta-squared step on the last three terms."""
    s0, s1, s2 = seq[-3], seq[-2], seq[-1]
    denom = (s2 - s1) - (s1 - s0)
    if denom == 0.0:
        return s2
    return s2 - (s2 - s1) ** 2 / denom


def figure1(tau_grid=None, rel_tol=DEFAULT_REL_TOL):
    """Rows (tau, h, modulus) plus a footer row with the extrapolated limit.

    The footer evaluates tau = 1 - 10^{-k}, k = 2..4, accelerates the modulus
    sequence with Aitken's method, and is emitted with tau = 1 as a marker.
    """
    if tau_grid is None:
        tau_grid = default_tau_grid()
    rows = []
    for tau in tau_grid:
        if not 0.0 < tau < 1.0:
            raise ParameterError(f"tau grid must lie in (0, 1), got {tau}")
        h, mod = extremal_modulus(float(tau), rel_tol)
        rows.append((float(tau), h, mod))
    mods = [extremal_modulus(1.0 - 10.0 ** -k, rel_tol)[1] for k in (2, 3, 4)]
    mod_limit = aitken_limit(mods)
    footer = (1.0, math.exp(-2.0 * math.pi * mod_limit), mod_limit)
    return ("tau", "h_extremal", "modulus"), rows, footer


def figure23(sigma, tau_grid=None, points=50, rel_tol=DEFAULT_REL_TOL):
    """Rows (tau, h_extremal, h_lower) for fixed sigma < 1, ordering asserted."""
    if not 0.0 < sigma < 1.0:
        raise ParameterError(f"sigma must lie in (0, 1), got {sigma}")
    if tau_grid is None:
        tau_grid = default_tau_grid(points, upper=sigma)
    rows = []
    for tau in tau_grid:
        if not 0.0 < tau < sigma:
            raise ParameterError(f"tau grid must lie in (0, sigma), got {tau}")
        h = extremal_inner_radius(SPHERE, float(tau), sigma, rel_tol=rel_tol)
        h0 = sphere_r_lower(sigma, float(tau))
        if h - h0 < -ORDER_MARGIN:
            raise OrderingViolation(
                f"extremal inner radius {h} fell below the closed-form lower "
                f"bound {h0} at tau={tau}, sigma={sigma}")
        rows.append((float(tau), h, h0))
    return ("tau", "h_extremal", "h_lower"), rows


def figure4(s_grid=None, points=101, rel_tol=DEFAULT_REL_TOL):
    """Rows (s, f1, f2) on a grid in (0, 1/2), ordering f1 >= f2 asserted."""
    if s_grid is None:
        s_grid = default_s_grid(points)
    rows = []
    for s in s_grid:
        v1 = f1(float(s), rel_tol=rel_tol)
        v2 = f2(float(s))
        if v1 - v2 < -ORDER_MARGIN:
            raise OrderingViolation(
                f"f1({s}) = {v1} fell below f2({s}) = {v2}")
        rows.append((float(s), v1, v2))
    return ("s", "f1", "f2"), rows
