"""Rebuild the Arimoto generator function from the margin-based alpha-loss.

For a margin loss ``l``, ``f(u) = -inf_t (u l(t) + l(-t))`` is convex; with
the alpha-loss this recovers ``f_alpha`` up to an additive constant. Here the
infimum is located numerically (golden-section search) so the result is an
independent check on the closed form in :mod:`alphagan.arimoto`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, xlogy

from . import kernels
from .alpha_loss import AlphaLike, as_alpha, log_sigmoid
from .arimoto import equilibrium_constant, f_alpha, stable_power_sum
from .errors import NegativeError, OutOfRangeError

__all__ = [
    "MarginInfimum",
    "margin_infimum_closed_form",
    "margin_infimum",
    "stationarity_residual",
    "reconstruct_f",
    "margin_generator",
    "perspective_gap",
    "perspective_symmetry_check",
]


@dataclass(frozen=True)
class MarginInfimum:
    value: float
    """Closed-form infimum."""
    numeric_value: float
    """Objective evaluated at the located minimizer."""
    argmin_t: float
    """Located minimizer; ``-inf`` / ``+inf`` when the infimum is not attained."""


def margin_infimum_closed_form(alpha: AlphaLike, eta):
    """``(alpha/(alpha-1)) * (1 - (eta^alpha + (1-eta)^alpha)^(1/alpha))`` and its limits."""
    a = as_alpha(alpha)
    e = np.asarray(eta, dtype=np.float64)
    if a.is_inf:
        out = np.minimum(e, 1.0 - e)
    elif a.is_one:
        out = -(xlogy(e, e) + xlogy(1.0 - e, 1.0 - e))
    else:
        out = a.scale * (1.0 - stable_power_sum(e, 1.0 - e, a.value))
    return float(out) if np.ndim(eta) == 0 else out


def _eta_array(eta):
    e = np.asarray(eta, dtype=np.float64)
    if np.any(~((e >= 0.0) & (e <= 1.0))):
        raise OutOfRangeError("eta must lie in [0, 1]")
    return e


def _numeric(alpha, e):
    """Numeric infimum over t; handles the unattained endpoints analytically."""
    a = as_alpha(alpha)
    flat = e.ravel()
    arg = np.empty_like(flat)
    val = np.empty_like(flat)
    lo_end = flat == 0.0
    hi_end = flat == 1.0
    inner = ~(lo_end | hi_end)
    arg[lo_end], val[lo_end] = -np.inf, 0.0
    arg[hi_end], val[hi_end] = np.inf, 0.0
    if np.any(inner):
        t, v = kernels.margin_golden(flat[inner], a.value)
        arg[inner], val[inner] = t, v
    return arg.reshape(e.shape), val.reshape(e.shape)


def margin_infimum(alpha: AlphaLike, eta: float) -> MarginInfimum:
    """Infimum over t of ``eta * l(t) + (1 - eta) * l(-t)`` for the margin alpha-loss."""
    e = _eta_array(eta)
    if e.ndim != 0:
        raise OutOfRangeError("margin_infimum takes a scalar eta")
    arg, val = _numeric(alpha, e)
    return MarginInfimum(margin_infimum_closed_form(alpha, float(e)), float(val), float(arg))


def stationarity_residual(alpha: AlphaLike, eta: float, t: float) -> float:
    """Derivative of the margin objective at ``t`` (zero at an interior minimum).

    Uses ``d/dt l(t) = -sigmoid(t)^((alpha-1)/alpha) * sigmoid(-t)``.
    """
    a = as_alpha(alpha)
    c = 1.0 if a.is_inf else (0.0 if a.is_one else a.exponent)
    dl_t = -math.exp(c * float(log_sigmoid(t))) * float(expit(-t))
    dl_mt = -math.exp(c * float(log_sigmoid(-t))) * float(expit(t))
    return eta * dl_t - (1.0 - eta) * dl_mt


def reconstruct_f(alpha: AlphaLike, u):
    """``-inf_t (u l(t) + l(-t)) - (alpha/(alpha-1))(2^(1/alpha) - 2)``, numerically.

    Substitutes ``eta = u / (1 + u)`` so the infimum is ``(1 + u)`` times the
    normalized margin infimum.
    """
    uu = np.asarray(u, dtype=np.float64)
    if np.any(uu < 0):
        raise NegativeError("u must be non-negative")
    eta = uu / (1.0 + uu)
    _, val = _numeric(alpha, eta)
    out = -(1.0 + uu) * val - equilibrium_constant(alpha)
    return float(out) if np.ndim(u) == 0 else out


def margin_generator(alpha: AlphaLike, u):
    """``f(u) = -inf_t (u l(t) + l(-t))`` in closed form, i.e. ``f_alpha + const``.

    This is the generator the margin construction produces before the
    constant is removed. It differs from ``f_alpha`` by a constant, so both
    give the same divergence, but only this one satisfies ``f(u) = u f(1/u)``
    exactly (``f_alpha`` picks up a linear term ``const * (u - 1)``).
    """
    return f_alpha(alpha, u) + equilibrium_constant(alpha)


def perspective_gap(alpha: AlphaLike, u_grid) -> np.ndarray:
    """``|f(u) - u f(1/u)|`` for the margin generator on a grid in (0, inf)."""
    u = np.asarray(u_grid, dtype=np.float64)
    if np.any(u <= 0) or not np.all(np.isfinite(u)):
        raise OutOfRangeError("grid points must be positive and finite")
    return np.abs(margin_generator(alpha, u) - u * margin_generator(alpha, 1.0 / u))


def perspective_symmetry_check(alpha: AlphaLike, u_grid, tol: float = 1e-9) -> bool:
    """True iff ``|f(u) - u f(1/u)| <= tol`` on every grid point (margin generator)."""
    return bool(np.all(perspective_gap(alpha, u_grid) <= tol))
