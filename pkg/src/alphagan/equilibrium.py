"""Closed-form Nash equilibrium of the alpha-GAN game and its brute-force check."""

from __future__ import annotations

import numpy as np

from . import kernels
from .alpha_loss import AlphaLike, as_alpha
from .arimoto import arimoto_values, equilibrium_constant
from .errors import OutOfRangeError, SupportMismatchError
from .prob_core import DiscreteDistribution
from .value_game import TabularDiscriminator

__all__ = [
    "tilted_ratio",
    "optimal_discriminator",
    "brute_force_discriminator",
    "generator_objective",
]


def tilted_ratio(alpha: AlphaLike, a, b) -> np.ndarray:
    """``a^alpha / (a^alpha + b^alpha)`` elementwise, computed in log space.

    Atoms with ``a == b`` (including both zero) give 1/2; at alpha = inf
    this is the maximum-likelihood rule.
    """
    al = as_alpha(alpha)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out = np.full(np.broadcast(a, b).shape, 0.5)
    if al.is_inf:
        out = np.where(a > b, 1.0, np.where(a < b, 0.0, 0.5))
        return out
    both = (a > 0) & (b > 0)
    with np.errstate(divide="ignore", over="ignore"):
        z = al.value * (np.log(np.where(both, b, 1.0)) - np.log(np.where(both, a, 1.0)))
        r = 1.0 / (1.0 + np.exp(z))
    out = np.where(both, r, out)
    out = np.where((a > 0) & (b == 0), 1.0, out)
    out = np.where((a == 0) & (b > 0), 0.0, out)
    # exact ties stay at 1/2 regardless of rounding in the logs
    return np.where(a == b, 0.5, out)


def _pair(p_r: DiscreteDistribution, p_g: DiscreteDistribution):
    if p_r.support_size != p_g.support_size:
        raise SupportMismatchError(
            f"support sizes differ: {p_r.support_size} vs {p_g.support_size}"
        )
    return p_r.probs, p_g.probs


def optimal_discriminator(alpha: AlphaLike, p_r: DiscreteDistribution, p_g: DiscreteDistribution) -> TabularDiscriminator:
    """Discriminator maximizing the value for a fixed generator distribution."""
    pr, pg = _pair(p_r, p_g)
    return TabularDiscriminator(tilted_ratio(alpha, pr, pg))


def brute_force_discriminator(
    alpha: AlphaLike, p_r: DiscreteDistribution, p_g: DiscreteDistribution, grid: int = 1001
) -> TabularDiscriminator:
    """Per-atom numerical maximizer of the pointwise objective.

    Scans ``grid`` equally spaced outputs in ``[0, 1]`` and refines the best
    one by golden-section search to 1e-10. Independent of the closed form.
    """
    if grid < 1000:
        raise OutOfRangeError("grid must be >= 1000")
    pr, pg = _pair(p_r, p_g)
    a = as_alpha(alpha)
    return TabularDiscriminator(kernels.brute_force_argmax(pr, pg, a.value, grid))


def generator_objective(alpha: AlphaLike, p_r: DiscreteDistribution, p_g: DiscreteDistribution) -> float:
    """Value of the game once the discriminator plays optimally.

    Equals the Arimoto divergence shifted by ``(alpha/(alpha-1))(2^(1/alpha) - 2)``,
    so it is minimized exactly when ``p_g == p_r``.
    """
    pr, pg = _pair(p_r, p_g)
    return float(arimoto_values(alpha, pr, pg)) + equilibrium_constant(alpha)
