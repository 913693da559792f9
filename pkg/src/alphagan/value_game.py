"""The alpha-GAN value function in exact and Monte-Carlo form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .alpha_loss import AlphaLike, AlphaParam, as_alpha, loss_binary
from .errors import EmptyBatchError, OutOfRangeError, SupportMismatchError
from .prob_core import DiscreteDistribution

__all__ = [
    "D_CLAMP",
    "TabularDiscriminator",
    "ConstantDiscriminator",
    "NeuralDiscriminator",
    "value_alpha_exact",
    "value_alpha_mc",
    "general_loss_value",
    "value_from_outputs",
]

# on the alpha < 1 branch D (real) and 1 - D (fake) are floored at D_CLAMP,
# the sides where the negative power blows up
D_CLAMP = 1e-7


@dataclass(frozen=True)
class TabularDiscriminator:
    """Discriminator given by one output per support atom."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64).ravel()
        if np.any(~((v >= 0.0) & (v <= 1.0))):
            raise OutOfRangeError("discriminator outputs must lie in [0, 1]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def on_support(self, k: int) -> np.ndarray:
        if self.values.size != k:
            raise SupportMismatchError(f"table has {self.values.size} entries, support has {k}")
        return self.values

    def __call__(self, x) -> np.ndarray:
        idx = np.asarray(x).reshape(len(x), -1)[:, 0].astype(np.int64)
        return self.values[idx]


@dataclass(frozen=True)
class ConstantDiscriminator:
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise OutOfRangeError("discriminator output must lie in [0, 1]")

    def on_support(self, k: int) -> np.ndarray:
        return np.full(k, float(self.value))

    def __call__(self, x) -> np.ndarray:
        return np.full(len(x), float(self.value))


@dataclass(frozen=True)
class NeuralDiscriminator:
    """Wraps an MLP whose output layer squashes into (0, 1)."""

    model: object

    def __call__(self, x) -> np.ndarray:
        from .mlp import forward_batch

        x = np.asarray(x, dtype=np.float64)
        return forward_batch(self.model, x.reshape(len(x), -1))[:, 0]

    def on_support(self, k: int) -> np.ndarray:
        raise OutOfRangeError("a neural discriminator has no tabular form")


def _weighted_power_mean(w, d, a: AlphaParam):
    """``sum w * d^c`` skipping zero-weight entries; ``log`` on the alpha=1 branch."""
    pos = w > 0
    if not np.any(pos):
        return 0.0
    wp, dp = w[pos], d[pos]
    if a.is_one:
        with np.errstate(divide="ignore"):
            return float(np.sum(wp * np.log(dp)))
    with np.errstate(divide="ignore"):
        return float(np.sum(wp * np.power(dp, a.exponent)))


def value_from_outputs(alpha: AlphaLike, w_real, d_real, w_fake, d_fake) -> float:
    """Weighted value ``E_real[-l(1, D)] + E_fake[-l(0, D)]`` in closed form.

    ``w_*`` are probability weights (summing to 1) for the outputs ``d_*``.
    """
    a = as_alpha(alpha)
    w_real = np.asarray(w_real, dtype=np.float64)
    w_fake = np.asarray(w_fake, dtype=np.float64)
    d_real = np.asarray(d_real, dtype=np.float64)
    d_fake = np.asarray(d_fake, dtype=np.float64)
    if a.is_inf:
        return float(np.dot(w_real, d_real) - np.dot(w_fake, d_fake) - 1.0)
    if not a.is_one and a.value < 1.0:
        real = _weighted_power_mean(w_real, np.maximum(d_real, D_CLAMP), a)
        fake = _weighted_power_mean(w_fake, np.maximum(1.0 - d_fake, D_CLAMP), a)
    else:
        real = _weighted_power_mean(w_real, d_real, a)
        fake = _weighted_power_mean(w_fake, 1.0 - d_fake, a)
    if a.is_one:
        return real + fake
    return a.scale * (real + fake - 2.0)


def _support_pair(p_r: DiscreteDistribution, p_g: DiscreteDistribution):
    if p_r.support_size != p_g.support_size:
        raise SupportMismatchError(
            f"support sizes differ: {p_r.support_size} vs {p_g.support_size}"
        )
    return p_r.probs, p_g.probs


def value_alpha_exact(alpha: AlphaLike, p_r: DiscreteDistribution, p_g: DiscreteDistribution, d) -> float:
    """Exact value of the alpha-GAN game for a tabular or constant discriminator.

    At alpha = 1 this is the vanilla GAN value, at alpha = inf the IPM-style
    value ``E_r[D] - E_g[D] - 1``.
    """
    pr, pg = _support_pair(p_r, p_g)
    dv = d.on_support(pr.size)
    return value_from_outputs(alpha, pr, dv, pg, dv)


def value_alpha_mc(alpha: AlphaLike, real_samples, fake_samples, d: Callable) -> float:
    """Plug-in estimate of the value from two sample batches."""
    real_samples = np.asarray(real_samples)
    fake_samples = np.asarray(fake_samples)
    if len(real_samples) == 0 or len(fake_samples) == 0:
        raise EmptyBatchError("both sample batches must be non-empty")
    dr = np.asarray(d(real_samples), dtype=np.float64)
    df = np.asarray(d(fake_samples), dtype=np.float64)
    wr = np.full(dr.size, 1.0 / dr.size)
    wf = np.full(df.size, 1.0 / df.size)
    return value_from_outputs(alpha, wr, dr, wf, df)


def general_loss_value(loss: Callable, p_r: DiscreteDistribution, p_g: DiscreteDistribution, d) -> float:
    """Value ``E_r[-loss(1, D)] + E_g[-loss(0, D)]`` for any binary loss.

    ``loss(y, y_hat)`` must accept numpy arrays. With cross-entropy this is
    the vanilla GAN value; with an alpha-loss it equals ``value_alpha_exact``.
    """
    pr, pg = _support_pair(p_r, p_g)
    dv = d.on_support(pr.size)
    ones = np.ones_like(dv)
    zeros = np.zeros_like(dv)
    real = -np.asarray(loss(ones, dv), dtype=np.float64)
    fake = -np.asarray(loss(zeros, dv), dtype=np.float64)
    # zero-mass atoms contribute nothing even where the loss is infinite
    real = np.where(pr > 0, real, 0.0)
    fake = np.where(pg > 0, fake, 0.0)
    return float(np.sum(pr * real) + np.sum(pg * fake))


def alpha_loss_handle(alpha: AlphaLike) -> Callable:
    """Binary alpha-loss as a two-argument callable for :func:`general_loss_value`."""
    a = as_alpha(alpha)
    return lambda y, y_hat: loss_binary(a, y, y_hat)
