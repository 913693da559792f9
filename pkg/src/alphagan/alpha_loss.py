"""alpha-loss in probability, binary-classification and margin form.

The order ``alpha`` ranges over ``(0, inf]``. Two points need care:

* ``alpha = 1`` is a removable singularity of ``alpha / (alpha - 1)``;
  within ``ALPHA_ONE_TOL`` of 1 the log-loss closed form is used.
* ``alpha = inf`` is represented by ``math.inf`` and always takes the
  exact ``1 - p`` branch, never a large-float approximation.

All loss functions accept scalars or numpy arrays and return the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import expit, log_expit

from .errors import OutOfRangeError

__all__ = [
    "AlphaParam",
    "as_alpha",
    "ALPHA_ONE_TOL",
    "PROB_FLOOR",
    "sigmoid",
    "log_sigmoid",
    "loss_prob",
    "loss_binary",
    "loss_margin",
    "cross_entropy",
    "UniformGuessReport",
    "check_uniform_guess_condition",
]

ALPHA_ONE_TOL = 1e-9
PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class AlphaParam:
    """Validated order alpha in ``(0, inf]``."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v) or v <= 0:
            raise OutOfRangeError(f"alpha must lie in (0, inf], got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def parse(cls, text: str) -> "AlphaParam":
        """Parse a decimal literal or the token ``inf``."""
        t = text.strip().lower()
        if t in ("inf", "infinity", "+inf"):
            return cls(math.inf)
        try:
            if "/" in t:
                num, den = t.split("/", 1)
                return cls(float(num) / float(den))
            return cls(float(t))
        except (ValueError, ZeroDivisionError):
            raise OutOfRangeError(f"cannot parse alpha from {text!r}") from None

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.value)

    @property
    def is_one(self) -> bool:
        return abs(self.value - 1.0) < ALPHA_ONE_TOL

    @property
    def exponent(self) -> float:
        """``(alpha - 1) / alpha``, the power applied to probabilities."""
        return 1.0 if self.is_inf else (self.value - 1.0) / self.value

    @property
    def scale(self) -> float:
        """``alpha / (alpha - 1)``; undefined on the alpha=1 branch."""
        return 1.0 if self.is_inf else self.value / (self.value - 1.0)

    def __str__(self):
        return "inf" if self.is_inf else repr(self.value)

    def __float__(self):
        return self.value


AlphaLike = Union[AlphaParam, float, int, str]


def as_alpha(alpha: AlphaLike) -> AlphaParam:
    if isinstance(alpha, AlphaParam):
        return alpha
    if isinstance(alpha, str):
        return AlphaParam.parse(alpha)
    return AlphaParam(alpha)


def sigmoid(t):
    return expit(t)


def log_sigmoid(t):
    return log_expit(t)


def _scalar_or_array(x, like):
    return float(x) if np.ndim(like) == 0 else x


def _alpha_branch(a: AlphaParam, log_p):
    """Evaluate the loss given ``log p`` (finite, non-positive)."""
    if a.is_inf:
        return -np.expm1(log_p)
    if a.is_one:
        return -log_p
    # (alpha/(alpha-1)) * (1 - p^((alpha-1)/alpha)), without cancellation
    return a.scale * -np.expm1(a.exponent * log_p)


def loss_prob(alpha: AlphaLike, p_hat, *, return_clamped: bool = False):
    """alpha-loss of a predicted probability ``p_hat`` of the true label.

    For ``alpha <= 1`` the loss diverges at 0, so ``p_hat`` is floored at
    ``PROB_FLOOR``; pass ``return_clamped=True`` to also get a flag (or mask)
    telling whether the floor was applied.
    """
    a = as_alpha(alpha)
    p = np.asarray(p_hat, dtype=np.float64)
    if np.any(~((p >= 0.0) & (p <= 1.0))):
        raise OutOfRangeError("p_hat must lie in [0, 1]")
    clamped = np.zeros(p.shape, dtype=bool)
    if not a.is_inf and a.value <= 1.0 + ALPHA_ONE_TOL:
        clamped = p < PROB_FLOOR
        p = np.maximum(p, PROB_FLOOR)
    if a.is_inf:
        out = 1.0 - p
    else:
        with np.errstate(divide="ignore"):
            out = _alpha_branch(a, np.log(p))
    out = _scalar_or_array(out, p_hat)
    if return_clamped:
        return out, (bool(clamped) if np.ndim(p_hat) == 0 else clamped)
    return out


def loss_binary(alpha: AlphaLike, y, y_hat, *, return_clamped: bool = False):
    """Binary-label alpha-loss; ``y_hat`` is the predicted probability of ``y = 1``."""
    y_arr = np.asarray(y)
    if np.any((y_arr != 0) & (y_arr != 1)):
        raise OutOfRangeError("labels must be 0 or 1")
    yh = np.asarray(y_hat, dtype=np.float64)
    if np.any(~((yh >= 0.0) & (yh <= 1.0))):
        raise OutOfRangeError("y_hat must lie in [0, 1]")
    p_true = np.where(y_arr == 1, yh, 1.0 - yh)
    out = loss_prob(alpha, p_true, return_clamped=return_clamped)
    if np.ndim(y) == 0 and np.ndim(y_hat) == 0:
        if return_clamped:
            return float(out[0]), bool(out[1])
        return float(out)
    return out


def cross_entropy(y, y_hat):
    """Binary cross-entropy, identical to ``loss_binary(1, y, y_hat)``."""
    return loss_binary(1.0, y, y_hat)


def loss_margin(alpha: AlphaLike, t):
    """Margin-based alpha-loss ``loss_prob(alpha, sigmoid(t))``.

    Evaluated through ``log sigmoid(t)`` so that large negative margins do not
    underflow. Accepts ``t = +-inf``.
    """
    a = as_alpha(alpha)
    tt = np.asarray(t, dtype=np.float64)
    if a.is_inf:
        out = expit(-tt)
    else:
        with np.errstate(over="ignore"):
            out = _alpha_branch(a, log_expit(tt))
    return _scalar_or_array(out, t)


@dataclass(frozen=True)
class UniformGuessReport:
    holds: bool
    worst_violation: float
    worst_t: float


def check_uniform_guess_condition(alpha: AlphaLike, grid_size: int = 1001) -> UniformGuessReport:
    """Check that ``phi(t) + psi(t)`` peaks at ``t = 1/2`` on a grid of ``[0, 1]``.

    Here ``phi = -loss(1, .)`` and ``psi = -loss(0, .)``; the condition means
    the optimal discriminator guesses 1/2 when real and fake coincide.
    """
    if grid_size < 3:
        raise OutOfRangeError("grid_size must be >= 3")
    t = np.linspace(0.0, 1.0, grid_size)
    total = -loss_binary(alpha, np.ones_like(t), t) - loss_binary(alpha, np.zeros_like(t), t)
    half = -loss_binary(alpha, 1, 0.5) - loss_binary(alpha, 0, 0.5)
    excess = total - half
    i = int(np.argmax(excess))
    worst = float(excess[i])
    return UniformGuessReport(bool(worst <= 1e-12), worst, float(t[i]))
