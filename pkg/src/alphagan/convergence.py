"""Finite experiments on convergence equivalence of Arimoto divergences."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .alpha_loss import AlphaLike, as_alpha
from .arimoto import _pair, arimoto_values, jsd, psi_alpha, tv
from .errors import OutOfRangeError, SupportMismatchError
from .prob_core import DiscreteDistribution, make_discrete

__all__ = [
    "DistSequence",
    "Verdict",
    "divergence_trace",
    "sandwich_slack",
    "equivalence_check",
    "lin_bound_slack",
    "lin_bound_check",
]

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class DistSequence:
    """A finite sequence ``P_1 .. P_n`` sharing one support, stored as an ``(n, k)`` array."""

    kind: str
    probs: np.ndarray = field(repr=False)
    params: dict = field(default_factory=dict)

    @property
    def length(self) -> int:
        return int(self.probs.shape[0])

    @property
    def support_size(self) -> int:
        return int(self.probs.shape[1])

    def __len__(self):
        return self.length

    def __getitem__(self, i) -> DiscreteDistribution:
        return DiscreteDistribution(self.probs[i])

    @classmethod
    def bernoulli_drift(cls, length: int, target: float = 0.5, start: float = 1.0) -> "DistSequence":
        """``theta_n = target + (start - target) / n`` for ``n = 1 .. length``."""
        if length < 1:
            raise OutOfRangeError("length must be >= 1")
        n = np.arange(1, length + 1, dtype=np.float64)
        theta = target + (start - target) / n
        if np.any((theta < 0) | (theta > 1)):
            raise OutOfRangeError("drift leaves [0, 1]")
        probs = np.column_stack([1.0 - theta, theta])
        return cls("bernoulli_drift", probs, {"target": target, "start": start})

    @classmethod
    def shrinking_mixture(cls, target: DiscreteDistribution, noise: DiscreteDistribution, length: int) -> "DistSequence":
        """``P_n = (1 - 1/n) target + (1/n) noise``."""
        t, z = _pair(target, noise)
        w = 1.0 / np.arange(1, length + 1, dtype=np.float64)
        probs = (1.0 - w)[:, None] * t[None, :] + w[:, None] * z[None, :]
        return cls("shrinking_mixture", probs)

    @classmethod
    def constant(cls, dist: DiscreteDistribution, length: int) -> "DistSequence":
        return cls("constant", np.tile(dist.probs, (length, 1)))

    @classmethod
    def custom(cls, dists: Sequence[DiscreteDistribution]) -> "DistSequence":
        if not dists:
            raise OutOfRangeError("sequence must be non-empty")
        k = dists[0].support_size
        if any(d.support_size != k for d in dists):
            raise SupportMismatchError("all elements must share one support")
        return cls("custom", np.stack([d.probs for d in dists]))


class Verdict(str, enum.Enum):
    BOTH_CONVERGE = "both_converge"
    NEITHER_CONVERGES = "neither_converges"
    VIOLATION = "violation"


def _check_target(seq: DistSequence, target: DiscreteDistribution):
    if seq.support_size != target.support_size:
        raise SupportMismatchError(
            f"sequence support {seq.support_size} vs target support {target.support_size}"
        )


def divergence_trace(seq: DistSequence, target: DiscreteDistribution, alphas: Sequence[AlphaLike]) -> np.ndarray:
    """Matrix whose entry ``(n, j)`` is ``D_{alpha_j}(P_n || target)``."""
    if not len(alphas):
        raise OutOfRangeError("need at least one alpha")
    _check_target(seq, target)
    cols = [arimoto_values(a, seq.probs, target.probs) for a in alphas]
    return np.column_stack(cols)


def sandwich_slack(alpha: AlphaLike, p, q):
    """Slack of ``psi(TV) <= D <= psi(1) TV``; returns ``(lower_slack, upper_slack)``.

    Both are non-negative when the bounds hold. Works row-wise on stacks.
    """
    d = arimoto_values(alpha, p, q)
    t = np.clip(np.asarray(tv(p, q)), 0.0, 1.0)
    return d - psi_alpha(alpha, t), psi_alpha(alpha, 1.0) * t - d


def _converges(trace_col: np.ndarray, tol: float) -> bool:
    tail = max(1, int(math.ceil(0.1 * trace_col.size)))
    return bool(np.max(trace_col[-tail:]) < tol)


def equivalence_check(seq: DistSequence, target: DiscreteDistribution, alpha1: AlphaLike,
                      alpha2: AlphaLike, tol: float = 1e-3) -> Verdict:
    """Compare convergence of two orders along a sequence.

    A column "converges" when the maximum over the last 10% of the trace is
    below ``tol``. The tolerance has to suit the sequence length: a slow
    sequence that is cut short can sit below ``tol`` for one order and above
    it for another.
    """
    if tol <= 0:
        raise OutOfRangeError("tol must be positive")
    trace = divergence_trace(seq, target, [alpha1, alpha2])
    c1 = _converges(trace[:, 0], tol)
    c2 = _converges(trace[:, 1], tol)
    if c1 and c2:
        return Verdict.BOTH_CONVERGE
    if not c1 and not c2:
        return Verdict.NEITHER_CONVERGES
    return Verdict.VIOLATION


def lin_bound_slack(p, q):
    """``log 2 * TV - JSD``; non-negative by Lin's inequality."""
    return LOG2 * np.asarray(tv(p, q)) - np.asarray(jsd(p, q))


def lin_bound_check(pairs) -> bool:
    """True iff ``jsd <= log 2 * tv + 1e-12`` for every ``(p, q)`` pair."""
    for p, q in pairs:
        if np.any(lin_bound_slack(p, q) < -1e-12):
            return False
    return True


def random_pair(rng, max_support: int = 16):
    """Random pair of Dirichlet(1) distributions on a random support size."""
    k = int(rng.integers(1, max_support + 1))
    return make_discrete(rng.dirichlet(np.ones(k))), make_discrete(rng.dirichlet(np.ones(k)))
