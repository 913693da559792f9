"""Finite distributions, toy continuous datasets and seeded randomness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import AllZeroError, NegativeError, NonFiniteError, OutOfRangeError

__all__ = [
    "DiscreteDistribution",
    "ToyContinuousDist",
    "Rng",
    "make_discrete",
    "bernoulli",
    "gaussian1d",
    "gaussian_mixture1d",
    "ring2d",
    "sample",
]


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probability vector over the outcomes ``0 .. support_size - 1``.

    Zero-mass atoms are kept. Build instances with :func:`make_discrete`
    or :func:`bernoulli` so the normalization invariant holds.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=np.float64)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def support_size(self) -> int:
        return int(self.probs.shape[0])

    def __len__(self):
        return self.support_size

    def __eq__(self, other):
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash(self.probs.tobytes())

    def __repr__(self):
        return f"DiscreteDistribution({self.probs.tolist()!r})"


def make_discrete(weights: Sequence[float] | np.ndarray) -> DiscreteDistribution:
    """Normalize non-negative weights into a distribution, preserving order."""
    w = np.asarray(weights, dtype=np.float64).ravel()
    if w.size == 0:
        raise AllZeroError("no weights given")
    if not np.all(np.isfinite(w)):
        raise NonFiniteError("weights must be finite")
    if np.any(w < 0):
        raise NegativeError("weights must be non-negative")
    total = math.fsum(w.tolist())
    if total <= 0:
        raise AllZeroError("all weights are zero")
    p = w / total
    # one extra pass pulls the sum to within an ulp or two of 1
    p = p / math.fsum(p.tolist())
    return DiscreteDistribution(p)


def bernoulli(theta: float) -> DiscreteDistribution:
    """Two-point distribution ``[1 - theta, theta]``."""
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise OutOfRangeError(f"theta must lie in [0, 1], got {theta}")
    return DiscreteDistribution(np.array([1.0 - theta, theta]))


@dataclass(frozen=True)
class ToyContinuousDist:
    """Toy data/latent distribution used by the trainer.

    ``kind`` is one of ``"gaussian1d"``, ``"gaussian_mixture1d"`` or
    ``"ring2d"``; ``components`` holds ``(weight, center, std)`` triples with
    ``center`` a tuple of length ``dim``.
    """

    kind: str
    components: tuple
    dim: int
    params: dict = field(default_factory=dict, compare=False)

    @property
    def weights(self) -> np.ndarray:
        return np.array([c[0] for c in self.components])

    @property
    def centers(self) -> np.ndarray:
        return np.array([c[1] for c in self.components], dtype=np.float64).reshape(-1, self.dim)

    @property
    def stds(self) -> np.ndarray:
        return np.array([c[2] for c in self.components], dtype=np.float64)

    @property
    def has_modes(self) -> bool:
        return self.kind != "gaussian1d"

    def describe(self) -> str:
        if self.kind == "gaussian1d":
            return f"gaussian1d({self.params['mean']!r}, {self.params['std']!r})"
        if self.kind == "ring2d":
            p = self.params
            return f"ring2d({p['n_modes']!r}, {p['radius']!r}, {p['mode_std']!r})"
        parts = ", ".join(f"{w!r}:{c[0]!r}:{s!r}" for w, c, s in self.components)
        return f"gaussian_mixture1d({parts})"


def _check_std(std):
    if not (math.isfinite(std) and std > 0):
        raise OutOfRangeError(f"std must be positive and finite, got {std}")


def gaussian1d(mean: float, std: float) -> ToyContinuousDist:
    _check_std(std)
    return ToyContinuousDist(
        "gaussian1d", ((1.0, (float(mean),), float(std)),), 1,
        {"mean": float(mean), "std": float(std)},
    )


def gaussian_mixture1d(components: Sequence[tuple[float, float, float]]) -> ToyContinuousDist:
    """Mixture from ``(weight, mean, std)`` triples; weights must sum to 1."""
    if not components:
        raise OutOfRangeError("mixture needs at least one component")
    comps = []
    for w, m, s in components:
        _check_std(s)
        if w < 0:
            raise NegativeError("mixture weights must be non-negative")
        comps.append((float(w), (float(m),), float(s)))
    total = sum(c[0] for c in comps)
    if abs(total - 1.0) > 1e-9:
        raise OutOfRangeError(f"mixture weights must sum to 1, got {total}")
    return ToyContinuousDist("gaussian_mixture1d", tuple(comps), 1)


def ring2d(n_modes: int, radius: float, mode_std: float) -> ToyContinuousDist:
    """Equal-weight isotropic Gaussians on a circle of the given radius."""
    if n_modes < 1:
        raise OutOfRangeError("n_modes must be >= 1")
    _check_std(mode_std)
    comps = []
    for k in range(n_modes):
        ang = 2.0 * math.pi * k / n_modes
        comps.append((1.0 / n_modes, (radius * math.cos(ang), radius * math.sin(ang)), float(mode_std)))
    return ToyContinuousDist(
        "ring2d", tuple(comps), 2,
        {"n_modes": int(n_modes), "radius": float(radius), "mode_std": float(mode_std)},
    )


class Rng:
    """Counter-based generator: ``(seed, stream)`` fully determines the output.

    Backed by numpy's Philox. ``stream(i)`` returns an independent child whose
    draws do not depend on how much the parent has been used, which keeps
    parallel sweeps reproducible.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        if not 0 <= seed < 2**64:
            raise OutOfRangeError("seed must be an unsigned 64-bit integer")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def stream(self, stream_id: int) -> "Rng":
        return Rng(self.seed, stream_id)

    def __repr__(self):
        return f"Rng(seed={self.seed}, stream_id={self.stream_id})"

    # thin pass-throughs used throughout the package
    def normal(self, loc=0.0, scale=1.0, size=None):
        return self.generator.normal(loc, scale, size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self.generator.uniform(low, high, size)

    def integers(self, low, high=None, size=None):
        return self.generator.integers(low, high, size)

    def dirichlet(self, alpha, size=None):
        return self.generator.dirichlet(alpha, size)

    def choice(self, a, size=None, p=None):
        return self.generator.choice(a, size=size, p=p)


def sample(dist: ToyContinuousDist | DiscreteDistribution, n: int, rng: Rng) -> np.ndarray:
    """Draw ``n`` i.i.d. samples as an ``(n, d)`` matrix.

    Discrete distributions yield integer outcome indices with ``d = 1``.
    """
    if n < 1:
        raise OutOfRangeError("n must be >= 1")
    if isinstance(dist, DiscreteDistribution):
        cdf = np.cumsum(dist.probs)
        u = rng.uniform(size=n)
        idx = np.searchsorted(cdf, u * cdf[-1], side="right")
        # never land on a zero-mass atom through rounding at the top end
        idx = np.minimum(idx, np.flatnonzero(dist.probs)[-1])
        return idx.reshape(n, 1).astype(np.int64)
    if dist.kind == "gaussian1d":
        return (dist.params["mean"] + dist.params["std"] * rng.normal(size=n)).reshape(n, 1)
    comp = rng.choice(len(dist.components), size=n, p=dist.weights / dist.weights.sum())
    noise = rng.normal(size=(n, dist.dim))
    return dist.centers[comp] + dist.stds[comp, None] * noise
