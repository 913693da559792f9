"""Desk-scale alpha-GAN training with analytic gradients.

The discriminator ascends and the generator descends the batch estimate of
the alpha-GAN value (the minimax form, no non-saturating trick). Values and
gradients are computed from discriminator logits ``s`` so that
``D = sigmoid(s)`` never has to be inverted.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import expit, log_expit

from .alpha_loss import AlphaParam, as_alpha
from .arimoto import arimoto_values
from .errors import DivergedError, EmptyBatchError, NotApplicableError, NonFiniteError, OutOfRangeError
from .mlp import MlpModel, backward, forward, forward_batch, forward_cache, init_mlp
from .prob_core import Rng, ToyContinuousDist, sample

__all__ = [
    "TrainConfig",
    "EvalRecord",
    "TrainReport",
    "batch_value",
    "grads_value_alpha",
    "eval_mode_coverage",
    "histogram_divergence",
    "train",
    "forward",
]

# alpha < 1 branch: D(real) and 1 - D(fake) stay >= LOGIT_CLAMP_P
LOGIT_CLAMP_P = 1e-6
_LOGIT_LIMIT = math.log((1.0 - LOGIT_CLAMP_P) / LOGIT_CLAMP_P)
HIST_BINS = 64


def _clamp_logits(a: AlphaParam, s, sign):
    # sign=+1 for real logits (floor), -1 for fake logits (ceiling)
    if not a.is_inf and not a.is_one and a.value < 1.0:
        z = sign * s
        return sign * np.maximum(z, -_LOGIT_LIMIT), z > -_LOGIT_LIMIT
    return s, None


def batch_value(alpha, s_real, s_fake) -> float:
    """Batch estimate of the value from discriminator logits on real and fake samples."""
    a = as_alpha(alpha)
    s_real = np.asarray(s_real, dtype=np.float64).ravel()
    s_fake = np.asarray(s_fake, dtype=np.float64).ravel()
    if s_real.size == 0 or s_fake.size == 0:
        raise EmptyBatchError("both batches must be non-empty")
    if a.is_inf:
        return float(np.mean(expit(s_real)) - np.mean(expit(s_fake)) - 1.0)
    s_real, _ = _clamp_logits(a, s_real, 1.0)
    s_fake, _ = _clamp_logits(a, s_fake, -1.0)
    if a.is_one:
        return float(np.mean(log_expit(s_real)) + np.mean(log_expit(-s_fake)))
    c = a.exponent
    return float(a.scale * (np.mean(np.exp(c * log_expit(s_real)))
                            + np.mean(np.exp(c * log_expit(-s_fake))) - 2.0))


def _value_logit_grads(a: AlphaParam, s_real, s_fake):
    """d(value)/d(logit) for each real and fake sample."""
    c = 1.0 if a.is_inf else (0.0 if a.is_one else a.exponent)
    sr, mask_r = _clamp_logits(a, s_real, 1.0)
    sf, mask_f = _clamp_logits(a, s_fake, -1.0)
    # d/ds [scale * sigmoid(s)^c] = sigmoid(s)^c * sigmoid(-s), and the mirror for fakes
    g_r = np.exp(c * log_expit(sr)) * expit(-sr) / sr.size
    g_f = -np.exp(c * log_expit(-sf)) * expit(sf) / sf.size
    if mask_r is not None:
        g_r = g_r * mask_r
        g_f = g_f * mask_f
    return g_r, g_f


def grads_value_alpha(alpha, real_batch, latent_batch, gen: MlpModel, disc: MlpModel):
    """Exact gradients of the batch value with respect to both players.

    Returns ``(grad_disc, grad_gen, value)``; gradient lists follow
    ``model.params()`` order. Both are gradients of the value itself: the
    discriminator should step along ``grad_disc``, the generator against
    ``grad_gen``.
    """
    a = as_alpha(alpha)
    real_batch = np.asarray(real_batch, dtype=np.float64)
    latent_batch = np.asarray(latent_batch, dtype=np.float64)
    if len(real_batch) == 0 or len(latent_batch) == 0:
        raise EmptyBatchError("both batches must be non-empty")
    fake_pre, gen_acts = forward_cache(gen, latent_batch)
    fake = fake_pre  # generator output map is the identity
    s_real, acts_r = forward_cache(disc, real_batch)
    s_fake, acts_f = forward_cache(disc, fake)
    g_r, g_f = _value_logit_grads(a, s_real[:, 0], s_fake[:, 0])
    grads_r, _ = backward(disc, acts_r, g_r[:, None])
    grads_f, d_fake = backward(disc, acts_f, g_f[:, None])
    grad_disc = [x + y for x, y in zip(grads_r, grads_f)]
    grad_gen, _ = backward(gen, gen_acts, d_fake)
    value = batch_value(a, s_real[:, 0], s_fake[:, 0])
    for g in grad_disc + grad_gen:
        if not np.all(np.isfinite(g)):
            raise NonFiniteError("non-finite gradient entry")
    return grad_disc, grad_gen, value


def _mode_coverage(samples, centers, stds, threshold_std):
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        return 0
    samples = samples.reshape(len(samples), -1)
    need = max(20, int(math.ceil(0.01 * len(samples))))
    covered = 0
    for c, s in zip(centers, stds):
        dist = np.linalg.norm(samples - c[None, :], axis=1)
        if np.count_nonzero(dist <= threshold_std * s) >= need:
            covered += 1
    return covered


def eval_mode_coverage(samples, dataset: ToyContinuousDist, threshold_std: float = 3.0) -> int:
    """Number of mixture modes hit by at least ``max(20, 1%)`` of the samples.

    A sample hits a mode when it lies within ``threshold_std`` mode standard
    deviations of the mode center.
    """
    if not dataset.has_modes:
        raise NotApplicableError("mode coverage needs a mixture or ring dataset")
    return _mode_coverage(samples, dataset.centers, dataset.stds, threshold_std)


def _hist_range(dataset: ToyContinuousDist):
    lo = (dataset.centers - 5.0 * dataset.stds[:, None]).min(axis=0)
    hi = (dataset.centers + 5.0 * dataset.stds[:, None]).max(axis=0)
    return list(zip(lo.tolist(), hi.tolist()))


def histogram_divergence(alpha, real, fake, dataset: ToyContinuousDist) -> float:
    """Arimoto divergence between binned real and fake samples (reporting only).

    Uses ``HIST_BINS`` bins per dimension over a range fixed by the dataset;
    samples outside the range fall into an overflow cell.
    """
    rng_ = _hist_range(dataset)

    def hist(x):
        h, _ = np.histogramdd(x, bins=HIST_BINS, range=rng_)
        h = h.ravel()
        return np.append(h, len(x) - h.sum()) / len(x)

    return float(arimoto_values(alpha, hist(real), hist(fake)))


@dataclass(frozen=True)
class TrainConfig:
    alpha: AlphaParam
    dataset: ToyContinuousDist
    latent_dim: int = 1
    batch_size: int = 64
    disc_steps: int = 1
    lr_disc: float = 0.05
    lr_gen: float = 0.05
    momentum: float = 0.0
    total_gen_steps: int = 5000
    seed: int = 0
    eval_every: int = 500
    eval_samples: int = 2000
    gen_hidden: tuple = (16, 16)
    disc_hidden: tuple = (32, 32)
    mode_threshold_std: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        for name in ("latent_dim", "batch_size", "disc_steps", "eval_every", "eval_samples"):
            if int(getattr(self, name)) < 1:
                raise OutOfRangeError(f"{name} must be >= 1")
        if self.total_gen_steps < 0:
            raise OutOfRangeError("total_gen_steps must be >= 0")
        if not (self.lr_disc > 0 and self.lr_gen > 0):
            raise OutOfRangeError("learning rates must be positive")
        if not 0.0 <= self.momentum < 1.0:
            raise OutOfRangeError("momentum must lie in [0, 1)")
        if any(h < 1 for h in tuple(self.gen_hidden) + tuple(self.disc_hidden)):
            raise OutOfRangeError("hidden sizes must be positive")
        object.__setattr__(self, "gen_hidden", tuple(int(h) for h in self.gen_hidden))
        object.__setattr__(self, "disc_hidden", tuple(int(h) for h in self.disc_hidden))

    def echo(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "dataset": self.dataset.describe(),
            "latent_dim": self.latent_dim,
            "batch_size": self.batch_size,
            "disc_steps": self.disc_steps,
            "lr_disc": self.lr_disc,
            "lr_gen": self.lr_gen,
            "momentum": self.momentum,
            "total_gen_steps": self.total_gen_steps,
            "seed": self.seed,
            "eval_every": self.eval_every,
            "eval_samples": self.eval_samples,
            "gen_hidden": list(self.gen_hidden),
            "disc_hidden": list(self.disc_hidden),
            "mode_threshold_std": self.mode_threshold_std,
        }


@dataclass(frozen=True)
class EvalRecord:
    step: int
    value_estimate: float
    divergence_estimate: float
    sample_mean: list
    sample_std: list
    modes_covered: int


@dataclass
class TrainReport:
    config: dict
    seed: int
    records: list = field(default_factory=list)
    wall_clock_seconds: float = 0.0

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "config": self.config,
            "seed": self.seed,
            "records": [asdict(r) for r in self.records],
        }
        if include_timing:
            out["wall_clock_seconds"] = self.wall_clock_seconds
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2)

    @property
    def final(self) -> EvalRecord | None:
        return self.records[-1] if self.records else None


class _Sgd:
    def __init__(self, params, lr, momentum):
        self.lr = lr
        self.momentum = momentum
        self.vel = [np.zeros_like(p) for p in params]

    def step(self, params, grads, sign):
        for p, g, v in zip(params, grads, self.vel):
            v *= self.momentum
            v += g
            p += sign * self.lr * v


def _evaluate(cfg: TrainConfig, step, gen, disc, rng: Rng) -> EvalRecord:
    n = cfg.eval_samples
    real = sample(cfg.dataset, n, rng)
    fake = forward_batch(gen, rng.normal(size=(n, cfg.latent_dim)))
    s_real, _ = forward_cache(disc, real)
    s_fake, _ = forward_cache(disc, fake)
    value = batch_value(cfg.alpha, s_real[:, 0], s_fake[:, 0])
    div = histogram_divergence(cfg.alpha, real, fake, cfg.dataset)
    modes = _mode_coverage(fake, cfg.dataset.centers, cfg.dataset.stds, cfg.mode_threshold_std)
    if not (math.isfinite(value) and np.all(np.isfinite(fake))):
        raise DivergedError("non-finite evaluation", step=step)
    return EvalRecord(
        step=step,
        value_estimate=value,
        divergence_estimate=div,
        sample_mean=fake.mean(axis=0).tolist(),
        sample_std=fake.std(axis=0).tolist(),
        modes_covered=modes,
    )


def train(cfg: TrainConfig) -> TrainReport:
    """Alternate ``disc_steps`` discriminator ascents with one generator descent.

    Evaluates every ``eval_every`` generator steps and after the last one.
    Deterministic given ``cfg.seed``. Raises :class:`DivergedError` on
    non-finite values or gradients.
    """
    t0 = time.perf_counter()
    root = Rng(cfg.seed)
    init_rng, data_rng, latent_rng, eval_rng = (root.stream(i) for i in range(4))
    d = cfg.dataset.dim
    gen = init_mlp((cfg.latent_dim, *cfg.gen_hidden, d), "identity", init_rng)
    disc = init_mlp((d, *cfg.disc_hidden, 1), "sigmoid", init_rng)
    opt_d = _Sgd(disc.params(), cfg.lr_disc, cfg.momentum)
    opt_g = _Sgd(gen.params(), cfg.lr_gen, cfg.momentum)
    report = TrainReport(config=cfg.echo(), seed=cfg.seed)
    B = cfg.batch_size
    for step in range(1, cfg.total_gen_steps + 1):
        try:
            for _ in range(cfg.disc_steps):
                real = sample(cfg.dataset, B, data_rng)
                z = latent_rng.normal(size=(B, cfg.latent_dim))
                g_disc, _, value = grads_value_alpha(cfg.alpha, real, z, gen, disc)
                opt_d.step(disc.params(), g_disc, +1.0)
            real = sample(cfg.dataset, B, data_rng)
            z = latent_rng.normal(size=(B, cfg.latent_dim))
            _, g_gen, value = grads_value_alpha(cfg.alpha, real, z, gen, disc)
            opt_g.step(gen.params(), g_gen, -1.0)
        except NonFiniteError as exc:
            raise DivergedError(str(exc), step=step) from exc
        if not math.isfinite(value):
            raise DivergedError("non-finite value estimate", step=step)
        if step % cfg.eval_every == 0 or step == cfg.total_gen_steps:
            report.records.append(_evaluate(cfg, step, gen, disc, eval_rng))
    report.wall_clock_seconds = time.perf_counter() - t0
    return report
