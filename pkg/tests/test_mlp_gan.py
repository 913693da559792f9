import json
import math

import numpy as np
import pytest
from scipy.special import expit

from alphagan import gan_train
from alphagan.errors import DimensionMismatchError, DivergedError, EmptyBatchError, NonFiniteError, NotApplicableError
from alphagan.gan_train import (
    TrainConfig,
    batch_value,
    eval_mode_coverage,
    grads_value_alpha,
    histogram_divergence,
    train,
)
from alphagan.mlp import MlpModel, backward, forward, forward_batch, forward_cache, init_mlp
from alphagan.prob_core import Rng, gaussian1d, gaussian_mixture1d, ring2d, sample

INF = math.inf
BRANCHES = (0.5, 1.0, 2.0, INF)


def _models(seed, d=1, latent=1):
    rng = Rng(seed)
    gen = init_mlp((latent, 8, 8, d), "identity", rng.stream(0))
    disc = init_mlp((d, 8, 8, 1), "sigmoid", rng.stream(1))
    return gen, disc, rng


def _reference_forward(model, x):
    a = np.asarray(x, dtype=np.float64)
    n = len(model.weights)
    for i in range(n):
        z = np.zeros(model.weights[i].shape[1])
        for j in range(model.weights[i].shape[1]):
            z[j] = sum(a[k] * model.weights[i][k, j] for k in range(len(a))) + model.biases[i][j]
        a = np.tanh(z) if i < n - 1 else z
    return 1.0 / (1.0 + np.exp(-a)) if model.output == "sigmoid" else a


def test_forward_examples():
    zero = MlpModel((3, 4, 2), [np.zeros((3, 4)), np.zeros((4, 2))], [np.zeros(4), np.array([0.3, -1.0])], "sigmoid")
    for x in ([0, 0, 0], [1, -2, 5]):
        np.testing.assert_array_equal(forward(zero, x), expit([0.3, -1.0]))
    unit = MlpModel((1, 1), [np.ones((1, 1))], [np.zeros(1)], "sigmoid")
    assert forward(unit, [0.7])[0] == expit(0.7)
    model = init_mlp((3, 5, 4, 2), "sigmoid", Rng(2))
    x = np.array([0.3, -1.2, 2.0])
    np.testing.assert_allclose(forward(model, x), _reference_forward(model, x), rtol=0, atol=1e-12)


def test_model_validation():
    with pytest.raises(DimensionMismatchError):
        MlpModel((2, 3), [np.zeros((3, 2))], [np.zeros(3)])
    with pytest.raises(NonFiniteError):
        MlpModel((1, 1), [np.full((1, 1), np.nan)], [np.zeros(1)])
    model = init_mlp((2, 3, 1), "identity", Rng(0))
    with pytest.raises(DimensionMismatchError):
        forward(model, [1.0, 2.0, 3.0])
    with pytest.raises(DimensionMismatchError):
        forward_batch(model, np.zeros((4, 3)))
    assert model.with_flat(model.flat()).flat().tolist() == model.flat().tolist()


def test_backward_matches_finite_differences():
    model = init_mlp((2, 6, 3), "identity", Rng(4))
    x = Rng(5).normal(size=(7, 2))
    w = Rng(6).normal(size=(7, 3))

    def obj(m):
        return float(np.sum(w * forward_batch(m, x)))

    z, acts = forward_cache(model, x)
    grads, d_in = backward(model, acts, w)
    flat = np.concatenate([g.ravel() for g in grads])
    base = model.flat()
    h = 1e-6
    for i in range(0, base.size, 3):
        e = np.zeros_like(base)
        e[i] = h
        num = (obj(model.with_flat(base + e)) - obj(model.with_flat(base - e))) / (2 * h)
        assert num == pytest.approx(flat[i], rel=1e-6, abs=1e-8)
    assert d_in.shape == x.shape


def _fd_check(alpha, seed, h=1e-5):
    gen, disc, rng = _models(seed)
    real = rng.stream(2).normal(3.0, 0.5, size=(32, 1))
    z = rng.stream(3).normal(size=(32, 1))
    g_d, g_g, v = grads_value_alpha(alpha, real, z, gen, disc)
    fd, fg = np.concatenate([g.ravel() for g in g_d]), np.concatenate([g.ravel() for g in g_g])

    def value(gm, dm):
        s_r, _ = forward_cache(dm, real)
        s_f, _ = forward_cache(dm, forward_batch(gm, z))
        return batch_value(alpha, s_r[:, 0], s_f[:, 0])

    assert v == value(gen, disc)
    pick = rng.stream(4)
    worst = 0.0
    for k in range(10):
        model = disc if k % 2 == 0 else gen
        i = int(pick.integers(0, model.n_params))
        e = np.zeros(model.n_params)
        e[i] = h
        plus, minus = model.with_flat(model.flat() + e), model.with_flat(model.flat() - e)
        if model is disc:
            num, ana = (value(gen, plus) - value(gen, minus)) / (2 * h), fd[i]
        else:
            num, ana = (value(plus, disc) - value(minus, disc)) / (2 * h), fg[i]
        worst = max(worst, abs(num - ana) / max(abs(num), abs(ana), 1e-6))
    return worst


@pytest.mark.parametrize("alpha", BRANCHES)
def test_gradients_match_finite_differences(alpha):
    for seed in range(5):
        assert _fd_check(alpha, seed) <= 1e-4


def test_constant_discriminator_gives_zero_generator_gradient():
    gen, _, rng = _models(0)
    disc = MlpModel((1, 8, 1), [np.zeros((1, 8)), np.zeros((8, 1))], [np.zeros(8), np.zeros(1)], "sigmoid")
    real = rng.normal(size=(16, 1))
    z = rng.normal(size=(16, 1))
    for a in BRANCHES:
        _, g_gen, v = grads_value_alpha(a, real, z, gen, disc)
        assert all(np.all(g == 0.0) for g in g_gen)
    assert v == -1.0


def test_generator_gradient_small_at_symmetric_point():
    # D = 1/2 everywhere (zero last layer, hidden layers random) and real and
    # fake share a distribution: the generator gradient vanishes on every seed
    norms = []
    for seed in range(20):
        rng = Rng(seed)
        gen = MlpModel((1, 1), [np.ones((1, 1))], [np.zeros(1)], "identity")
        disc = init_mlp((1, 4, 1), "sigmoid", rng.stream(0))
        disc.weights[-1][:] = 0.0
        disc.biases[-1][:] = 0.0
        real = rng.stream(1).normal(size=(2000, 1))
        z = rng.stream(2).normal(size=(2000, 1))
        _, g_gen, _ = grads_value_alpha(1, real, z, gen, disc)
        norms.append(math.sqrt(sum(float(np.sum(g * g)) for g in g_gen)))
    assert max(norms) == 0.0


def test_ipm_limit_on_batches():
    gen, disc, rng = _models(1)
    for _ in range(5):
        real = rng.normal(3.0, 1.0, size=(64, 1))
        z = rng.normal(size=(64, 1))
        _, _, v = grads_value_alpha(INF, real, z, gen, disc)
        ipm = forward_batch(disc, real).mean() - forward_batch(disc, forward_batch(gen, z)).mean() - 1.0
        assert abs(v - ipm) <= 1e-12


def test_batch_value_errors_and_clamp():
    with pytest.raises(EmptyBatchError):
        batch_value(1, [], [0.0])
    # alpha < 1 with saturated logits stays finite
    assert math.isfinite(batch_value(0.5, [-800.0], [800.0]))
    g_r, g_f = gan_train._value_logit_grads(gan_train.as_alpha(0.5), np.array([-800.0, 0.0]), np.array([800.0, 0.0]))
    assert np.all(np.isfinite(g_r)) and np.all(np.isfinite(g_f))
    assert g_r[0] == 0.0 and g_f[0] == 0.0


def test_disc_updates_do_not_decrease_value():
    for seed in range(5):
        gen, disc, rng = _models(seed)
        data = rng.stream(5)
        eval_real = sample(gaussian1d(2.0, 0.5), 4000, rng.stream(6))
        eval_z = rng.stream(7).normal(size=(4000, 1))

        def v_hat():
            s_r, _ = forward_cache(disc, eval_real)
            s_f, _ = forward_cache(disc, forward_batch(gen, eval_z))
            return batch_value(2.0, s_r[:, 0], s_f[:, 0])

        start = v_hat()
        for _ in range(200):
            real = data.normal(2.0, 0.5, size=(64, 1))
            z = data.normal(size=(64, 1))
            g_d, _, _ = grads_value_alpha(2.0, real, z, gen, disc)
            for p, g in zip(disc.params(), g_d):
                p += 0.05 * g
        assert v_hat() >= start - 0.02


def test_mode_coverage():
    ds = ring2d(8, 2.0, 0.02)
    x = sample(ds, 8000, Rng(1))
    assert eval_mode_coverage(x, ds) == 8
    assert eval_mode_coverage(np.repeat(ds.centers[:1], 500, axis=0), ds) == 1
    assert eval_mode_coverage(np.zeros((0, 2)), ds) == 0
    mix = gaussian_mixture1d([(0.5, -2.0, 0.3), (0.5, 2.0, 0.3)])
    assert eval_mode_coverage(sample(mix, 2000, Rng(2)), mix) == 2
    with pytest.raises(NotApplicableError):
        eval_mode_coverage(x[:, :1], gaussian1d(0, 1))


def test_histogram_divergence_reporting():
    ds = gaussian1d(0.0, 1.0)
    a = sample(ds, 5000, Rng(1))
    b = sample(ds, 5000, Rng(2))
    same = histogram_divergence(1, a, b, ds)
    far = histogram_divergence(1, a, a + 3.0, ds)
    assert 0.0 <= same < far <= 2 * math.log(2) + 1e-12


def test_zero_step_training_echoes_config():
    cfg = TrainConfig(alpha=2, dataset=gaussian1d(0, 1), total_gen_steps=0, seed=9)
    rep = train(cfg)
    d = json.loads(rep.to_json())
    assert d["records"] == [] and d["seed"] == 9 and d["config"]["alpha"] == "2.0"
    assert d["config"]["dataset"] == cfg.dataset.describe()


def test_training_is_deterministic_and_well_formed():
    cfg = TrainConfig(alpha=0.5, dataset=ring2d(4, 1.0, 0.05), latent_dim=2, total_gen_steps=120, eval_every=40, seed=3)
    r1, r2 = train(cfg), train(cfg)
    assert r1.to_json(include_timing=False) == r2.to_json(include_timing=False)
    d = json.loads(r1.to_json())
    assert [r["step"] for r in d["records"]] == [40, 80, 120]
    for r in d["records"]:
        assert set(r) == {"step", "value_estimate", "divergence_estimate", "sample_mean", "sample_std", "modes_covered"}
        assert all(math.isfinite(x) for x in [r["value_estimate"], r["divergence_estimate"], *r["sample_mean"]])
        assert 0 <= r["modes_covered"] <= 4
    other = train(TrainConfig(**{**cfg.__dict__, "seed": 4}))
    assert other.to_json(include_timing=False) != r1.to_json(include_timing=False)


@pytest.mark.slow
def test_gaussian_training_reaches_target():
    rep = train(TrainConfig(alpha=1, dataset=gaussian1d(3.0, 0.5), seed=0))
    final = rep.final
    assert final.step == 5000
    assert abs(final.sample_mean[0] - 3.0) <= 0.5
    assert final.modes_covered == 1


def test_diverged_error_reports_step(monkeypatch):
    calls = {"n": 0}
    real = gan_train.grads_value_alpha

    def flaky(*args):
        calls["n"] += 1
        if calls["n"] > 6:
            raise NonFiniteError("boom")
        return real(*args)

    monkeypatch.setattr(gan_train, "grads_value_alpha", flaky)
    with pytest.raises(DivergedError) as info:
        train(TrainConfig(alpha=1, dataset=gaussian1d(0, 1), total_gen_steps=10))
    assert info.value.step == 4
