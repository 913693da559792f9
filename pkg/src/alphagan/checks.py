"""Randomized oracle checks behind ``alphagan check``.

Each check returns a JSON-ready dict
``{check, trials, seed, worst_error, tolerance, pass, details}``. The
headline ``worst_error`` is the check's primary quantity; ``details`` holds
secondary quantities with their own tolerances, and ``pass`` requires all
of them.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .arimoto import arimoto_values, f_alpha, jsd, metric_power, sq_hellinger, tv
from .convergence import lin_bound_slack, sandwich_slack
from .equilibrium import generator_objective, optimal_discriminator, tilted_ratio
from .errors import OutOfRangeError, UnknownCheckError
from .prob_core import Rng, make_discrete
from .value_game import value_alpha_exact
from .variational import perspective_gap, reconstruct_f

__all__ = ["CHECKS", "run_check", "random_pairs", "random_instances"]

EQUILIBRIUM_ALPHAS = (0.3, 0.5, 1.0, 2.0, 7.0, 1e3, math.inf)
BOUND_ALPHAS = (0.2, 0.5, 1.0, 2.0, 5.0, 100.0, math.inf)
METRIC_ALPHAS = (0.25, 0.5, 1.0, 2.0, math.inf)
VARIATIONAL_ALPHAS = (0.3, 0.5, 0.99, 1.01, 2.0, 10.0)

TOL = {
    "equilibrium": 1e-4,
    "equilibrium_identity": 1e-10,
    "variational": 1e-7,
    "perspective": 1e-9,
    "bounds": 1e-12,
    "limits_jsd": 1e-4,
    "limits_hellinger": 1e-12,
    "limits_tv": 1e-3,
    "metric": 1e-12,
    "lin": 1e-12,
}


def random_pairs(rng: Rng, n: int, max_support: int = 16, count: int = 2, zero_frac: float = 0.1):
    """``count`` stacks of ``n`` random distributions, zero-padded to ``max_support``.

    Row ``i`` of every stack shares a support size drawn from
    ``1..max_support``; some atoms are zeroed to exercise boundary cases.
    Padding atoms are zero in every stack, so they never change a divergence.
    """
    return _random_stacks(rng, n, max_support, count, zero_frac)[1]


def _random_stacks(rng, n, max_support, count, zero_frac):
    sizes = rng.integers(1, max_support + 1, size=n)
    out = []
    for _ in range(count):
        x = rng.dirichlet(np.ones(max_support), size=n)
        x[np.arange(max_support)[None, :] >= sizes[:, None]] = 0.0
        x[(rng.uniform(size=x.shape) < zero_frac)] = 0.0
        empty = x.sum(axis=1) == 0.0
        x[empty, 0] = 1.0
        out.append(x / x.sum(axis=1, keepdims=True))
    return sizes, out


def random_instances(rng: Rng, n: int, max_support: int = 16):
    """Random ``(p_r, p_g)`` pairs as DiscreteDistribution objects."""
    sizes, (p, q) = _random_stacks(rng, n, max_support, 2, 0.1)
    return [(make_discrete(p[i, :k]), make_discrete(q[i, :k])) for i, k in enumerate(sizes)]


def _result(name, trials, seed, worst, tol, details=None):
    details = details or {}
    ok = bool(worst <= tol) and all(d["pass"] for d in details.values())
    return {
        "check": name,
        "trials": trials,
        "seed": seed,
        "worst_error": float(worst),
        "tolerance": tol,
        "pass": ok,
        "details": details,
    }


def _detail(worst, tol):
    return {"worst_error": float(worst), "tolerance": tol, "pass": bool(worst <= tol)}


def check_equilibrium(trials: int, seed: int, grid: int = 1001):
    """Brute-force discriminator vs closed form, and value at the optimum vs C(G)."""
    rng = Rng(seed)
    inst = random_instances(rng, trials)
    worst_arg = 0.0
    worst_id = 0.0
    for j, alpha in enumerate(EQUILIBRIUM_ALPHAS):
        chunk = inst[j::len(EQUILIBRIUM_ALPHAS)]
        if not chunk:
            continue
        pr = np.concatenate([a.probs for a, _ in chunk])
        pg = np.concatenate([b.probs for _, b in chunk])
        brute = kernels.brute_force_argmax(pr, pg, alpha, grid)
        worst_arg = max(worst_arg, float(np.max(np.abs(brute - tilted_ratio(alpha, pr, pg)))))
        for a, b in chunk:
            v = value_alpha_exact(alpha, a, b, optimal_discriminator(alpha, a, b))
            worst_id = max(worst_id, abs(v - generator_objective(alpha, a, b)))
    return _result("equilibrium", trials, seed, worst_arg, TOL["equilibrium"],
                   {"value_identity": _detail(worst_id, TOL["equilibrium_identity"])})


def check_variational(trials: int, seed: int):
    """Numerical reconstruction of f_alpha from the margin loss vs the closed form."""
    rng = Rng(seed)
    u = 10.0 ** rng.uniform(-3.0, 3.0, size=trials)
    which = rng.integers(0, len(VARIATIONAL_ALPHAS), size=trials)
    worst = worst_sym = 0.0
    for j, alpha in enumerate(VARIATIONAL_ALPHAS):
        uj = u[which == j]
        if uj.size == 0:
            continue
        worst = max(worst, float(np.max(np.abs(reconstruct_f(alpha, uj) - f_alpha(alpha, uj)))))
        worst_sym = max(worst_sym, float(np.max(perspective_gap(alpha, uj))))
    return _result("variational", trials, seed, worst, TOL["variational"],
                   {"perspective_symmetry": _detail(worst_sym, TOL["perspective"])})


def check_bounds(trials: int, seed: int):
    """psi(TV) <= D <= psi(1) TV on random pairs for several orders."""
    rng = Rng(seed)
    p, q = random_pairs(rng, trials)
    worst = 0.0
    for alpha in BOUND_ALPHAS:
        lo, hi = sandwich_slack(alpha, p, q)
        worst = max(worst, float(-min(lo.min(), hi.min(), 0.0)))
    return _result("bounds", trials, seed, worst, TOL["bounds"])


def check_limits(trials: int, seed: int):
    """Hellinger, Jensen-Shannon and total-variation limits of the divergence."""
    rng = Rng(seed)
    p, q = random_pairs(rng, trials)
    two_js = 2.0 * jsd(p, q)
    worst_js = max(float(np.max(np.abs(arimoto_values(a, p, q) - two_js))) for a in (1 - 1e-5, 1 + 1e-5))
    worst_h = float(np.max(np.abs(arimoto_values(0.5, p, q) - 2.0 * sq_hellinger(p, q))))
    worst_tv = float(np.max(np.abs(arimoto_values(1e4, p, q) - tv(p, q))))
    return _result("limits", trials, seed, worst_js, TOL["limits_jsd"], {
        "hellinger": _detail(worst_h, TOL["limits_hellinger"]),
        "total_variation": _detail(worst_tv, TOL["limits_tv"]),
    })


def check_metric(trials: int, seed: int):
    """Triangle inequality of D^min(alpha, 1/2) on random triples."""
    rng = Rng(seed)
    a, b, c = random_pairs(rng, trials, max_support=8, count=3)
    worst = 0.0
    for alpha in METRIC_ALPHAS:
        gap = metric_power(alpha, a, c) - metric_power(alpha, a, b) - metric_power(alpha, b, c)
        worst = max(worst, float(max(gap.max(), 0.0)))
    return _result("metric", trials, seed, worst, TOL["metric"])


def check_lin(trials: int, seed: int):
    """JSD <= log(2) TV on random pairs."""
    rng = Rng(seed)
    p, q = random_pairs(rng, trials)
    worst = float(max(-lin_bound_slack(p, q).min(), 0.0)) + 0.0
    return _result("lin", trials, seed, worst, TOL["lin"])


CHECKS = {
    "equilibrium": check_equilibrium,
    "variational": check_variational,
    "bounds": check_bounds,
    "limits": check_limits,
    "metric": check_metric,
    "lin": check_lin,
}


def run_check(name: str, trials: int, seed: int) -> dict:
    if name not in CHECKS:
        raise UnknownCheckError(f"unknown check {name!r}; choose from {sorted(CHECKS)}")
    if trials < 1:
        raise OutOfRangeError("trials must be >= 1")
    return CHECKS[name](trials, seed)
