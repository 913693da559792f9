"""Command-line entry point ``alphagan``.

Subcommands::

    sweep-divergence  D_alpha(Ber(1/2) || Ber(theta)) over a theta grid -> CSV
    check             randomized oracle checks -> JSON verdict on stdout
    convergence       divergence traces along a sequence -> CSV + JSON verdicts
    train             toy alpha-GAN training from a config file -> JSON report
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from pathlib import Path

import numpy as np

from .alpha_loss import AlphaParam
from .arimoto import arimoto_values
from .checks import CHECKS, run_check
from .config import load_config
from .convergence import DistSequence, equivalence_check, divergence_trace
from .errors import AlphaGanError, ConfigError, DivergedError
from .gan_train import train
from .prob_core import bernoulli, make_discrete

FIGURE_ALPHAS = "0.2,0.5,1,2,5,100,inf"


def parse_alphas(text: str) -> list[AlphaParam]:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("need at least one alpha")
    try:
        return [AlphaParam.parse(t) for t in items]
    except AlphaGanError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fmt(x: float) -> str:
    return repr(float(x))


def _write(out, text: str):
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def sweep_divergence_rows(alphas, theta_steps: int):
    """Rows ``(alpha, theta, divergence)`` for ``Ber(1/2)`` vs ``Ber(theta)``."""
    if theta_steps < 2:
        raise ValueError("theta grid needs at least 2 points")
    thetas = np.linspace(0.0, 1.0, theta_steps)
    q = np.column_stack([1.0 - thetas, thetas])
    p = bernoulli(0.5).probs
    rows = []
    for a in alphas:
        d = arimoto_values(a, p[None, :], q)
        rows += [(a, t, v) for t, v in zip(thetas, d)]
    return rows


def cmd_sweep_divergence(args) -> int:
    rows = sweep_divergence_rows(args.alphas, args.theta_steps)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "theta", "divergence"])
    for a, t, v in rows:
        w.writerow([str(a), _fmt(t), _fmt(v)])
    _write(args.out, buf.getvalue())
    return 0


def cmd_check(args) -> int:
    result = run_check(args.name, args.trials, args.seed)
    text = json.dumps(result, sort_keys=True, indent=2) + "\n"
    _write(args.out, text)
    return 0 if result["pass"] else 1


def build_sequence(kind: str, n_max: int):
    """Named Bernoulli-family sequences against the target ``Ber(1/2)``."""
    target = bernoulli(0.5)
    if kind == "drift":
        return DistSequence.bernoulli_drift(n_max, 0.5, 1.0), target
    if kind == "constant":
        return DistSequence.constant(bernoulli(0.9), n_max), target
    if kind == "mixture":
        return DistSequence.shrinking_mixture(target, make_discrete([1.0, 0.0]), n_max), target
    raise ValueError(f"unknown sequence kind {kind!r}")


def cmd_convergence(args) -> int:
    if args.n_max < 10:
        raise ValueError("n-max must be >= 10")
    seq, target = build_sequence(args.sequence, args.n_max)
    trace = divergence_trace(seq, target, args.alphas)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "alpha", "divergence"])
    for i in range(trace.shape[0]):
        for j, a in enumerate(args.alphas):
            w.writerow([i + 1, str(a), _fmt(trace[i, j])])
    _write(args.out, buf.getvalue())
    verdicts = []
    for a1, a2 in itertools.combinations(args.alphas, 2):
        v = equivalence_check(seq, target, a1, a2, args.tol)
        verdicts.append({"alpha1": str(a1), "alpha2": str(a2), "verdict": v.value})
    summary = {
        "sequence": args.sequence,
        "n_max": args.n_max,
        "tol": args.tol,
        "alphas": [str(a) for a in args.alphas],
        "verdicts": verdicts,
        "violations": sum(v["verdict"] == "violation" for v in verdicts),
    }
    text = json.dumps(summary, sort_keys=True, indent=2) + "\n"
    if args.verdict_out:
        Path(args.verdict_out).write_text(text)
    elif args.out in (None, "-"):
        # stdout already carries the CSV
        sys.stderr.write(text)
    else:
        sys.stdout.write(text)
    return 0 if summary["violations"] == 0 else 1


def cmd_train(args) -> int:
    cfg = load_config(args.config)
    try:
        report = train(cfg)
    except DivergedError as exc:
        sys.stderr.write(f"diverged: {exc}\n")
        return 3
    _write(args.out, report.to_json() + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="alphagan", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep-divergence", help="Bernoulli divergence sweep (CSV)")
    s.add_argument("--alphas", type=parse_alphas, default=parse_alphas(FIGURE_ALPHAS))
    s.add_argument("--theta-steps", type=int, default=201)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_sweep_divergence)

    c = sub.add_parser("check", help="randomized oracle check (JSON)")
    c.add_argument("name", choices=sorted(CHECKS))
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default="-")
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("convergence", help="divergence traces and equivalence verdicts")
    v.add_argument("--sequence", choices=("drift", "constant", "mixture"), default="drift")
    v.add_argument("--n-max", type=int, default=10_000)
    v.add_argument("--alphas", type=parse_alphas, default=parse_alphas("0.5,1,2,inf"))
    v.add_argument("--tol", type=float, default=1e-3)
    v.add_argument("--out", default="-", help="trace CSV path")
    v.add_argument("--verdict-out", default=None, help="verdict JSON path (default: stdout)")
    v.set_defaults(func=cmd_convergence)

    t = sub.add_parser("train", help="train a toy alpha-GAN (JSON report)")
    t.add_argument("--config", required=True)
    t.add_argument("--out", default="-")
    t.set_defaults(func=cmd_train)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except (AlphaGanError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
