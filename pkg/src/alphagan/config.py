"""Flat ``key = value`` training configs.

Grammar, one entry per line::

    # comment              (blank lines and '#' comments are ignored)
    alpha = 1              decimal literal, a/b fraction, or inf      (required)
    dataset = gaussian1d(3, 0.5)                                      (required)
            | ring2d(8, 2.0, 0.02)
            | gaussian_mixture1d(0.5:-2:0.3, 0.5:2:0.3)   weight:mean:std
    latent_dim = 1         integer keys: latent_dim batch_size disc_steps
                           total_gen_steps seed eval_every eval_samples
    lr_disc = 0.05         float keys: lr_disc lr_gen momentum mode_threshold_std
    gen_hidden = 16, 16    comma-separated integers: gen_hidden disc_hidden

Keys may appear once. Unknown keys are errors.
"""

from __future__ import annotations

import re
from pathlib import Path

from .alpha_loss import AlphaParam
from .errors import AlphaGanError, ConfigError
from .gan_train import TrainConfig
from .prob_core import gaussian1d, gaussian_mixture1d, ring2d

__all__ = ["parse_config", "load_config", "parse_dataset"]

REQUIRED = ("alpha", "dataset")
INT_KEYS = ("latent_dim", "batch_size", "disc_steps", "total_gen_steps", "seed", "eval_every", "eval_samples")
FLOAT_KEYS = ("lr_disc", "lr_gen", "momentum", "mode_threshold_std")
TUPLE_KEYS = ("gen_hidden", "disc_hidden")

_CALL = re.compile(r"^\s*([a-z_0-9]+)\s*\((.*)\)\s*$")


def parse_dataset(text: str):
    m = _CALL.match(text)
    if not m:
        raise ValueError(f"expected name(args), got {text!r}")
    name, args = m.group(1), [a.strip() for a in m.group(2).split(",") if a.strip()]
    if name == "gaussian1d":
        if len(args) != 2:
            raise ValueError("gaussian1d takes (mean, std)")
        return gaussian1d(float(args[0]), float(args[1]))
    if name == "ring2d":
        if len(args) != 3:
            raise ValueError("ring2d takes (n_modes, radius, mode_std)")
        return ring2d(int(args[0]), float(args[1]), float(args[2]))
    if name == "gaussian_mixture1d":
        comps = []
        for a in args:
            parts = a.split(":")
            if len(parts) != 3:
                raise ValueError(f"mixture component {a!r} is not weight:mean:std")
            comps.append(tuple(float(x) for x in parts))
        return gaussian_mixture1d(comps)
    raise ValueError(f"unknown dataset {name!r}")


def parse_config(text: str) -> TrainConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        if key in values:
            raise ConfigError("duplicate key", line=lineno, field=key)
        if not val:
            raise ConfigError("empty value", line=lineno, field=key)
        try:
            if key == "alpha":
                values[key] = AlphaParam.parse(val)
            elif key == "dataset":
                values[key] = parse_dataset(val)
            elif key in INT_KEYS:
                values[key] = int(val)
            elif key in FLOAT_KEYS:
                values[key] = float(val)
            elif key in TUPLE_KEYS:
                values[key] = tuple(int(v) for v in val.split(",") if v.strip())
            else:
                raise ConfigError("unknown key", line=lineno, field=key)
        except ConfigError:
            raise
        except (ValueError, AlphaGanError) as exc:
            raise ConfigError(str(exc), line=lineno, field=key) from None
    for key in REQUIRED:
        if key not in values:
            raise ConfigError("missing required field", field=key)
    try:
        return TrainConfig(**values)
    except AlphaGanError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> TrainConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text)
