"""Tiny fully-connected networks with hand-written backpropagation.

Layers compute ``z = a @ W + b``; hidden layers use ``tanh`` and the last
layer is linear before the model's output map (``sigmoid`` for
discriminators, ``identity`` for generators).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import expit

from .errors import DimensionMismatchError, NonFiniteError, OutOfRangeError

__all__ = ["MlpModel", "init_mlp", "forward", "forward_batch", "forward_cache", "backward"]

_OUTPUTS = ("sigmoid", "identity")


@dataclass
class MlpModel:
    layer_dims: tuple
    weights: list
    biases: list
    output: str = "identity"

    def __post_init__(self):
        self.layer_dims = tuple(int(d) for d in self.layer_dims)
        if len(self.layer_dims) < 2 or any(d < 1 for d in self.layer_dims):
            raise OutOfRangeError("layer_dims needs at least two positive sizes")
        if self.output not in _OUTPUTS:
            raise OutOfRangeError(f"output must be one of {_OUTPUTS}")
        if len(self.weights) != len(self.layer_dims) - 1 or len(self.biases) != len(self.weights):
            raise DimensionMismatchError("one weight matrix and bias per layer transition")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (self.layer_dims[i], self.layer_dims[i + 1]) or b.shape != (self.layer_dims[i + 1],):
                raise DimensionMismatchError(f"layer {i} has shapes {w.shape}, {b.shape}")
        if not all(np.all(np.isfinite(p)) for p in self.params()):
            raise NonFiniteError("parameters must be finite")

    def params(self) -> list:
        out = []
        for w, b in zip(self.weights, self.biases):
            out += [w, b]
        return out

    @property
    def n_params(self) -> int:
        return sum(p.size for p in self.params())

    def flat(self) -> np.ndarray:
        return np.concatenate([p.ravel() for p in self.params()])

    def with_flat(self, vec) -> "MlpModel":
        vec = np.asarray(vec, dtype=np.float64)
        if vec.size != self.n_params:
            raise DimensionMismatchError("flat vector has the wrong length")
        ws, bs, pos = [], [], 0
        for w, b in zip(self.weights, self.biases):
            ws.append(vec[pos:pos + w.size].reshape(w.shape))
            pos += w.size
            bs.append(vec[pos:pos + b.size].copy())
            pos += b.size
        return MlpModel(self.layer_dims, ws, bs, self.output)

    def copy(self) -> "MlpModel":
        return MlpModel(self.layer_dims, [w.copy() for w in self.weights],
                        [b.copy() for b in self.biases], self.output)


def init_mlp(layer_dims: Sequence[int], output: str, rng) -> MlpModel:
    """Weights ~ N(0, 1/fan_in), zero biases."""
    ws, bs = [], []
    for n_in, n_out in zip(layer_dims[:-1], layer_dims[1:]):
        ws.append(rng.normal(0.0, 1.0 / np.sqrt(n_in), size=(n_in, n_out)))
        bs.append(np.zeros(n_out))
    return MlpModel(tuple(layer_dims), ws, bs, output)


def _squash(model: MlpModel, z):
    return expit(z) if model.output == "sigmoid" else z


def forward_cache(model: MlpModel, x: np.ndarray):
    """Batched pass keeping layer inputs; returns ``(pre_output, activations)``."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.layer_dims[0]:
        raise DimensionMismatchError(
            f"expected inputs of width {model.layer_dims[0]}, got shape {x.shape}"
        )
    acts = [x]
    a = x
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w + b
        if i < last:
            a = np.tanh(z)
            acts.append(a)
        else:
            return z, acts
    raise AssertionError("unreachable")


def forward_batch(model: MlpModel, x) -> np.ndarray:
    z, _ = forward_cache(model, x)
    return _squash(model, z)


def forward(model: MlpModel, x) -> np.ndarray:
    """Single input vector in, output vector out."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatchError("forward takes one input vector")
    return forward_batch(model, x[None, :])[0]


def backward(model: MlpModel, acts: list, d_pre: np.ndarray):
    """Backpropagate ``d(objective)/d(pre_output)``.

    Returns ``(grads, d_input)`` with ``grads`` ordered like ``model.params()``.
    """
    grads = [None] * (2 * len(model.weights))
    delta = d_pre
    for i in range(len(model.weights) - 1, -1, -1):
        a_in = acts[i]
        grads[2 * i] = a_in.T @ delta
        grads[2 * i + 1] = delta.sum(axis=0)
        d_in = delta @ model.weights[i].T
        if i > 0:
            # acts[i] = tanh(z_{i-1}); tanh' = 1 - tanh^2
            delta = d_in * (1.0 - a_in * a_in)
        else:
            return grads, d_in
    raise AssertionError("unreachable")
