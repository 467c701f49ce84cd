"""Softmax-linear and one-hidden-layer tanh MLP classifiers with analytic gradients."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, DataError
from ..rng import stream

MODEL_KINDS = ("softmax_linear", "mlp_1hidden")


@dataclass
class ModelState:
    kind: str
    params: dict[str, np.ndarray]
    hidden: int = 0
    velocity: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.params["W1"].shape[0]

    @property
    def n_classes(self) -> int:
        return self.params["b2" if self.kind == "mlp_1hidden" else "b1"].shape[0]

    def copy(self) -> "ModelState":
        return ModelState(
            self.kind,
            {k: v.copy() for k, v in self.params.items()},
            self.hidden,
            {k: v.copy() for k, v in self.velocity.items()},
        )


def init_model(kind: str, dim: int, n_classes: int, hidden: int = 64, seed: int = 0) -> ModelState:
    rng = stream(seed, "init")
    if kind == "softmax_linear":
        params = {
            "W1": rng.standard_normal((dim, n_classes)) / np.sqrt(dim),
            "b1": np.zeros(n_classes),
        }
        hidden = 0
    elif kind == "mlp_1hidden":
        if hidden < 1:
            raise ConfigError("mlp_1hidden needs hidden >= 1")
        params = {
            "W1": rng.standard_normal((dim, hidden)) / np.sqrt(dim),
            "b1": np.zeros(hidden),
            "W2": rng.standard_normal((hidden, n_classes)) / np.sqrt(hidden),
            "b2": np.zeros(n_classes),
        }
    else:
        raise ConfigError(f"model kind must be one of {MODEL_KINDS}, got {kind!r}")
    return ModelState(kind, params, hidden)


def _check(model: ModelState, x: np.ndarray, y: np.ndarray | None = None) -> None:
    if x.ndim != 2 or x.shape[1] != model.dim:
        raise DataError(f"expected features of shape (n, {model.dim}), got {x.shape}")
    if y is not None:
        if y.shape != (x.shape[0],):
            raise DataError(f"expected {x.shape[0]} labels, got shape {y.shape}")
        if y.size and (y.min() < 0 or y.max() >= model.n_classes):
            raise DataError("labels outside the model's class range")


def _forward(model: ModelState, x: np.ndarray):
    p = model.params
    if model.kind == "softmax_linear":
        return x @ p["W1"] + p["b1"], None
    h = np.tanh(x @ p["W1"] + p["b1"])
    return h @ p["W2"] + p["b2"], h


def _log_softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


def logits(model: ModelState, x: np.ndarray) -> np.ndarray:
    _check(model, x)
    return _forward(model, x)[0]


def cross_entropy(z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Per-row softmax cross-entropy of logits ``z``."""
    return -_log_softmax(z)[np.arange(y.size), y]


def per_sample_loss(model: ModelState, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    _check(model, x, y)
    return cross_entropy(_forward(model, x)[0], y)


def loss_and_grads(
    model: ModelState, x: np.ndarray, y: np.ndarray, weights: np.ndarray | None = None
) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Per-sample losses and gradients of ``mean(weights * losses)``."""
    _check(model, x, y)
    z, h = _forward(model, x)
    logp = _log_softmax(z)
    n = y.size
    rows = np.arange(n)
    losses = -logp[rows, y]
    dz = np.exp(logp)
    dz[rows, y] -= 1.0
    scale = np.full(n, 1.0 / n) if weights is None else weights / n
    dz *= scale[:, None]

    p = model.params
    if model.kind == "softmax_linear":
        return losses, {"W1": x.T @ dz, "b1": dz.sum(axis=0)}
    dh = (dz @ p["W2"].T) * (1.0 - h * h)
    grads = {
        "W1": x.T @ dh,
        "b1": dh.sum(axis=0),
        "W2": h.T @ dz,
        "b2": dz.sum(axis=0),
    }
    return losses, grads


def objective(model: ModelState, x: np.ndarray, y: np.ndarray, weights: np.ndarray | None = None) -> float:
    losses = per_sample_loss(model, x, y)
    if weights is not None:
        losses = losses * weights
    return float(losses.mean())
