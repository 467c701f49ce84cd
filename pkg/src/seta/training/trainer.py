from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import ConfigError, DataError, DivergenceError
from ..rng import stream
from .model import ModelState, cross_entropy, logits, loss_and_grads


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 0.01
    batch_size: int = 128
    epochs: int = 30
    momentum: float = 0.9
    weight_decay: float = 5e-4
    seed: int = 0

    def __post_init__(self):
        if not self.lr >= 0:
            raise ConfigError(f"lr must be >= 0, got {self.lr}")
        if int(self.batch_size) != self.batch_size or self.batch_size < 1:
            raise ConfigError(f"batch_size must be a positive integer, got {self.batch_size}")
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise ConfigError(f"epochs must be a positive integer, got {self.epochs}")
        if not 0 <= self.momentum < 1:
            raise ConfigError(f"momentum must be in [0, 1), got {self.momentum}")
        if self.weight_decay < 0:
            raise ConfigError(f"weight_decay must be >= 0, got {self.weight_decay}")

    def to_dict(self) -> dict:
        return asdict(self)


def sgd_epoch(
    model: ModelState,
    x: np.ndarray,
    y: np.ndarray,
    selected: np.ndarray,
    cfg: TrainConfig,
    epoch: int,
    weights: np.ndarray | None = None,
) -> tuple[ModelState, np.ndarray, np.ndarray]:
    """One pass of momentum SGD over exactly the ``selected`` rows.

    The model is updated in place and returned. Also returns the visited
    ids and their forward-pass losses (taken before each batch's update).
    ``weights`` scale each selected sample's loss.
    """
    selected = np.asarray(selected, dtype=np.int64)
    if selected.size == 0:
        raise DataError("sgd_epoch needs at least one selected sample")
    if weights is not None and weights.shape != selected.shape:
        raise DataError("weights must align with selected ids")
    order = stream(cfg.seed, "shuffle", epoch).permutation(selected.size)
    ids = selected[order]
    w = None if weights is None else weights[order]

    if not model.velocity:
        model.velocity = {k: np.zeros_like(v) for k, v in model.params.items()}
    params, vel = model.params, model.velocity
    observed = np.empty(ids.size)
    bs = cfg.batch_size
    for b, start in enumerate(range(0, ids.size, bs)):
        batch = ids[start:start + bs]
        losses, grads = loss_and_grads(model, x[batch], y[batch], None if w is None else w[start:start + bs])
        if not np.all(np.isfinite(losses)):
            raise DivergenceError(f"non-finite loss at epoch {epoch}, batch {b}")
        observed[start:start + batch.size] = losses
        for name, g in grads.items():
            if cfg.weight_decay and name.startswith("W"):
                g = g + cfg.weight_decay * params[name]
            v = vel[name]
            v *= cfg.momentum
            v += g
            params[name] -= cfg.lr * v
    return model, ids, observed


def evaluate(model: ModelState, x: np.ndarray, y: np.ndarray) -> dict[str, float]:
    if y.size == 0:
        raise DataError("cannot evaluate on an empty split")
    z = logits(model, x)
    losses = cross_entropy(z, y)
    acc = float(np.mean(np.argmax(z, axis=1) == y))
    return {"accuracy": acc, "loss": float(losses.mean())}
