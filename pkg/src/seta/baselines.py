"""Comparator selection policies that emit the same EpochPlan records."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError, DataError
from .ledger import LossLedger
from .plan import EpochPlan
from .rng import stream
from .scheduler import anneal_start, downsample

BASELINE_METHODS = ("full", "static_random", "dynamic_random", "mean_loss_prune")


@dataclass(frozen=True)
class BaselineConfig:
    """Settings for the comparator policies.

    ``p`` and ``rescale`` only affect ``mean_loss_prune`` (a simplified
    InfoBatch); ``p = 0.5`` is our own default. ``anneal_fraction`` is the
    trailing share of epochs that ``mean_loss_prune`` trains on full data.
    """

    method: str = "dynamic_random"
    r: float = 0.6
    p: float = 0.5
    rescale: bool = True
    anneal_fraction: float = 0.125
    epochs: int = 30
    seed: int = 0

    def __post_init__(self):
        if self.method not in BASELINE_METHODS:
            raise ConfigError(f"baseline method must be one of {BASELINE_METHODS}, got {self.method!r}")
        if not 0 < self.r <= 1:
            raise ConfigError(f"r must be in (0, 1], got {self.r}")
        if not 0 <= self.p <= 1:
            raise ConfigError(f"p must be in [0, 1], got {self.p}")
        if self.method == "mean_loss_prune" and self.rescale and self.p == 1:
            raise ConfigError("p = 1 with rescale on divides by zero")
        if not 0 <= self.anneal_fraction < 1:
            raise ConfigError(f"anneal_fraction must be in [0, 1), got {self.anneal_fraction}")
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise ConfigError(f"epochs must be a positive integer, got {self.epochs}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def to_dict(self) -> dict:
        return asdict(self)


def plan_epoch_baseline(cfg: BaselineConfig, ledger: LossLedger, epoch: int) -> EpochPlan:
    if not 0 <= epoch < cfg.epochs:
        raise ConfigError(f"epoch {epoch} outside 0..{cfg.epochs - 1}")
    n = ledger.size
    everything = np.arange(n, dtype=np.int64)

    if cfg.method == "full":
        return EpochPlan(epoch, "full", everything, n, n)
    if cfg.method == "static_random":
        # drawn from the epoch-0 stream every time, hence identical each epoch
        sel = downsample(n, cfg.r, stream(cfg.seed, "static_random", 0))
        return EpochPlan(epoch, "random", sel, n, n)
    if cfg.method == "dynamic_random":
        sel = downsample(n, cfg.r, stream(cfg.seed, "dynamic_random", epoch))
        return EpochPlan(epoch, "random", sel, n, n)

    # mean_loss_prune
    if epoch >= anneal_start(cfg.epochs, cfg.anneal_fraction):
        return EpochPlan(epoch, "anneal", everything, n, n)
    losses, n_imputed = ledger.impute(everything)
    below = losses < ledger.global_mean
    u = stream(cfg.seed, "mean_loss_prune", epoch).random(n)
    keep = ~below | (u < 1.0 - cfg.p)
    sel = everything[keep]
    weights = None
    if cfg.rescale:
        weights = np.where(below[keep], 1.0 / (1.0 - cfg.p), 1.0)
    return EpochPlan(epoch, "prune", sel, n, n, n_imputed=n_imputed, weights=weights)


class BaselineScheduler:
    def __init__(self, config: BaselineConfig, dataset_size: int):
        self.config = config
        self.dataset_size = int(dataset_size)
        self.plans: list[EpochPlan] = []

    def plan(self, epoch: int, ledger: LossLedger) -> EpochPlan:
        if ledger.size != self.dataset_size:
            raise DataError(f"ledger size {ledger.size} != dataset size {self.dataset_size}")
        plan = plan_epoch_baseline(self.config, ledger, epoch)
        self.plans.append(plan)
        return plan
