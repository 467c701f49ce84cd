"""Per-epoch selection records and pruning accounting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError

PHASES = ("bootstrap", "curriculum", "anneal", "full", "random", "prune")


@dataclass(frozen=True)
class WindowState:
    """Window counter ``n`` and the bounds it produced.

    For the continuous policy ``e`` is the wrapped end index, so ``e < s``
    is possible.
    """

    n: int
    w: int
    s: int
    e: int

    @classmethod
    def initial(cls, w: int) -> "WindowState":
        return cls(n=0, w=w, s=0, e=w - 1)


@dataclass(frozen=True)
class EpochPlan:
    epoch: int
    phase: str
    selected: np.ndarray
    dataset_size: int
    subset_size: int
    window: WindowState | None = None
    k_eff: int | None = None
    n_imputed: int = 0
    weights: np.ndarray | None = None  # per-selected loss scale, None means all ones

    def __post_init__(self):
        sel = self.selected
        if sel.size and (sel[0] < 0 or sel[-1] >= self.dataset_size):
            raise ValueError("selected ids out of range")
        if sel.size > 1 and not np.all(np.diff(sel) > 0):
            raise ValueError("selected ids must be strictly increasing")
        if self.weights is not None and self.weights.shape != sel.shape:
            raise ValueError("weights must align with selected ids")

    @property
    def n_selected(self) -> int:
        return int(self.selected.size)

    @property
    def rho(self) -> float:
        """Fraction of the dataset excluded this epoch."""
        return 1.0 - self.n_selected / self.dataset_size


def cumulative_pruned(plans: Sequence[EpochPlan] | Sequence[int], dataset_size: int) -> float:
    """Average pruned fraction over epochs: 1 - sum|S_t| / (T |D|).

    Accepts plans or plain per-epoch selected counts.
    """
    if len(plans) == 0:
        raise ConfigError("need at least one epoch to compute the pruning ratio")
    if dataset_size < 1:
        raise ConfigError("dataset_size must be positive")
    total = sum(p.n_selected if isinstance(p, EpochPlan) else int(p) for p in plans)
    return 1.0 - total / (len(plans) * dataset_size)


def estimate_time_saving(rho_bar: float, o_data: float, o_model: float) -> float:
    """Saved-time fraction rho_bar + o_data / o_model.

    ``o_data`` and ``o_model`` are the per-sample cost of the selection step
    and of a training step. The overhead term is added, as in the source
    formula.
    """
    if o_model <= 0:
        raise ConfigError(f"o_model must be positive, got {o_model}")
    if o_data < 0:
        raise ConfigError(f"o_data must be non-negative, got {o_data}")
    return rho_bar + o_data / o_model
