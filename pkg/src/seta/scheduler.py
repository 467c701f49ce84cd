"""Sliding-window curriculum over loss clusters with partial annealing."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .clustering import METHODS, cluster_losses
from .errors import ConfigError, DataError
from .ledger import LossLedger
from .plan import EpochPlan, WindowState
from .rng import stream

ORDERINGS = ("easy_to_hard", "hard_to_easy")
WINDOW_POLICIES = ("cyclic", "continuous")


@dataclass(frozen=True)
class SchedulerConfig:
    r: float = 0.6
    k: int = 10
    alpha: float = 0.5
    ordering: str = "easy_to_hard"
    window_policy: str = "cyclic"
    anneal_fraction: float = 0.125
    epochs: int = 30
    seed: int = 0
    cluster_method: str = "exact_dp"

    def __post_init__(self):
        if not 0 < self.r <= 1:
            raise ConfigError(f"r must be in (0, 1], got {self.r}")
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k}")
        if not 0 < self.alpha <= 1:
            raise ConfigError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.ordering not in ORDERINGS:
            raise ConfigError(f"ordering must be one of {ORDERINGS}, got {self.ordering!r}")
        if self.window_policy not in WINDOW_POLICIES:
            raise ConfigError(f"window_policy must be one of {WINDOW_POLICIES}, got {self.window_policy!r}")
        if not 0 <= self.anneal_fraction < 1:
            raise ConfigError(f"anneal_fraction must be in [0, 1), got {self.anneal_fraction}")
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise ConfigError(f"epochs must be a positive integer, got {self.epochs}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.cluster_method not in METHODS:
            raise ConfigError(f"cluster_method must be one of {METHODS}, got {self.cluster_method!r}")

    @property
    def window_size(self) -> int:
        return compute_window_size(self.k, self.alpha)

    @property
    def anneal_start(self) -> int:
        """First epoch of the anneal phase (== epochs when there is none)."""
        return anneal_start(self.epochs, self.anneal_fraction)

    def to_dict(self) -> dict:
        return asdict(self)


def compute_window_size(k: int, alpha: float) -> int:
    if int(k) != k or k < 1:
        raise ConfigError(f"k must be a positive integer, got {k}")
    if not 0 < alpha <= 1:
        raise ConfigError(f"alpha must be in (0, 1], got {alpha}")
    # round() guards against 0.1 * 10 style representation error
    return max(1, math.ceil(round(alpha * k, 9)))


def anneal_start(epochs: int, anneal_fraction: float) -> int:
    return math.ceil(round((1.0 - anneal_fraction) * epochs, 9))


def window_bounds(n: int, k_eff: int, w: int, policy: str = "cyclic") -> tuple[int, int, list[int]]:
    """Window start, end and covered cluster positions for round ``n``.

    cyclic: s = n mod (k - w + 1), e = s + w - 1.
    continuous: s = n mod k and the window wraps past the last cluster.
    """
    if not 1 <= w <= k_eff:
        raise ConfigError(f"window width {w} must lie in [1, {k_eff}]")
    if n < 0:
        raise ConfigError(f"round counter must be non-negative, got {n}")
    if policy == "cyclic":
        s = n % (k_eff - w + 1)
        e = s + w - 1
        return s, e, list(range(s, e + 1))
    if policy == "continuous":
        s = n % k_eff
        idx = [(s + i) % k_eff for i in range(w)]
        return s, idx[-1], idx
    raise ConfigError(f"unknown window policy {policy!r}")


def downsample(dataset_size: int, r: float, rng: np.random.Generator) -> np.ndarray:
    """``max(1, floor(r |D|))`` distinct ids, uniformly without replacement, sorted."""
    if dataset_size < 1:
        raise DataError("cannot down-sample an empty population")
    if not 0 < r <= 1:
        raise ConfigError(f"r must be in (0, 1], got {r}")
    m = max(1, math.floor(round(r * dataset_size, 9)))
    if m == dataset_size:
        return np.arange(dataset_size, dtype=np.int64)
    return np.sort(rng.choice(dataset_size, size=m, replace=False)).astype(np.int64)


def anneal_select(dataset_size: int, r: float, rng: np.random.Generator) -> np.ndarray:
    """Each id kept independently when its uniform draw falls below ``r``."""
    if not 0 < r <= 1:
        raise ConfigError(f"r must be in (0, 1], got {r}")
    u = rng.random(dataset_size)
    return np.flatnonzero(u < r).astype(np.int64)


def select_window(ordered_members, indices) -> np.ndarray:
    """Sorted union of the clusters at ``indices`` of ``ordered_members``."""
    parts = [ordered_members[i] for i in indices]
    return np.sort(np.concatenate(parts)).astype(np.int64)


def epoch_phase(config: SchedulerConfig, epoch: int) -> str:
    if not 0 <= epoch < config.epochs:
        raise ConfigError(f"epoch {epoch} outside 0..{config.epochs - 1}")
    if epoch == 0:
        return "bootstrap"
    if epoch >= config.anneal_start:
        return "anneal"
    return "curriculum"


def plan_epoch(
    config: SchedulerConfig,
    ledger: LossLedger,
    epoch: int,
    window_state: WindowState,
) -> tuple[EpochPlan, WindowState]:
    """Plan one epoch; returns the plan and the window state for the next one."""
    n_data = ledger.size
    phase = epoch_phase(config, epoch)

    if phase == "bootstrap":
        subset = downsample(n_data, config.r, stream(config.seed, "downsample", epoch))
        plan = EpochPlan(epoch, phase, subset, n_data, subset.size)
        return plan, window_state

    if phase == "anneal":
        selected = anneal_select(n_data, config.r, stream(config.seed, "anneal", epoch))
        plan = EpochPlan(epoch, phase, selected, n_data, n_data)
        return plan, window_state

    subset = downsample(n_data, config.r, stream(config.seed, "downsample", epoch))
    losses, n_imputed = ledger.impute(subset)
    partition = cluster_losses(losses, config.k, method=config.cluster_method, ids=subset)
    ordered = list(partition.members)
    if config.ordering == "hard_to_easy":
        ordered.reverse()
    k_eff = partition.k
    w = min(config.window_size, k_eff)
    s, e, indices = window_bounds(window_state.n, k_eff, w, config.window_policy)
    selected = select_window(ordered, indices)
    used = WindowState(n=window_state.n, w=w, s=s, e=e)
    plan = EpochPlan(
        epoch, phase, selected, n_data, subset.size,
        window=used, k_eff=k_eff, n_imputed=n_imputed,
    )
    return plan, WindowState(n=window_state.n + 1, w=w, s=s, e=e)


class SetaScheduler:
    """Stateful wrapper that plans epochs in order and keeps the history."""

    def __init__(self, config: SchedulerConfig, dataset_size: int):
        self.config = config
        self.dataset_size = int(dataset_size)
        self.window_state = WindowState.initial(config.window_size)
        self.plans: list[EpochPlan] = []

    def plan(self, epoch: int, ledger: LossLedger) -> EpochPlan:
        if ledger.size != self.dataset_size:
            raise DataError(f"ledger size {ledger.size} != dataset size {self.dataset_size}")
        if epoch != len(self.plans):
            raise ConfigError(f"epochs must be planned in order; expected {len(self.plans)}, got {epoch}")
        plan, self.window_state = plan_epoch(self.config, ledger, epoch, self.window_state)
        self.plans.append(plan)
        return plan
