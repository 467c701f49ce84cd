"""Dynamic training-set pruning: loss clusters swept by an easy-to-hard window."""

from .baselines import BASELINE_METHODS, BaselineConfig, BaselineScheduler, plan_epoch_baseline
from .clustering import ClusterPartition, cluster_losses, oracle_best_partition, sse
from .errors import ConfigError, DataError, DivergenceError, SetaError
from .ledger import LossLedger, impute_losses, record_losses
from .plan import EpochPlan, WindowState, cumulative_pruned, estimate_time_saving
from .scheduler import (
    SchedulerConfig,
    SetaScheduler,
    anneal_select,
    compute_window_size,
    downsample,
    plan_epoch,
    window_bounds,
)

__version__ = "0.1.0"
