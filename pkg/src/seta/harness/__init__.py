from .config import CsvSource, ExperimentConfig, apply_overrides, from_dict, load_config
from .runner import RunResult, read_metrics, replay_rho_bar, run_experiment, run_single
from .sweep import SUMMARY_FIELDS, expand_sweep, sweep

__all__ = [
    "SUMMARY_FIELDS",
    "CsvSource",
    "ExperimentConfig",
    "RunResult",
    "apply_overrides",
    "expand_sweep",
    "from_dict",
    "load_config",
    "read_metrics",
    "replay_rho_bar",
    "run_experiment",
    "run_single",
    "sweep",
]
