"""JSON experiment configuration.

Top level keys::

    {
      "dataset":   {"synthetic": {...SynthSpec...}} | {"csv": {"path": ..., ...}},
      "model":     {"kind": "mlp_1hidden", "hidden": 64},
      "train":     {"lr", "batch_size", "momentum", "weight_decay"},
      "method":    "seta" | "full" | "static_random" | "dynamic_random" | "mean_loss_prune",
      "scheduler": {"r", "k", "alpha", "ordering", "window_policy", "anneal_fraction", "cluster_method"},
      "baseline":  {"r", "p", "rescale", "anneal_fraction"},
      "epochs":    30,
      "seeds":     [0],
      "output_dir": "runs/example"
    }

``epochs`` and ``seeds`` live only at the top level and are pushed into the
nested sections per run. Every section is optional; unknown keys raise.
"""

from __future__ import annotations

import copy
import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..baselines import BASELINE_METHODS, BaselineConfig
from ..errors import ConfigError
from ..scheduler import SchedulerConfig
from ..training import MODEL_KINDS, SynthSpec, TrainConfig

METHODS = ("seta", *BASELINE_METHODS)
TOP_KEYS = {"dataset", "model", "train", "method", "scheduler", "baseline", "epochs", "seeds", "output_dir"}


@dataclass(frozen=True)
class CsvSource:
    path: str
    label_column: str = "label"
    validation_fraction: float = 0.1  # only used when the file has no split column

    def __post_init__(self):
        if not 0 <= self.validation_fraction < 1:
            raise ConfigError("validation_fraction must be in [0, 1)")


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: SynthSpec | CsvSource = field(default_factory=SynthSpec)
    model_kind: str = "mlp_1hidden"
    hidden: int = 64
    train: TrainConfig = field(default_factory=TrainConfig)
    method: str = "seta"
    scheduler: SchedulerConfig = field(default_factory=SchedulerConfig)
    baseline: BaselineConfig = field(default_factory=BaselineConfig)
    epochs: int = 30
    seeds: tuple[int, ...] = (0,)
    output_dir: str = "runs/default"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.model_kind not in MODEL_KINDS:
            raise ConfigError(f"model kind must be one of {MODEL_KINDS}, got {self.model_kind!r}")
        if int(self.hidden) != self.hidden or self.hidden < 1:
            raise ConfigError("hidden must be a positive integer")
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise ConfigError("epochs must be a positive integer")
        if len(self.seeds) == 0:
            raise ConfigError("seeds must list at least one seed")
        for s in self.seeds:
            if isinstance(s, bool) or int(s) != s or not 0 <= s < 2**64:
                raise ConfigError(f"invalid seed {s!r}")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds must be unique")

    # -- per-run views -------------------------------------------------
    def train_for(self, seed: int) -> TrainConfig:
        return dataclasses.replace(self.train, epochs=self.epochs, seed=seed)

    def scheduler_for(self, seed: int) -> SchedulerConfig:
        return dataclasses.replace(self.scheduler, epochs=self.epochs, seed=seed)

    def baseline_for(self, seed: int) -> BaselineConfig:
        return dataclasses.replace(self.baseline, method=self.method, epochs=self.epochs, seed=seed)

    def with_seeds(self, seeds) -> "ExperimentConfig":
        return dataclasses.replace(self, seeds=tuple(int(s) for s in seeds))

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        if isinstance(self.dataset, SynthSpec):
            ds = {"synthetic": self.dataset.to_dict()}
        else:
            ds = {"csv": dataclasses.asdict(self.dataset)}
        train = self.train.to_dict()
        del train["epochs"], train["seed"]
        sched = self.scheduler.to_dict()
        del sched["epochs"], sched["seed"]
        base = self.baseline.to_dict()
        del base["epochs"], base["seed"], base["method"]
        return {
            "dataset": ds,
            "model": {"kind": self.model_kind, "hidden": self.hidden},
            "train": train,
            "method": self.method,
            "scheduler": sched,
            "baseline": base,
            "epochs": self.epochs,
            "seeds": list(self.seeds),
            "output_dir": self.output_dir,
        }

    def run_dict(self, seed: int) -> dict[str, Any]:
        """Resolved single-run config: ``seed`` replaces ``seeds``."""
        d = self.to_dict()
        del d["seeds"]
        d["seed"] = int(seed)
        return d

    def run_hash(self, seed: int) -> str:
        """Content hash of one run; the output location is not part of it."""
        d = self.run_dict(seed)
        del d["output_dir"]
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _build(cls, section: dict, where: str, fixed: tuple[str, ...] = ()):
    if not isinstance(section, dict):
        raise ConfigError(f"{where} must be an object")
    allowed = {f.name for f in dataclasses.fields(cls)} - set(fixed)
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")
    try:
        return cls(**section)
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def from_dict(raw: dict[str, Any]) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    kw: dict[str, Any] = {}
    if "dataset" in raw:
        ds = raw["dataset"]
        if not isinstance(ds, dict) or len(ds) != 1 or next(iter(ds)) not in ("synthetic", "csv"):
            raise ConfigError('dataset must be {"synthetic": {...}} or {"csv": {...}}')
        kind, body = next(iter(ds.items()))
        kw["dataset"] = _build(SynthSpec, body, "dataset.synthetic") if kind == "synthetic" else _build(CsvSource, body, "dataset.csv")
    if "model" in raw:
        m = raw["model"]
        if not isinstance(m, dict) or set(m) - {"kind", "hidden"}:
            raise ConfigError("model accepts only 'kind' and 'hidden'")
        if "kind" in m:
            kw["model_kind"] = m["kind"]
        if "hidden" in m:
            kw["hidden"] = m["hidden"]
    if "train" in raw:
        kw["train"] = _build(TrainConfig, raw["train"], "train", ("epochs", "seed"))
    if "scheduler" in raw:
        kw["scheduler"] = _build(SchedulerConfig, raw["scheduler"], "scheduler", ("epochs", "seed"))
    if "baseline" in raw:
        kw["baseline"] = _build(BaselineConfig, raw["baseline"], "baseline", ("epochs", "seed", "method"))
    for key in ("method", "epochs", "output_dir"):
        if key in raw:
            kw[key] = raw[key]
    if "seeds" in raw:
        if not isinstance(raw["seeds"], list):
            raise ConfigError("seeds must be a list")
        kw["seeds"] = tuple(raw["seeds"])
    cfg = ExperimentConfig(**kw)
    # nested configs were built with default epochs; re-validate with the real one
    cfg.train_for(cfg.seeds[0])
    cfg.scheduler_for(cfg.seeds[0])
    if cfg.method != "seta":
        cfg.baseline_for(cfg.seeds[0])
    return cfg


def load_config(path: str | Path) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def apply_overrides(raw: dict[str, Any], **flags) -> dict[str, Any]:
    """Overlay command-line flags on a raw config dict.

    ``r`` applies to both the scheduler and the baseline section.
    """
    out = copy.deepcopy(raw)
    if flags.get("method") is not None:
        out["method"] = flags["method"]
    if flags.get("r") is not None:
        out.setdefault("scheduler", {})["r"] = flags["r"]
        out.setdefault("baseline", {})["r"] = flags["r"]
    for name in ("k", "alpha"):
        if flags.get(name) is not None:
            out.setdefault("scheduler", {})[name] = flags[name]
    if flags.get("epochs") is not None:
        out["epochs"] = flags["epochs"]
    if flags.get("seed") is not None:
        out["seeds"] = [flags["seed"]]
    if flags.get("out") is not None:
        out["output_dir"] = str(flags["out"])
    return out
