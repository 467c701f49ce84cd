"""Single-run driver: plan -> train -> record losses -> evaluate, per epoch.

Each run writes into ``<output_dir>/seed_<seed>/``:

``metrics.jsonl``
    One ``{"type": "epoch", ...}`` object per epoch, then one
    ``{"type": "footer", ...}``. Contains no timing, so it is byte-identical
    across repeated runs of the same config and seed. A failed run ends
    with ``{"type": "aborted", ...}`` instead of a footer.
``timing.jsonl``
    Wall-clock per epoch plus a footer with per-sample selection and
    training cost and the resulting time-saving estimate.
``config.json``
    The resolved single-run config.

Epoch keys: ``epoch, phase, n_selected, subset_size, rho_t, rho_bar_cum,
window (null or [s, e]), window_n, k_eff, n_imputed, train_loss, val_acc,
val_loss``. Footer keys: ``epochs, dataset_size, rho_bar, final_val_acc,
final_val_loss, method, config_hash``.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..baselines import BaselineScheduler
from ..errors import SetaError
from ..ledger import LossLedger
from ..plan import EpochPlan, cumulative_pruned, estimate_time_saving
from ..rng import stream
from ..scheduler import SetaScheduler
from ..training import Dataset, SynthSpec, evaluate, generate_synthetic, init_model, load_csv, sgd_epoch
from .config import CsvSource, ExperimentConfig

log = logging.getLogger(__name__)


class RunFailed(SetaError, RuntimeError):
    pass


@dataclass
class RunResult:
    seed: int
    method: str
    out_dir: Path
    epochs: list[dict[str, Any]] = field(default_factory=list)
    footer: dict[str, Any] = field(default_factory=dict)
    timing: dict[str, Any] = field(default_factory=dict)

    @property
    def rho_bar(self) -> float:
        return self.footer["rho_bar"]

    @property
    def final_acc(self) -> float:
        return self.footer["final_val_acc"]


def load_dataset(source: SynthSpec | CsvSource) -> Dataset:
    if isinstance(source, SynthSpec):
        return generate_synthetic(source)
    ds = load_csv(source.path, label_column=source.label_column)
    if ds.indices("validation").size == 0 and source.validation_fraction > 0:
        n = ds.labels.size
        n_val = int(round(source.validation_fraction * n))
        if 0 < n_val < n:
            val = stream(0, "csv_split").choice(n, size=n_val, replace=False)
            ds.split = ds.split.astype("<U10")
            ds.split[val] = "validation"
    return ds


def _dump(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=True)


def _epoch_record(plan: EpochPlan, rho_bar_cum: float, train_loss: float, ev: dict | None) -> dict[str, Any]:
    win = plan.window
    return {
        "type": "epoch",
        "epoch": plan.epoch,
        "phase": plan.phase,
        "n_selected": plan.n_selected,
        "subset_size": plan.subset_size,
        "rho_t": plan.rho,
        "rho_bar_cum": rho_bar_cum,
        "window": None if win is None else [win.s, win.e],
        "window_n": None if win is None else win.n,
        "k_eff": plan.k_eff,
        "n_imputed": plan.n_imputed,
        "train_loss": train_loss,
        "val_acc": None if ev is None else ev["accuracy"],
        "val_loss": None if ev is None else ev["loss"],
    }


def run_single(cfg: ExperimentConfig, seed: int, dataset: Dataset | None = None) -> RunResult:
    """Execute one seed of ``cfg`` and write its artifacts."""
    out = Path(cfg.output_dir) / f"seed_{seed}"
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "config.json", "w", encoding="utf-8") as fh:
        json.dump(cfg.run_dict(seed), fh, indent=2, sort_keys=True)
        fh.write("\n")

    result = RunResult(seed=seed, method=cfg.method, out_dir=out)
    metrics = open(out / "metrics.jsonl", "w", encoding="utf-8")
    timing = open(out / "timing.jsonl", "w", encoding="utf-8")
    epoch = None
    try:
        ds = dataset if dataset is not None else load_dataset(cfg.dataset)
        x_tr, y_tr = ds.arrays("train")
        x_va, y_va = ds.arrays("validation")
        n = y_tr.size
        if n == 0:
            raise RunFailed("dataset has no training rows")
        train_cfg = cfg.train_for(seed)
        model = init_model(cfg.model_kind, ds.dim, ds.n_classes, cfg.hidden, seed)
        ledger = LossLedger(n)
        if cfg.method == "seta":
            selector = SetaScheduler(cfg.scheduler_for(seed), n)
        else:
            selector = BaselineScheduler(cfg.baseline_for(seed), n)

        plan_s = train_s = 0.0
        samples_trained = 0
        ev = None
        for epoch in range(cfg.epochs):
            t0 = time.perf_counter()
            plan = selector.plan(epoch, ledger)
            t1 = time.perf_counter()
            model, ids, losses = sgd_epoch(model, x_tr, y_tr, plan.selected, train_cfg, epoch, plan.weights)
            ledger.record(epoch, ids, losses)
            t2 = time.perf_counter()
            ev = evaluate(model, x_va, y_va) if y_va.size else None
            t3 = time.perf_counter()
            plan_s += t1 - t0
            train_s += t2 - t1
            samples_trained += plan.n_selected

            rec = _epoch_record(plan, cumulative_pruned(selector.plans, n), float(losses.mean()), ev)
            metrics.write(_dump(rec) + "\n")
            metrics.flush()
            timing.write(_dump({"epoch": epoch, "wall_ms": (t3 - t0) * 1e3, "plan_ms": (t1 - t0) * 1e3, "train_ms": (t2 - t1) * 1e3}) + "\n")
            timing.flush()
            result.epochs.append(rec)
            log.debug("seed %d epoch %d: %s selected=%d acc=%s", seed, epoch, plan.phase, plan.n_selected, rec["val_acc"])

        rho_bar = cumulative_pruned(selector.plans, n)
        result.footer = {
            "type": "footer",
            "epochs": cfg.epochs,
            "dataset_size": n,
            "rho_bar": rho_bar,
            "final_val_acc": None if ev is None else ev["accuracy"],
            "final_val_loss": None if ev is None else ev["loss"],
            "method": cfg.method,
            "config_hash": cfg.run_hash(seed),
        }
        metrics.write(_dump(result.footer) + "\n")
        o_data = plan_s / (cfg.epochs * n)
        o_model = train_s / max(samples_trained, 1)
        result.timing = {
            "type": "footer",
            "o_data_s": o_data,
            "o_model_s": o_model,
            "time_saving": estimate_time_saving(rho_bar, o_data, o_model) if o_model > 0 else None,
        }
        timing.write(_dump(result.timing) + "\n")
    except Exception as exc:
        metrics.write(_dump({"type": "aborted", "epoch": epoch, "error": f"{type(exc).__name__}: {exc}"}) + "\n")
        raise
    finally:
        metrics.close()
        timing.close()
    return result


def run_experiment(cfg: ExperimentConfig) -> list[RunResult]:
    """Run every seed of ``cfg`` serially; the dataset is built once."""
    ds = load_dataset(cfg.dataset)
    return [run_single(cfg, s, ds) for s in cfg.seeds]


def read_metrics(path: str | Path) -> tuple[list[dict], dict | None]:
    """Parse a metrics file into (epoch records, footer or None)."""
    epochs, footer = [], None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            if obj.get("type") == "epoch":
                epochs.append(obj)
            elif obj.get("type") == "footer":
                footer = obj
    return epochs, footer


def replay_rho_bar(epochs: list[dict], dataset_size: int) -> float:
    return cumulative_pruned([e["n_selected"] for e in epochs], dataset_size)


def mean_acc(results: list[RunResult]) -> float:
    return float(np.mean([r.final_acc for r in results]))
