"""Run many experiment configs and collect a summary CSV."""

from __future__ import annotations

import copy
import csv
import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Iterable

from ..errors import ConfigError
from .config import ExperimentConfig, apply_overrides, from_dict
from .runner import load_dataset, run_single

log = logging.getLogger(__name__)

SUMMARY_FIELDS = ("method", "r", "k", "alpha", "seed", "rho_bar", "final_acc")


def _row(cfg: ExperimentConfig, seed: int, rho_bar: float, final_acc: float) -> dict[str, Any]:
    if cfg.method == "seta":
        r, k, alpha = cfg.scheduler.r, cfg.scheduler.k, cfg.scheduler.alpha
    elif cfg.method == "full":
        r, k, alpha = "", "", ""
    else:
        r, k, alpha = cfg.baseline.r, "", ""
    return {"method": cfg.method, "r": r, "k": k, "alpha": alpha, "seed": seed, "rho_bar": rho_bar, "final_acc": final_acc}


def _run_job(job: tuple[ExperimentConfig, int]) -> dict[str, Any]:
    cfg, seed = job
    try:
        res = run_single(cfg, seed, load_dataset(cfg.dataset))
        acc = res.final_acc if res.final_acc is not None else math.nan
        return _row(cfg, seed, res.rho_bar, acc)
    except Exception as exc:  # one failed run must not stop the sweep
        log.error("run %s seed %d failed: %s", cfg.output_dir, seed, exc)
        return _row(cfg, seed, math.nan, math.nan)


def sweep(configs: Iterable[ExperimentConfig], summary_path: str | Path, workers: int = 1) -> list[dict[str, Any]]:
    """Run every (config, seed) pair and write one summary row for each.

    Failed runs appear as rows with NaN metrics. ``workers > 1`` runs jobs
    in separate processes; rows keep the submission order either way.
    """
    configs = list(configs)
    if not configs:
        raise ConfigError("sweep needs at least one config")
    dirs = [c.output_dir for c in configs]
    if len(set(dirs)) != len(dirs):
        raise ConfigError("sweep configs must have distinct output_dir values")
    jobs = [(c, s) for c in configs for s in c.seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_job, jobs))
    else:
        rows = [_run_job(j) for j in jobs]

    summary_path = Path(summary_path)
    summary_path.parent.mkdir(parents=True, exist_ok=True)
    with open(summary_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return rows


def _set_path(d: dict, dotted: str, value: Any) -> None:
    keys = dotted.split(".")
    for key in keys[:-1]:
        d = d.setdefault(key, {})
    d[keys[-1]] = value


def expand_sweep(raw: dict[str, Any], **flags) -> tuple[list[ExperimentConfig], Path]:
    """Turn a sweep file into configs.

    Two forms are accepted: ``{"configs": [...], "output_dir": ...}`` lists
    experiment configs outright, ``{"base": {...}, "grid": {"scheduler.alpha":
    [...], ...}, "output_dir": ...}`` takes the cartesian product of the grid
    over the base. Command-line flags override every generated config.
    Returns the configs and the summary CSV path.
    """
    if not isinstance(raw, dict):
        raise ConfigError("sweep file must be a JSON object")
    unknown = set(raw) - {"configs", "base", "grid", "output_dir"}
    if unknown:
        raise ConfigError(f"unknown sweep keys: {sorted(unknown)}")
    root = Path(flags.get("out") or raw.get("output_dir") or "runs/sweep")
    flags = {k: v for k, v in flags.items() if k != "out"}

    raws: list[tuple[str, dict]] = []
    if "configs" in raw:
        if "grid" in raw or "base" in raw:
            raise ConfigError("use either 'configs' or 'base'/'grid', not both")
        for i, c in enumerate(raw["configs"]):
            raws.append((f"run_{i:03d}", c))
    else:
        base = raw.get("base", {})
        grid = raw.get("grid", {})
        if not isinstance(grid, dict):
            raise ConfigError("grid must map dotted keys to value lists")
        keys = sorted(grid)
        for key in keys:
            if not isinstance(grid[key], list) or not grid[key]:
                raise ConfigError(f"grid entry {key!r} must be a non-empty list")
        for values in itertools.product(*(grid[k] for k in keys)):
            c = copy.deepcopy(base)
            for key, val in zip(keys, values):
                _set_path(c, key, val)
            tag = "_".join(f"{k.split('.')[-1]}={v}" for k, v in zip(keys, values)) or "base"
            raws.append((tag, c))

    configs = []
    for tag, c in raws:
        c = apply_overrides(c, **flags)
        c["output_dir"] = str(root / tag)
        configs.append(from_dict(c))
    return configs, root / "summary.csv"

