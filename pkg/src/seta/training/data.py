"""Datasets: a synthetic generator with redundancy and label noise, and CSV loading."""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigError, DataError
from ..rng import stream

SPLITS = ("train", "validation")


@dataclass
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    split: np.ndarray  # "train" / "validation" per row
    provenance: str
    n_classes: int
    clean_labels: np.ndarray | None = None  # generative class, synthetic only
    group: np.ndarray | None = None  # base-sample id shared by near-duplicates

    def __post_init__(self):
        if self.features.ndim != 2 or self.features.shape[0] < 1:
            raise DataError("features must be a non-empty N x d matrix")
        if self.labels.shape != (self.features.shape[0],):
            raise DataError("labels must have one entry per row")
        if np.isnan(self.features).any():
            raise DataError("features contain NaN")
        if self.labels.min() < 0 or self.labels.max() >= self.n_classes:
            raise DataError("labels outside 0..C-1")
        if not np.isin(self.split, SPLITS).all():
            raise DataError(f"split tags must be in {SPLITS}")

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def indices(self, split: str) -> np.ndarray:
        return np.flatnonzero(self.split == split)

    def arrays(self, split: str) -> tuple[np.ndarray, np.ndarray]:
        idx = self.indices(split)
        return self.features[idx], self.labels[idx]


@dataclass(frozen=True)
class SynthSpec:
    """Gaussian class blobs with planted redundancy and label noise.

    Each class is a mixture of ``modes_per_class`` blobs whose centres sit
    roughly ``separation`` apart. Every base sample is followed by
    ``duplication_factor - 1`` jittered copies. The validation split is
    clean: no duplicates and no label noise.
    """

    classes: int = 10
    dim: int = 20
    base_per_class: int = 500
    duplication_factor: int = 4
    dup_sigma: float = 0.05
    label_noise: float = 0.1
    separation: float = 1.3
    modes_per_class: int = 2
    val_per_class: int = 200
    seed: int = 0

    def __post_init__(self):
        for name in ("classes", "dim", "base_per_class", "duplication_factor", "modes_per_class"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v}")
        if self.classes < 2:
            raise ConfigError("need at least two classes")
        if int(self.val_per_class) != self.val_per_class or self.val_per_class < 0:
            raise ConfigError("val_per_class must be a non-negative integer")
        if not 0 <= self.label_noise < 1:
            raise ConfigError(f"label_noise must be in [0, 1), got {self.label_noise}")
        if self.dup_sigma < 0 or self.separation <= 0:
            raise ConfigError("dup_sigma must be >= 0 and separation > 0")

    @property
    def n_train(self) -> int:
        return self.classes * self.base_per_class * self.duplication_factor

    def to_dict(self) -> dict:
        return asdict(self)


def generate_synthetic(spec: SynthSpec) -> Dataset:
    rng = stream(spec.seed, "synthetic")
    c, d, m = spec.classes, spec.dim, spec.modes_per_class
    centres = rng.standard_normal((c, m, d)) * (spec.separation / math.sqrt(2.0))

    def draw(n_per_class: int) -> tuple[np.ndarray, np.ndarray]:
        y = np.repeat(np.arange(c), n_per_class)
        mode = rng.integers(0, m, size=y.size)
        x = centres[y, mode] + rng.standard_normal((y.size, d))
        return x, y

    base_x, base_y = draw(spec.base_per_class)
    n_base = base_y.size
    dup = spec.duplication_factor
    group = np.repeat(np.arange(n_base), dup)
    train_x = base_x[group].copy()
    jitter = rng.standard_normal(train_x.shape) * spec.dup_sigma
    jitter[::dup] = 0.0  # first row of each group is the original sample
    train_x += jitter
    clean = base_y[group]

    noisy = clean.copy()
    n_flip = int(round(spec.label_noise * clean.size))
    flip = rng.choice(clean.size, size=n_flip, replace=False)
    noisy[flip] = (clean[flip] + rng.integers(1, c, size=n_flip)) % c

    val_x, val_y = draw(spec.val_per_class)
    features = np.vstack([train_x, val_x])
    labels = np.concatenate([noisy, val_y])
    split = np.array(["train"] * clean.size + ["validation"] * val_y.size)
    return Dataset(
        features=features,
        labels=labels.astype(np.int64),
        split=split,
        provenance="synthetic",
        n_classes=c,
        clean_labels=np.concatenate([clean, val_y]).astype(np.int64),
        group=np.concatenate([group, np.full(val_y.size, -1)]),
    )


def load_csv(path: str | Path, label_column: str = "label", split_column: str = "split") -> Dataset:
    """Read a headered CSV of numeric features and one label column.

    Labels become dense ids in order of first appearance. An optional
    ``split`` column tags rows as train/validation; without it every row is
    train.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        dupes = sorted({h for h in header if header.count(h) > 1})
        if dupes:
            raise DataError(f"{path}: duplicate header names {dupes}")
        if label_column not in header:
            raise DataError(f"{path}: no label column {label_column!r} in header")
        label_pos = header.index(label_column)
        split_pos = header.index(split_column) if split_column in header else None
        feat_pos = [i for i in range(len(header)) if i not in (label_pos, split_pos)]
        if not feat_pos:
            raise DataError(f"{path}: no feature columns")

        rows, raw_labels, splits = [], [], []
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}:{line}: expected {len(header)} fields, got {len(row)}")
            vals = []
            for i in feat_pos:
                try:
                    v = float(row[i])
                except ValueError:
                    raise DataError(f"{path}:{line}: non-numeric value {row[i]!r} in column {header[i]!r}") from None
                if math.isnan(v):
                    raise DataError(f"{path}:{line}: NaN in column {header[i]!r}")
                vals.append(v)
            rows.append(vals)
            raw_labels.append(row[label_pos].strip())
            if split_pos is not None:
                tag = row[split_pos].strip()
                if tag not in SPLITS:
                    raise DataError(f"{path}:{line}: split must be one of {SPLITS}, got {tag!r}")
                splits.append(tag)

    if not rows:
        raise DataError(f"{path}: no data rows")
    ids: dict[str, int] = {}
    labels = np.array([ids.setdefault(lab, len(ids)) for lab in raw_labels], dtype=np.int64)
    split = np.array(splits) if split_pos is not None else np.array(["train"] * len(rows))
    return Dataset(
        features=np.asarray(rows, dtype=np.float64),
        labels=labels,
        split=split,
        provenance="csv",
        n_classes=max(len(ids), 1),
    )
