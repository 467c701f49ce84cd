"""Loss-guided 1-D k-means: exact dynamic program and Lloyd's iteration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .. import _accel
from ..errors import DataError
from . import _kernels

METHODS = ("exact_dp", "lloyd")


@dataclass(frozen=True)
class ClusterPartition:
    """Difficulty clusters over a set of sample ids.

    ``labels[i]`` is the cluster of ``ids[i]``; clusters are numbered in
    ascending centroid order and ``members[j]`` lists cluster ``j``'s ids
    in ascending id order.
    """

    ids: np.ndarray
    labels: np.ndarray
    centroids: np.ndarray
    members: tuple[np.ndarray, ...]

    @property
    def k(self) -> int:
        return int(self.centroids.shape[0])

    @property
    def sizes(self) -> np.ndarray:
        return np.array([m.size for m in self.members], dtype=np.int64)

    def assignment(self) -> dict[int, int]:
        return {int(i): int(c) for i, c in zip(self.ids, self.labels)}


def _as_losses(losses) -> np.ndarray:
    x = np.asarray(losses, dtype=np.float64)
    if x.ndim != 1:
        raise DataError(f"losses must be a vector, got shape {x.shape}")
    if x.size == 0:
        raise DataError("cannot cluster an empty loss vector")
    if not np.all(np.isfinite(x)):
        bad = int(np.flatnonzero(~np.isfinite(x))[0])
        raise DataError(f"non-finite loss at position {bad}")
    return x


def partition_from_labels(losses: np.ndarray, labels: np.ndarray, ids: np.ndarray | None = None) -> ClusterPartition:
    """Build a canonical partition from arbitrary integer labels.

    Empty labels vanish, clusters whose means coincide are merged, and
    clusters are renumbered by ascending centroid.
    """
    x = _as_losses(losses)
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != x.shape:
        raise DataError("labels must align with losses")
    ids = np.arange(x.size, dtype=np.int64) if ids is None else np.asarray(ids, dtype=np.int64)
    if ids.shape != x.shape:
        raise DataError("ids must align with losses")

    used, dense = np.unique(labels, return_inverse=True)
    sums = np.bincount(dense, weights=x, minlength=used.size)
    counts = np.bincount(dense, minlength=used.size)
    means = sums / counts
    # rank means; equal means share a rank (merge). The bincount means only
    # order the clusters; stored centroids use exactly rounded sums.
    uniq_means, rank = np.unique(means, return_inverse=True)
    new_labels = rank[dense]
    centroids = np.empty(uniq_means.size)
    members = []
    for j in range(uniq_means.size):
        mask = new_labels == j
        vals = x[mask]
        centroids[j] = math.fsum(vals) / vals.size
        members.append(np.sort(ids[mask]))
    return ClusterPartition(ids=ids, labels=new_labels.astype(np.int64), centroids=centroids, members=tuple(members))


def _exact_dp_labels(x: np.ndarray, k: int) -> np.ndarray:
    uniq, inverse, counts = np.unique(x, return_inverse=True, return_counts=True)
    k_eff = min(k, uniq.size)
    if k_eff == 1:
        return np.zeros(x.size, dtype=np.int64)
    pw, px, pxx = _kernels.prefix_sums(uniq, counts.astype(np.float64))
    if _accel.USE_NUMBA:
        opt = _kernels.dp_split_table_numba(pw, px, pxx, k_eff)
    else:
        opt = _kernels.dp_split_table_numpy(pw, px, pxx, k_eff)
    return _kernels.backtrack(opt, uniq.size)[inverse]


def _assign(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Nearest centroid in 1-D via midpoints; ties go to the lower index.

    Avoids squaring, which underflows for tiny losses.
    """
    order = np.argsort(centroids, kind="stable")
    c = centroids[order]
    mids = c[:-1] + (c[1:] - c[:-1]) / 2
    return order[np.searchsorted(mids, x, side="left")]


def _lloyd_labels(x: np.ndarray, k: int, max_iter: int, tol: float) -> np.ndarray:
    n_unique = np.unique(x).size
    k_eff = min(k, n_unique)
    xs = np.sort(x)
    q = ((np.arange(k_eff) + 0.5) / k_eff * x.size).astype(np.int64)
    centroids = xs[np.minimum(q, x.size - 1)].astype(np.float64)
    labels = _assign(x, centroids)
    for _ in range(max_iter):
        counts = np.bincount(labels, minlength=k_eff)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            # respawn each empty centroid on the worst-fit point still in a
            # cluster of size > 1
            dist = np.abs(x - centroids[labels])
            for j in empty:
                movable = counts[labels] > 1
                cand = np.where(movable, dist, -1.0)
                p = int(np.argmax(cand))
                counts[labels[p]] -= 1
                labels[p] = j
                counts[j] = 1
                dist[p] = 0.0
        sums = np.bincount(labels, weights=x, minlength=k_eff)
        new_centroids = sums / np.bincount(labels, minlength=k_eff)
        shift = float(np.max(np.abs(new_centroids - centroids)))
        centroids = new_centroids
        labels = _assign(x, centroids)
        if shift < tol:
            break
    return labels


def cluster_losses(
    losses: Sequence[float] | np.ndarray,
    k: int,
    *,
    method: str = "exact_dp",
    ids: Sequence[int] | np.ndarray | None = None,
    lloyd_max_iter: int = 100,
    lloyd_tol: float = 1e-8,
) -> ClusterPartition:
    """Cluster scalar losses into at most ``k`` groups.

    ``exact_dp`` returns the global minimiser of the within-cluster sum of
    squares. ``lloyd`` alternates nearest-centroid assignment and mean
    updates from quantile initialisation. When fewer than ``k`` distinct
    values exist the result has one cluster per distinct value.
    """
    x = _as_losses(losses)
    if int(k) != k or k < 1:
        raise DataError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    if method == "exact_dp":
        labels = _exact_dp_labels(x, k)
    elif method == "lloyd":
        if lloyd_max_iter < 1 or lloyd_tol < 0:
            raise DataError("lloyd_max_iter must be >= 1 and lloyd_tol >= 0")
        labels = _lloyd_labels(x, k, lloyd_max_iter, lloyd_tol)
    else:
        raise DataError(f"unknown clustering method {method!r}; expected one of {METHODS}")
    return partition_from_labels(x, labels, ids)


def sse(losses: Sequence[float] | np.ndarray, partition: ClusterPartition) -> float:
    """Within-cluster sum of squared deviations from the partition's centroids."""
    x = np.asarray(losses, dtype=np.float64)
    if x.shape != partition.labels.shape:
        raise DataError(f"partition covers {partition.labels.size} losses, got {x.size}")
    dev = x - partition.centroids[partition.labels]
    return math.fsum(dev * dev)
