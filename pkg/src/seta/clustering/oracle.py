"""Exhaustive reference for small 1-D k-means instances."""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..errors import DataError
from .kmeans import ClusterPartition, partition_from_labels

MAX_N = 16
MAX_K = 4


def _direct_sse(values) -> float:
    mu = math.fsum(values) / len(values)
    return math.fsum((v - mu) ** 2 for v in values)


def oracle_best_partition(losses, k: int) -> ClusterPartition:
    """Try every contiguous split of the sorted losses; keep the cheapest."""
    x = np.asarray(losses, dtype=np.float64)
    n = x.size
    if n == 0:
        raise DataError("empty input")
    if n > MAX_N or k > MAX_K or k < 1:
        raise DataError(f"oracle limited to n <= {MAX_N}, 1 <= k <= {MAX_K}; got n={n}, k={k}")
    order = np.argsort(x, kind="stable")
    xs = x[order].tolist()
    parts = min(k, n)
    best_cost = math.inf
    best_cuts: tuple[int, ...] = ()
    for cuts in itertools.combinations(range(1, n), parts - 1):
        bounds = (0, *cuts, n)
        cost = math.fsum(_direct_sse(xs[a:b]) for a, b in zip(bounds, bounds[1:]))
        if cost < best_cost:
            best_cost, best_cuts = cost, cuts
    sorted_labels = np.zeros(n, dtype=np.int64)
    for c in best_cuts:
        sorted_labels[c:] += 1
    labels = np.empty(n, dtype=np.int64)
    labels[order] = sorted_labels
    return partition_from_labels(x, labels)
