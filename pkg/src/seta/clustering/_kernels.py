"""Weighted 1-D k-means dynamic program, numba and numpy flavours.

Both kernels take distinct values ``x`` sorted ascending with positive
weights ``w`` (multiplicities) and return an ``(k, n + 1)`` table of split
points. ``opt[q - 1, i]`` is the start of the last cluster in the best
partition of the first ``i`` values into ``q`` clusters.

Rows are filled by divide and conquer over the split index, which is valid
because the smallest optimal split is non-decreasing in ``i`` for
squared-error costs on sorted data. Total work is O(k n log n).

The two kernels evaluate identical floating point expressions and break
ties toward the smallest split index, so their outputs agree exactly.
"""

from __future__ import annotations

import numpy as np

from .._accel import njit


def prefix_sums(x: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # Centering first keeps the sxx - sx^2/sw cancellation small.
    xc = x - np.average(x, weights=w)
    n = x.shape[0]
    pw = np.zeros(n + 1)
    px = np.zeros(n + 1)
    pxx = np.zeros(n + 1)
    np.cumsum(w, out=pw[1:])
    np.cumsum(w * xc, out=px[1:])
    np.cumsum(w * xc * xc, out=pxx[1:])
    return pw, px, pxx


@njit
def _seg_cost(pw, px, pxx, a, b):
    sw = pw[b] - pw[a]
    sx = px[b] - px[a]
    c = (pxx[b] - pxx[a]) - sx * sx / sw
    return c if c > 0.0 else 0.0


@njit
def dp_split_table_numba(pw, px, pxx, k):
    n = pw.shape[0] - 1
    opt = np.zeros((k, n + 1), dtype=np.int64)
    prev = np.full(n + 1, np.inf)
    cur = np.full(n + 1, np.inf)
    for i in range(1, n + 1):
        prev[i] = _seg_cost(pw, px, pxx, 0, i)
    stack = np.empty((4 * (n + 2) + 64, 4), dtype=np.int64)
    for q in range(2, k + 1):
        for i in range(n + 1):
            cur[i] = np.inf
        top = 0
        stack[0, 0] = q
        stack[0, 1] = n
        stack[0, 2] = q - 1
        stack[0, 3] = n - 1
        top = 1
        while top > 0:
            top -= 1
            lo = stack[top, 0]
            hi = stack[top, 1]
            optlo = stack[top, 2]
            opthi = stack[top, 3]
            mid = (lo + hi) // 2
            jlo = optlo if optlo > q - 2 else q - 1
            jhi = opthi if opthi < mid - 1 else mid - 1
            best = np.inf
            bestj = jlo
            for j in range(jlo, jhi + 1):
                v = prev[j] + _seg_cost(pw, px, pxx, j, mid)
                if v < best:
                    best = v
                    bestj = j
            cur[mid] = best
            opt[q - 1, mid] = bestj
            if lo <= mid - 1:
                stack[top, 0] = lo
                stack[top, 1] = mid - 1
                stack[top, 2] = optlo
                stack[top, 3] = bestj
                top += 1
            if mid + 1 <= hi:
                stack[top, 0] = mid + 1
                stack[top, 1] = hi
                stack[top, 2] = bestj
                stack[top, 3] = opthi
                top += 1
        for i in range(n + 1):
            prev[i] = cur[i]
    return opt


def _seg_cost_np(pw, px, pxx, a, b):
    sw = pw[b] - pw[a]
    sx = px[b] - px[a]
    c = (pxx[b] - pxx[a]) - sx * sx / sw
    return np.maximum(c, 0.0)


def dp_split_table_numpy(pw, px, pxx, k):
    """Same table as the numba kernel; each D&C level is one vectorized pass."""
    n = pw.shape[0] - 1
    opt = np.zeros((k, n + 1), dtype=np.int64)
    prev = np.full(n + 1, np.inf)
    idx = np.arange(1, n + 1)
    prev[1:] = _seg_cost_np(pw, px, pxx, np.zeros_like(idx), idx)
    for q in range(2, k + 1):
        cur = np.full(n + 1, np.inf)
        lo = np.array([q], dtype=np.int64)
        hi = np.array([n], dtype=np.int64)
        optlo = np.array([q - 1], dtype=np.int64)
        opthi = np.array([n - 1], dtype=np.int64)
        while lo.size:
            mid = (lo + hi) // 2
            jlo = np.maximum(optlo, q - 1)
            jhi = np.minimum(opthi, mid - 1)
            counts = jhi - jlo + 1
            starts = np.zeros(counts.size, dtype=np.int64)
            np.cumsum(counts[:-1], out=starts[1:])
            task = np.repeat(np.arange(counts.size), counts)
            j = jlo[task] + (np.arange(task.size) - starts[task])
            vals = prev[j] + _seg_cost_np(pw, px, pxx, j, mid[task])
            seg_min = np.minimum.reduceat(vals, starts)
            # first position attaining the segment minimum
            hit = np.flatnonzero(vals == seg_min[task])
            _, first = np.unique(task[hit], return_index=True)
            bestj = j[hit[first]]
            cur[mid] = seg_min
            opt[q - 1, mid] = bestj
            left = lo <= mid - 1
            right = mid + 1 <= hi
            lo, hi, optlo, opthi = (
                np.concatenate([lo[left], mid[right] + 1]),
                np.concatenate([mid[left] - 1, hi[right]]),
                np.concatenate([optlo[left], bestj[right]]),
                np.concatenate([bestj[left], opthi[right]]),
            )
        prev = cur
    return opt


def backtrack(opt: np.ndarray, n: int) -> np.ndarray:
    """Cluster index for each of the ``n`` distinct values."""
    k = opt.shape[0]
    out = np.empty(n, dtype=np.int64)
    end = n
    for q in range(k, 0, -1):
        start = int(opt[q - 1, end]) if q > 1 else 0
        out[start:end] = q - 1
        end = start
    return out
