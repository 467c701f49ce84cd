import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seta.clustering import _kernels, cluster_losses, oracle_best_partition, partition_from_labels, sse
from seta.errors import DataError

loss_vectors = st.lists(
    st.floats(min_value=0, max_value=50, allow_nan=False, allow_infinity=False), min_size=1, max_size=60
)


def brute_contiguous_sse(values, k):
    """Minimum SSE over all contiguous splits of the sorted values, computed naively."""
    xs = sorted(values)
    n = len(xs)
    best = math.inf
    for cuts in itertools.combinations(range(1, n), min(k, n) - 1):
        b = (0, *cuts, n)
        total = 0.0
        for lo, hi in zip(b, b[1:]):
            seg = xs[lo:hi]
            mu = sum(seg) / len(seg)
            total += sum((v - mu) ** 2 for v in seg)
        best = min(best, total)
    return best


def test_separated_pairs(backend):
    p = cluster_losses([0, 0, 10, 10], 2)
    assert p.centroids.tolist() == [0.0, 10.0]
    assert [m.tolist() for m in p.members] == [[0, 1], [2, 3]]
    assert sse([0, 0, 10, 10], p) == 0.0


def test_split_one_outlier(backend):
    x = [1, 2, 3, 10]
    assert brute_contiguous_sse(x, 2) == 2.0
    p = cluster_losses(x, 2)
    assert [m.tolist() for m in p.members] == [[0, 1, 2], [3]]
    assert sse(x, p) == 2.0


@pytest.mark.parametrize("method", ["exact_dp", "lloyd"])
def test_single_cluster_is_mean(method, rng):
    x = rng.exponential(size=37)
    p = cluster_losses(x, 1, method=method)
    assert p.k == 1
    assert p.centroids[0] == pytest.approx(x.mean(), rel=1e-12)


def test_sse_k1_hand_value():
    assert sse([0.0, 2.0], cluster_losses([0.0, 2.0], 1)) == 2.0


def test_fewer_distinct_values_than_k(backend):
    p = cluster_losses([3.0, 1.0, 3.0, 1.0, 1.0], 4)
    assert p.k == 2
    assert p.centroids.tolist() == [1.0, 3.0]
    assert [m.tolist() for m in p.members] == [[1, 3, 4], [0, 2]]


def test_constant_vector_any_k(backend):
    for k in (1, 3, 4):
        p = cluster_losses(np.full(9, 0.25), k)
        assert p.k == 1 and sse(np.full(9, 0.25), p) == 0.0
        assert sse(np.full(9, 0.25), oracle_best_partition(np.full(9, 0.25), k)) == 0.0


def test_oracle_n_equals_k():
    x = [0.3, 2.0, 1.1]
    p = oracle_best_partition(x, 3)
    assert p.k == 3 and sse(x, p) == 0.0


def test_oracle_limits():
    with pytest.raises(DataError):
        oracle_best_partition(np.zeros(17), 2)
    with pytest.raises(DataError):
        oracle_best_partition(np.arange(5.0), 5)


def test_ids_are_carried():
    p = cluster_losses([5.0, 0.1, 4.9], 2, ids=[70, 30, 10])
    assert [m.tolist() for m in p.members] == [[30], [10, 70]]
    assert p.assignment() == {70: 1, 30: 0, 10: 1}


def test_rejects_bad_input():
    with pytest.raises(DataError):
        cluster_losses([], 2)
    with pytest.raises(DataError):
        cluster_losses([1.0, np.nan], 2)
    with pytest.raises(DataError):
        cluster_losses([1.0], 0)
    with pytest.raises(DataError):
        cluster_losses([1.0], 1, method="kmeans++")
    with pytest.raises(DataError):
        sse([1.0, 2.0, 3.0], cluster_losses([1.0, 2.0], 1))


def test_partition_from_labels_merges_equal_means():
    p = partition_from_labels(np.array([1.0, 3.0, 2.0, 2.0]), np.array([0, 0, 1, 2]))
    assert p.k == 1
    assert p.members[0].tolist() == [0, 1, 2, 3]


def test_dp_matches_oracle_random(backend, rng):
    for _ in range(150):
        n = int(rng.integers(1, 17))
        k = int(rng.integers(1, 5))
        x = rng.gamma(0.7, size=n)
        dp = cluster_losses(x, k)
        orc = oracle_best_partition(x, k)
        assert sse(x, dp) == sse(x, orc)
        assert sse(x, dp) == pytest.approx(brute_contiguous_sse(x, k), rel=1e-9, abs=1e-12)


def test_kernels_agree_exactly(rng):
    for _ in range(60):
        x = np.unique(rng.exponential(size=int(rng.integers(2, 400))))
        w = rng.integers(1, 5, size=x.size).astype(float)
        k = int(rng.integers(2, min(20, x.size) + 1))
        sums = _kernels.prefix_sums(x, w)
        a = _kernels.backtrack(_kernels.dp_split_table_numba(*sums, k), x.size)
        b = _kernels.backtrack(_kernels.dp_split_table_numpy(*sums, k), x.size)
        np.testing.assert_array_equal(a, b)


def test_lloyd_respawns_empty_cluster():
    # quantile init lands two centroids on the dominant value
    x = np.array([0.0] * 8 + [5.0, 9.0])
    p = cluster_losses(x, 3, method="lloyd")
    assert p.k == 3
    assert p.centroids.tolist() == [0.0, 5.0, 9.0]


def test_exact_not_worse_than_lloyd(rng):
    for _ in range(30):
        x = rng.gamma(0.5, size=300)
        k = int(rng.integers(2, 16))
        assert sse(x, cluster_losses(x, k)) <= sse(x, cluster_losses(x, k, method="lloyd"))


# -- properties -----------------------------------------------------------

def _check_structure(x, p):
    x = np.asarray(x, dtype=float)
    # partition
    allm = np.sort(np.concatenate(p.members))
    np.testing.assert_array_equal(allm, np.arange(x.size))
    # strictly increasing centroids, each the mean of its members
    assert np.all(np.diff(p.centroids) > 0)
    for j, m in enumerate(p.members):
        assert p.centroids[j] == pytest.approx(x[m].mean(), rel=1e-9, abs=1e-12)
    # contiguity in sorted order: cluster j's max < cluster j+1's min
    for a, b in zip(p.members, p.members[1:]):
        assert x[a].max() < x[b].min()


@settings(max_examples=150, deadline=None)
@given(loss_vectors, st.integers(1, 8), st.sampled_from(["exact_dp", "lloyd"]))
def test_structure_invariants(x, k, method):
    p = cluster_losses(x, k, method=method)
    _check_structure(x, p)
    assert p.k == min(k, len(set(x)))


@settings(max_examples=100, deadline=None)
@given(loss_vectors, st.integers(1, 8), st.randoms(use_true_random=False))
def test_permutation_invariance(x, k, rnd):
    perm = list(range(len(x)))
    rnd.shuffle(perm)
    shuffled = [x[i] for i in perm]
    a = cluster_losses(x, k)
    b = cluster_losses(shuffled, k)
    np.testing.assert_array_equal(a.centroids, b.centroids)
    assert sse(x, a) == pytest.approx(sse(shuffled, b), rel=1e-12, abs=1e-12)
    # same membership up to relabelling of ids
    for ma, mb in zip(a.members, b.members):
        assert sorted(ma.tolist()) == sorted(perm[i] for i in mb)


@settings(max_examples=100, deadline=None)
@given(loss_vectors)
def test_sse_monotone_in_k(x):
    vals = [sse(x, cluster_losses(x, k)) for k in range(1, 9)]
    for a, b in zip(vals, vals[1:]):
        assert b <= a + 1e-9 * max(1.0, a)
