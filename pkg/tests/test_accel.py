import os
import subprocess
import sys

import numpy as np

from seta import _accel
from seta.clustering import cluster_losses


def _use_numba(flag):
    env = dict(os.environ, SETA_DISABLE_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from seta import _accel; print(_accel.USE_NUMBA, _accel.NUMBA_AVAILABLE)"],
        env=env, capture_output=True, text=True, check=True,
    )
    return out.stdout.split()


def test_env_flag_selects_numpy_path():
    use, available = _use_numba("1")
    assert use == "False"
    if available == "True":
        assert _use_numba("0")[0] == "True"


def test_backends_give_same_partition(monkeypatch):
    x = np.random.default_rng(8).gamma(0.5, size=5000)
    labels = []
    for flag in (True, False):
        monkeypatch.setattr(_accel, "USE_NUMBA", flag and _accel.NUMBA_AVAILABLE)
        labels.append(cluster_losses(x, 12).labels)
    np.testing.assert_array_equal(labels[0], labels[1])
