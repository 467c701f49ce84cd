"""Named, per-epoch random streams derived from one master seed.

Every consumer asks for ``stream(seed, purpose, epoch)``; streams for
different purposes are statistically independent, so adding a new consumer
never shifts the draws of an existing one.
"""

from __future__ import annotations

import zlib

import numpy as np


def _purpose_key(purpose: str) -> int:
    return zlib.crc32(purpose.encode("utf-8"))


def stream(seed: int, purpose: str, epoch: int = 0) -> np.random.Generator:
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if epoch < 0:
        raise ValueError(f"epoch must be non-negative, got {epoch}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(_purpose_key(purpose), int(epoch)))
    return np.random.default_rng(ss)
