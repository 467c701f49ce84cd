from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import DataError

UNSEEN = -1


class LossLedger:
    """Latest observed training loss for every sample.

    Unseen samples hold ``nan`` with ``epoch_seen == UNSEEN``. Samples that
    are not re-observed keep their stale value.
    """

    def __init__(self, size: int):
        if size < 1:
            raise DataError(f"ledger size must be positive, got {size}")
        self.size = int(size)
        self.latest_loss = np.full(self.size, np.nan)
        self.epoch_seen = np.full(self.size, UNSEEN, dtype=np.int64)
        self._mean = 0.0

    @property
    def seen(self) -> np.ndarray:
        return self.epoch_seen != UNSEEN

    @property
    def n_seen(self) -> int:
        return int(np.count_nonzero(self.seen))

    @property
    def global_mean(self) -> float:
        """Mean of all seen latest losses, 0.0 when nothing has been seen."""
        return self._mean

    def record(self, epoch: int, ids: Iterable[int] | np.ndarray, losses: Iterable[float] | np.ndarray) -> "LossLedger":
        ids = np.asarray(ids, dtype=np.int64).ravel()
        losses = np.asarray(losses, dtype=np.float64).ravel()
        if ids.shape != losses.shape:
            raise DataError(f"got {ids.size} ids but {losses.size} losses")
        if ids.size == 0:
            return self
        if ids.min() < 0 or ids.max() >= self.size:
            bad = int(ids[(ids < 0) | (ids >= self.size)][0])
            raise DataError(f"sample id {bad} outside 0..{self.size - 1}")
        invalid = ~np.isfinite(losses) | (losses < 0)
        if invalid.any():
            pos = int(np.flatnonzero(invalid)[0])
            raise DataError(f"invalid loss {losses[pos]!r} for sample id {int(ids[pos])}")
        stale = self.epoch_seen[ids] > epoch
        if stale.any():
            bad = int(ids[stale][0])
            raise DataError(f"sample id {bad} already observed at epoch {int(self.epoch_seen[bad])} > {epoch}")
        # last write wins for repeated ids
        rev_ids = ids[::-1]
        uniq, first_in_rev = np.unique(rev_ids, return_index=True)
        self.latest_loss[uniq] = losses[::-1][first_in_rev]
        self.epoch_seen[uniq] = epoch
        self._mean = float(np.mean(self.latest_loss[self.seen]))
        return self

    def record_pairs(self, epoch: int, observations: Iterable[tuple[int, float]]) -> "LossLedger":
        obs = list(observations)
        if not obs:
            return self
        ids, losses = zip(*obs)
        return self.record(epoch, ids, losses)

    def impute(self, subset: np.ndarray) -> tuple[np.ndarray, int]:
        """Losses for ``subset``; unseen samples get the current global mean."""
        subset = np.asarray(subset, dtype=np.int64)
        if subset.size == 0:
            raise DataError("cannot impute losses for an empty subset")
        vals = self.latest_loss[subset].copy()
        unseen = self.epoch_seen[subset] == UNSEEN
        vals[unseen] = self._mean
        return vals, int(np.count_nonzero(unseen))

    def copy(self) -> "LossLedger":
        other = LossLedger(self.size)
        other.latest_loss = self.latest_loss.copy()
        other.epoch_seen = self.epoch_seen.copy()
        other._mean = self._mean
        return other


def record_losses(ledger: LossLedger, epoch: int, observations: Iterable[tuple[int, float]]) -> LossLedger:
    return ledger.record_pairs(epoch, observations)


def impute_losses(subset, ledger: LossLedger) -> tuple[np.ndarray, int]:
    return ledger.impute(subset)
