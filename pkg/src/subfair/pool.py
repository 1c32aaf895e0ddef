"""Labeled data pools: ingestion, attribute indexing and epoch subsampling.

A pool is the ground set the miner draws from: every item carries a feature
vector, a target label ``t`` and a sensitive label ``s``. Ids are the row
positions 0..n-1.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PoolFormatError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledPool:
    """Immutable dataset of (feature vector, target label, sensitive label) items."""

    features: np.ndarray   # (n, d) float64
    targets: np.ndarray    # (n,) int64
    sensitives: np.ndarray  # (n,) int64

    def __post_init__(self):
        object.__setattr__(self, "features", np.asarray(self.features, dtype=np.float64))
        object.__setattr__(self, "targets", np.asarray(self.targets, dtype=np.int64))
        object.__setattr__(self, "sensitives", np.asarray(self.sensitives, dtype=np.int64))
        validate_pool(self)

    def __len__(self):
        return self.features.shape[0]

    @property
    def dim(self):
        return self.features.shape[1]

    @property
    def ids(self):
        return np.arange(len(self))


def validate_pool(pool):
    """Check pool invariants, raising PoolFormatError on violation."""
    x, t, s = pool.features, pool.targets, pool.sensitives
    if x.ndim != 2 or x.shape[0] == 0:
        raise PoolFormatError("empty pool")
    n = x.shape[0]
    if t.shape != (n,) or s.shape != (n,):
        raise PoolFormatError("label arrays must match the number of rows")
    if not np.all(np.isfinite(x)):
        raise PoolFormatError("features contain NaN or inf")
    if (t < 0).any() or (s < 0).any():
        raise PoolFormatError("labels must be non-negative integers")
    if np.unique(t).size < 2:
        raise PoolFormatError("need at least two distinct target labels")
    if np.unique(s).size < 2:
        raise PoolFormatError("need at least two distinct sensitive labels")


@dataclass(frozen=True)
class AttributeIndex:
    """Maps each (target, sensitive) label pair to the sorted ids carrying it."""

    by_pair: dict
    targets: tuple
    sensitives: tuple
    _t: np.ndarray = field(repr=False, default=None)
    _s: np.ndarray = field(repr=False, default=None)

    def cell(self, t, s, within=None):
        """Ids with target t and sensitive s, optionally restricted to `within`."""
        ids = self.by_pair.get((t, s), np.empty(0, dtype=np.int64))
        return _restrict(ids, within)

    def same_target_other_sensitive(self, t, s, within=None):
        """Ids with target t but a sensitive label different from s."""
        mask = (self._t == t) & (self._s != s)
        return _restrict(np.flatnonzero(mask), within)

    def other_target_same_sensitive(self, t, s, within=None):
        """Ids with sensitive s but a target label different from t."""
        mask = (self._t != t) & (self._s == s)
        return _restrict(np.flatnonzero(mask), within)


def _restrict(ids, within):
    if within is None:
        return np.asarray(ids, dtype=np.int64)
    within = np.asarray(within, dtype=np.int64)
    mask = np.isin(ids, within)
    return np.asarray(ids, dtype=np.int64)[mask]


def build_index(pool):
    """Partition the pool ids by (target, sensitive) label pair."""
    t, s = pool.targets, pool.sensitives
    by_pair = {}
    for ti in np.unique(t):
        for sj in np.unique(s):
            ids = np.flatnonzero((t == ti) & (s == sj)).astype(np.int64)
            by_pair[(int(ti), int(sj))] = ids
    return AttributeIndex(
        by_pair=by_pair,
        targets=tuple(int(v) for v in np.unique(t)),
        sensitives=tuple(int(v) for v in np.unique(s)),
        _t=t,
        _s=s,
    )


@dataclass(frozen=True)
class EpochGroundSet:
    """Ids available for mining during one epoch."""

    ids: np.ndarray
    epoch: int

    def __len__(self):
        return len(self.ids)


def subsample_epoch(pool, fraction, prev, rng):
    """Draw the next epoch's ground set: ceil(fraction * n) ids without
    replacement, avoiding the previous epoch's ids whenever the remainder is
    large enough.

    When the pool minus `prev` cannot cover the required count, the deficit is
    filled by re-sampling from `prev` and an overlap warning is logged, so the
    epoch size stays constant.
    """
    n = len(pool)
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    if fraction * n < 1.0:
        raise ValueError(f"fraction {fraction} selects less than one item from a pool of {n}")
    needed = math.ceil(fraction * n)
    all_ids = np.arange(n)
    prev_ids = np.empty(0, dtype=np.int64) if prev is None else np.asarray(prev.ids, dtype=np.int64)
    fresh = np.setdiff1d(all_ids, prev_ids)
    if len(fresh) >= needed:
        chosen = rng.choice(fresh, size=needed, replace=False)
    else:
        deficit = needed - len(fresh)
        logger.warning(
            "ground set overlaps previous epoch: only %d fresh ids for a draw of %d",
            len(fresh), needed,
        )
        refill = rng.choice(np.sort(prev_ids), size=deficit, replace=False)
        chosen = np.concatenate([fresh, refill])
    epoch = 0 if prev is None else prev.epoch + 1
    return EpochGroundSet(ids=np.sort(chosen).astype(np.int64), epoch=epoch)


def load_pool(path, format="csv"):
    """Read a pool from a CSV file laid out as ``id,f0,...,f{d-1},t,s``.

    Rejects NaN/inf features, duplicate or non-contiguous ids, and rows whose
    width disagrees with the header. Errors carry the offending line number.
    """
    if format != "csv":
        raise ValueError(f"unsupported format: {format}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise PoolFormatError("empty pool")
        header = [h.strip() for h in header]
        if len(header) < 4 or header[0] != "id" or header[-2:] != ["t", "s"]:
            raise PoolFormatError("header must be id,f0,...,f{d-1},t,s", line=1)
        d = len(header) - 3
        rows = {}
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != d + 3:
                raise PoolFormatError(
                    f"expected {d + 3} columns, found {len(row)}", line=line)
            try:
                rid = int(row[0])
                feats = [float(v) for v in row[1:1 + d]]
                t = int(row[1 + d])
                s = int(row[2 + d])
            except ValueError as exc:
                raise PoolFormatError(f"unparseable value ({exc})", line=line) from exc
            if not all(math.isfinite(v) for v in feats):
                raise PoolFormatError("feature is NaN or inf", line=line)
            if rid in rows:
                raise PoolFormatError(f"duplicate id {rid}", line=line)
            if t < 0 or s < 0:
                raise PoolFormatError("labels must be non-negative", line=line)
            rows[rid] = (feats, t, s)
    if not rows:
        raise PoolFormatError("empty pool")
    n = len(rows)
    if sorted(rows) != list(range(n)):
        raise PoolFormatError("ids must be contiguous from 0")
    feats = np.array([rows[i][0] for i in range(n)], dtype=np.float64)
    t = np.array([rows[i][1] for i in range(n)], dtype=np.int64)
    s = np.array([rows[i][2] for i in range(n)], dtype=np.int64)
    return LabeledPool(features=feats, targets=t, sensitives=s)


def write_pool_csv(pool, path):
    """Write the pool in the CSV layout accepted by load_pool.

    Coordinates are printed with 9 significant digits; reloading yields values
    equal to the printed precision.
    """
    d = pool.dim
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id"] + [f"f{j}" for j in range(d)] + ["t", "s"])
        for i in range(len(pool)):
            coords = [format(v, ".9g") for v in pool.features[i]]
            writer.writerow([i] + coords + [int(pool.targets[i]), int(pool.sensitives[i])])
