"""Hard-sample mining: per-iteration selection of a diverse anchor set plus
hard positives and hard negatives for one (target, sensitive) label pair.

All selections run lazy greedy over submodular objectives on a cosine kernel
of the current embeddings:

* anchors: maximize log-determinant over the (t, s) cell -> diverse set;
* hard positives: maximize facility-location conditional gain against the
  anchors over same-target/other-sensitive items -> dissimilar to anchors;
* hard negatives: maximize facility-location mutual information with the
  anchors over other-target/same-sensitive items -> similar to anchors.

Mining uses raw (temperature-free) cosine similarities; greedy argmaxes are
invariant to any uniform positive rescaling of the kernel.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoValidPairError
from .greedy import SelectionProblem, lazy_greedy_max
from .kernel import cosine_kernel
from .submodular import FacilityLocation, LogDet

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-4


@dataclass(frozen=True)
class MinedBatch:
    """One iteration's anchors, hard positives and hard negatives."""

    pair: tuple                 # (target label, sensitive label)
    anchors: np.ndarray
    positives: np.ndarray
    negatives: np.ndarray
    short: bool                 # budgets were shrunk because a pool was small
    k: int                      # effective per-set budget actually used
    degenerate: bool = False    # anchor pool collapsed onto near-duplicates


def sample_pair(index, ground, rng, max_retries=100):
    """Pick a (target, sensitive) pair whose anchor, positive and negative
    pools are all non-empty within the epoch ground set.

    Mirrors rejection sampling over the label grid; if the random draws all
    miss (only possible when valid pairs are rare) the pair is drawn uniformly
    from the valid ones instead, so the call fails only when no valid pair
    exists at all.
    """
    ground_ids = np.asarray(ground.ids, dtype=np.int64)
    valid = []
    for t in index.targets:
        for s in index.sensitives:
            if (
                len(index.cell(t, s, within=ground_ids))
                and len(index.same_target_other_sensitive(t, s, within=ground_ids))
                and len(index.other_target_same_sensitive(t, s, within=ground_ids))
            ):
                valid.append((t, s))
    if not valid:
        raise NoValidPairError(
            "no (target, sensitive) pair has non-empty anchor/positive/negative "
            "pools within the ground set")
    valid_set = set(valid)
    targets, sensitives = list(index.targets), list(index.sensitives)
    for _ in range(max_retries):
        t = targets[rng.integers(len(targets))]
        s = sensitives[rng.integers(len(sensitives))]
        if (t, s) in valid_set:
            return (t, s)
    logger.warning("pair sampling exhausted %d retries; drawing among valid pairs", max_retries)
    return valid[rng.integers(len(valid))]


def select_anchors(pool, kernel, k, epsilon=DEFAULT_EPSILON):
    """Greedy-maximize LogDet over the pool: a diverse anchor set of size <= k."""
    pool = [int(v) for v in pool]
    if not pool:
        raise ValueError("anchor pool is empty")
    f = LogDet(kernel, epsilon=epsilon)
    result = lazy_greedy_max(SelectionProblem(f.value, pool, k))
    if epsilon > 0 and len(result.gains) > 1:
        floor = math.log(10.0 * epsilon)
        if min(result.gains[1:]) < floor:
            logger.warning("anchor selection degenerate: gains hit the epsilon floor")
            result.degenerate = True
    return result


def select_hard_positives(pool, anchors, kernel, k):
    """Greedy-maximize the conditional gain H(X | anchors) with a
    facility-location base over pool + anchors: items least covered by the
    anchor set, i.e. far from them within the same target class."""
    pool = [int(v) for v in pool]
    anchors = [int(v) for v in anchors]
    if not pool:
        raise ValueError("positive pool is empty")
    if not anchors:
        raise ValueError("anchors must be non-empty")
    f = FacilityLocation(kernel, universe=set(pool) | set(anchors))
    anchor_value = f.value(anchors)

    def objective(ids):
        return f.value(set(ids) | set(anchors)) - anchor_value

    return lazy_greedy_max(SelectionProblem(objective, pool, k))


def select_hard_negatives(pool, anchors, kernel, k):
    """Greedy-maximize the mutual information I(X ; anchors) with a
    facility-location base over pool + anchors: items most similar to the
    anchors from across the class boundary."""
    pool = [int(v) for v in pool]
    anchors = [int(v) for v in anchors]
    if not pool:
        raise ValueError("negative pool is empty")
    if not anchors:
        raise ValueError("anchors must be non-empty")
    f = FacilityLocation(kernel, universe=set(pool) | set(anchors))
    anchor_value = f.value(anchors)

    def objective(ids):
        return f.value(ids) + anchor_value - f.value(set(ids) | set(anchors))

    return lazy_greedy_max(SelectionProblem(objective, pool, k))


def mine(index, ground, embeddings, k, rng, epsilon=DEFAULT_EPSILON,
         miner="shasam", max_retries=100):
    """Run one mining step and return a balanced MinedBatch.

    `embeddings` must be aligned row-for-row with ``ground.ids``. When any of
    the three pools holds fewer than k items, all three budgets shrink to the
    smallest pool size and the batch is flagged short, so the balance
    |anchors| = |positives| = |negatives| always holds.
    """
    if k < 1:
        raise ValueError(f"budget must be >= 1, got {k}")
    if miner not in ("shasam", "random"):
        raise ValueError(f"unknown miner: {miner}")
    ground_ids = np.asarray(ground.ids, dtype=np.int64)
    embeddings = np.asarray(embeddings, dtype=np.float64)
    if embeddings.shape[0] != len(ground_ids):
        raise ValueError("embeddings must align with the ground set ids")
    t, s = sample_pair(index, ground, rng, max_retries=max_retries)
    position = {int(g): i for i, g in enumerate(ground_ids)}
    cell = [position[int(v)] for v in index.cell(t, s, within=ground_ids)]
    pos_pool = [position[int(v)] for v in index.same_target_other_sensitive(t, s, within=ground_ids)]
    neg_pool = [position[int(v)] for v in index.other_target_same_sensitive(t, s, within=ground_ids)]
    k_eff = min(k, len(cell), len(pos_pool), len(neg_pool))
    short = k_eff < k
    degenerate = False
    if miner == "random":
        anchors = list(rng.choice(cell, size=k_eff, replace=False))
        positives = list(rng.choice(pos_pool, size=k_eff, replace=False))
        negatives = list(rng.choice(neg_pool, size=k_eff, replace=False))
    else:
        kern = cosine_kernel(embeddings, temperature=1.0)
        anchor_sel = select_anchors(cell, kern, k_eff, epsilon=epsilon)
        anchors = anchor_sel.ids
        degenerate = getattr(anchor_sel, "degenerate", False)
        positives = select_hard_positives(pos_pool, anchors, kern, k_eff).ids
        negatives = select_hard_negatives(neg_pool, anchors, kern, k_eff).ids
    to_ids = lambda positions: ground_ids[np.asarray(positions, dtype=np.int64)]
    return MinedBatch(
        pair=(t, s),
        anchors=to_ids(anchors),
        positives=to_ids(positives),
        negatives=to_ids(negatives),
        short=short,
        k=k_eff,
        degenerate=degenerate,
    )


def max_similarity_to(ids, query_ids, kernel):
    """Mean over `ids` of each item's maximum similarity to `query_ids`."""
    block = kernel.entries[np.ix_(np.asarray(ids, dtype=np.int64),
                                  np.asarray(query_ids, dtype=np.int64))]
    return float(block.max(axis=1).mean())
