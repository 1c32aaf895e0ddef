"""Greedy maximization of a set function under a cardinality constraint.

Both the naive and the lazy variant pick, at every step, the candidate with
the largest marginal gain, breaking ties by smallest id. The lazy variant
exploits diminishing returns to skip stale re-evaluations and must return
exactly the same selection; it only differs in how many times the objective
is evaluated.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True)
class SelectionProblem:
    """A set objective, a candidate pool, and a budget k."""

    objective: Callable[[Sequence[int]], float]
    candidates: Sequence[int]
    budget: int

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        cands = list(self.candidates)
        if not cands:
            raise ValueError("candidates must be non-empty")
        if len(set(cands)) != len(cands):
            raise ValueError("candidates contain duplicates")


@dataclass
class SelectionResult:
    """Selected ids in pick order, their marginal gains, and bookkeeping."""

    ids: list = field(default_factory=list)
    gains: list = field(default_factory=list)
    value: float = 0.0
    evaluations: int = 0
    short: bool = False

    def __iter__(self):
        return iter(self.ids)

    def __len__(self):
        return len(self.ids)


def greedy_max(problem):
    """Naive greedy: re-evaluate every remaining candidate at each step."""
    obj = problem.objective
    remaining = sorted(int(c) for c in problem.candidates)
    k = min(problem.budget, len(remaining))
    selected = []
    current = obj(selected)
    evaluations = 1
    gains = []
    for _ in range(k):
        best_id, best_gain, best_value = None, None, None
        for v in remaining:
            val = obj(selected + [v])
            evaluations += 1
            g = val - current
            # ascending id order makes strict > keep the smallest id on ties
            if best_gain is None or g > best_gain:
                best_id, best_gain, best_value = v, g, val
        selected.append(best_id)
        gains.append(best_gain)
        remaining.remove(best_id)
        current = best_value
    return SelectionResult(
        ids=selected, gains=gains, value=current, evaluations=evaluations,
        short=k < problem.budget,
    )


def lazy_greedy_max(problem):
    """Lazy greedy: keep stale gains in a max-heap and only refresh the top.

    Heap entries are ordered by (-gain, id): largest gain first, smallest id
    on ties, matching greedy_max exactly. An entry is selected only when its
    gain was computed at the current round, which guarantees it is the true
    argmax whenever the objective is submodular.
    """
    obj = problem.objective
    candidates = sorted(int(c) for c in problem.candidates)
    k = min(problem.budget, len(candidates))
    selected = []
    current = obj(selected)
    evaluations = 1
    heap = []
    for v in candidates:
        val = obj([v])
        evaluations += 1
        heapq.heappush(heap, (-(val - current), v, 0, val))
    gains = []
    while len(selected) < k:
        neg_gain, v, round_computed, val = heapq.heappop(heap)
        if round_computed == len(selected):
            selected.append(v)
            gains.append(-neg_gain)
            current = val
            continue
        val = obj(selected + [v])
        evaluations += 1
        heapq.heappush(heap, (-(val - current), v, len(selected), val))
    return SelectionResult(
        ids=selected, gains=gains, value=current, evaluations=evaluations,
        short=k < problem.budget,
    )


def modular_objective(weights):
    """Additive objective for tests: value(A) = sum of per-id weights."""
    w = dict(weights) if isinstance(weights, dict) else dict(enumerate(np.asarray(weights, dtype=float)))
    return lambda ids: float(sum(w[int(i)] for i in ids))
