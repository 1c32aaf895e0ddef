"""Base submodular functions (Facility-Location, Log-Determinant) and the
information combinators built from them.

Both functions are set functions over ids indexing rows/columns of a
similarity kernel. Evaluation canonicalizes the id order, so they behave as
true set functions down to the floating-point level.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NumericalDomainError

logger = logging.getLogger(__name__)


def _as_matrix(kernel):
    return np.asarray(getattr(kernel, "entries", kernel), dtype=np.float64)


def _canon(ids):
    return sorted(int(v) for v in set(ids))


class FacilityLocation:
    """f(A) = sum over i in the universe of max_{j in A} K[i, j], with f({}) = 0.

    Rewards sets that cover the universe with high-similarity representatives.
    """

    kind = "FL"

    def __init__(self, kernel, universe):
        self.matrix = _as_matrix(kernel)
        self.universe = np.asarray(_canon(universe), dtype=np.int64)
        if len(self.universe) == 0:
            raise ValueError("universe must be non-empty")
        n = self.matrix.shape[0]
        if self.universe.max() >= n or self.universe.min() < 0:
            raise IndexError("universe ids out of kernel range")

    def value(self, ids):
        ids = _canon(ids)
        if not ids:
            return 0.0
        block = self.matrix[np.ix_(self.universe, ids)]
        return float(block.max(axis=1).sum())

    def gain(self, ids, v):
        """Marginal gain f(A + v) - f(A) via running per-row maxima."""
        ids = _canon(ids)
        if int(v) in ids:
            raise ValueError(f"candidate {v} already selected")
        col = self.matrix[self.universe, int(v)]
        if not ids:
            return float(col.sum())
        cur = self.matrix[np.ix_(self.universe, ids)].max(axis=1)
        return float(np.maximum(col - cur, 0.0).sum())


class LogDet:
    """f(A) = logdet(K_A + epsilon * I), with f({}) = 0.

    Rewards diverse (high-volume) sets. The epsilon ridge keeps near-duplicate
    embeddings from making the block singular; a failed factorization is
    retried once with epsilon * 10 before raising.
    """

    kind = "LogDet"

    def __init__(self, kernel, epsilon=1e-4):
        if epsilon < 0:
            raise ValueError(f"epsilon must be non-negative, got {epsilon}")
        self.matrix = _as_matrix(kernel)
        self.epsilon = float(epsilon)

    def _block(self, ids, eps):
        block = self.matrix[np.ix_(ids, ids)].copy()
        block[np.diag_indices_from(block)] += eps
        return block

    def _cholesky(self, ids):
        try:
            return np.linalg.cholesky(self._block(ids, self.epsilon))
        except np.linalg.LinAlgError:
            pass
        escalated = self.epsilon * 10.0
        logger.warning("logdet block not positive definite; retrying with epsilon=%g", escalated)
        try:
            return np.linalg.cholesky(self._block(ids, escalated))
        except np.linalg.LinAlgError:
            raise NumericalDomainError(
                f"kernel block of size {len(ids)} is not positive definite "
                f"(epsilon={self.epsilon}, escalated to {escalated})") from None

    def value(self, ids):
        ids = _canon(ids)
        if not ids:
            return 0.0
        chol = self._cholesky(ids)
        return float(2.0 * np.log(np.diag(chol)).sum())

    def gain(self, ids, v):
        """Marginal gain via the Schur complement: log of the pivot the new
        row would contribute to the Cholesky factor."""
        ids = _canon(ids)
        v = int(v)
        if v in ids:
            raise ValueError(f"candidate {v} already selected")
        diag = self.matrix[v, v] + self.epsilon
        if not ids:
            if diag <= 0:
                raise NumericalDomainError(f"non-positive diagonal entry at {v}")
            return float(np.log(diag))
        chol = self._cholesky(ids)
        cross = self.matrix[ids, v]
        y = solve_triangular(chol, cross, lower=True)
        pivot = diag - float(y @ y)
        if pivot <= 0:
            raise NumericalDomainError(
                f"adding {v} makes the block numerically singular (pivot={pivot:g})")
        return float(np.log(pivot))


def smi(f, a, q):
    """Shared information between two sets: f(A) + f(Q) - f(A | Q)."""
    a, q = _canon(a), _canon(q)
    return f.value(a) + f.value(q) - f.value(set(a) | set(q))


def scg(f, a, q):
    """Information gained by adding A on top of Q: f(A | Q) - f(Q)."""
    a, q = _canon(a), _canon(q)
    return f.value(set(a) | set(q)) - f.value(q)


def scmi(f, a, b, c):
    """Mutual similarity of A and B discounted by a private set C:
    f(A|C) + f(B|C) - f(A|B|C) - f(C)."""
    a, b, c = set(_canon(a)), set(_canon(b)), set(_canon(c))
    return f.value(a | c) + f.value(b | c) - f.value(a | b | c) - f.value(c)
