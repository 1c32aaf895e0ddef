"""Cosine similarity kernels over embedding matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SimilarityKernel:
    """Symmetric matrix of pairwise cosine similarities divided by a temperature."""

    entries: np.ndarray
    temperature: float

    @property
    def n(self):
        return self.entries.shape[0]


def validate_embeddings(embeddings):
    """Return the embeddings as a float64 matrix, rejecting NaN/inf and zero rows."""
    e = np.asarray(embeddings, dtype=np.float64)
    if e.ndim != 2 or e.shape[0] == 0:
        raise ValueError("embeddings must be a non-empty 2-d array")
    if not np.all(np.isfinite(e)):
        raise ValueError("embeddings contain NaN or inf")
    norms = np.linalg.norm(e, axis=1)
    if (norms == 0).any():
        bad = int(np.flatnonzero(norms == 0)[0])
        raise ValueError(f"zero-norm embedding at row {bad}")
    return e


def cosine_kernel(embeddings, temperature=1.0):
    """Build the kernel K[i, j] = cos(e_i, e_j) / temperature.

    The result is exactly symmetric with diagonal 1/temperature.
    """
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    e = validate_embeddings(embeddings)
    z = e / np.linalg.norm(e, axis=1, keepdims=True)
    k = (z @ z.T) / temperature
    k = (k + k.T) / 2.0
    np.fill_diagonal(k, 1.0 / temperature)
    return SimilarityKernel(entries=k, temperature=float(temperature))


def sub_kernel(kernel, rows, cols):
    """Extract the |rows| x |cols| block of the kernel."""
    m = kernel.entries
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    n = m.shape[0]
    for idx in (rows, cols):
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise IndexError(f"kernel index out of range for size {n}")
    return m[np.ix_(rows, cols)]
