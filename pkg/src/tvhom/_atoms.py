"""Array-level kernels shared by measures and score laws.

A finitely supported measure is handled here as a pair of 1-d float arrays
``(positions, weights)``. Nothing in this module validates its inputs.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import gammaln


def canonicalize(positions, weights, tol):
    """Sort atoms and merge runs whose consecutive gaps are ``<= tol``.

    A merged atom gets the summed weight and the weight-averaged position.
    Zero weights must already be removed.
    """
    order = np.argsort(positions, kind="stable")
    x = positions[order]
    w = weights[order]
    if x.size < 2:
        return x, w
    starts = np.flatnonzero(np.concatenate(([True], np.diff(x) > tol)))
    if starts.size == x.size:
        return x, w
    wsum = np.add.reduceat(w, starts)
    xw = np.add.reduceat(x * w, starts)
    merged = xw / wsum
    # a run of one keeps its exact position
    single = np.diff(np.append(starts, x.size)) == 1
    merged[single] = x[starts[single]]
    return merged, wsum


def outer_sum(xa, wa, xb, wb):
    """All pairwise position sums with weight products, flattened."""
    return np.add.outer(xa, xb).ravel(), np.multiply.outer(wa, wb).ravel()


def n_compositions(n, k):
    """Number of ways to write ``n`` as an ordered sum of ``k`` nonnegative parts."""
    from math import comb

    return comb(n + k - 1, k - 1)


def _count_dtype(n):
    return np.int8 if n < 128 else np.int32


@lru_cache(maxsize=32)
def compositions(n: int, k: int) -> np.ndarray:
    """All compositions of ``n`` into ``k`` parts, colexicographic order.

    Row ``r`` precedes row ``s`` when the last differing coordinate of ``r``
    is smaller. Returned read-only, shape ``(C(n+k-1, k-1), k)``.
    """
    dt = _count_dtype(n)
    # level[t] holds the compositions of t into the current number of parts
    level = [np.array([[t]], dtype=dt) for t in range(n + 1)]
    for _ in range(k - 1):
        nxt = []
        for t in range(n + 1):
            blocks = []
            for last in range(t + 1):
                head = level[t - last]
                blocks.append(np.hstack((head, np.full((head.shape[0], 1), last, dtype=dt))))
            nxt.append(np.vstack(blocks))
        level = nxt
    out = level[n]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def log_multinomial_coefficients(n: int, k: int) -> np.ndarray:
    c = compositions(n, k)
    out = np.full(c.shape[0], gammaln(n + 1))
    for j in range(k):
        out -= gammaln(c[:, j] + 1.0)
    out.setflags(write=False)
    return out


def iid_power(positions, weights, n):
    """Atoms of the ``n``-fold convolution power, one per composition.

    Uses the multinomial expansion, so the number of atoms is
    ``C(n+k-1, k-1)`` for ``k`` input atoms instead of ``k**n``. The output
    is not canonical: distinct compositions can land on the same position.
    """
    k = positions.size
    c = compositions(n, k)
    logw = log_multinomial_coefficients(n, k).copy()
    x = np.zeros(c.shape[0])
    logs = np.log(weights)
    for j in range(k):
        cj = c[:, j]
        x += cj * positions[j]
        logw += cj * logs[j]
    return x, np.exp(logw)


def abs_sinh(x):
    # np.sinh is accurate near 0; abs of an odd function keeps that accuracy
    return np.abs(np.sinh(x))
