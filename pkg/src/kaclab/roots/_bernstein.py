"""Bernstein-basis kernels with componentwise rounding-error bounds.

Polynomials live on the unit box in degree N (a power of two at least the true
degree; degree elevation keeps Descartes bounds valid).  Every coefficient array
travels with an array of absolute error bounds.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

_U = 2.0**-53
# absolute slack for subnormal entries and products
TINY = 2.0**-1000

DENSE_MAX = 2048


def bucket(degree: int) -> int:
    n = 1
    while n < degree:
        n *= 2
    return n


def gamma(m: int) -> float:
    return m * _U / (1.0 - m * _U)


@lru_cache(maxsize=None)
def _split_matrices(N: int):
    """Left/right de Casteljau operators, L[i, j] = C(i, j) / 2**i."""
    L = np.zeros((N + 1, N + 1))
    row = np.zeros(N + 1)
    row[0] = 1.0
    L[0] = row
    for i in range(1, N + 1):
        row = 0.5 * (row + np.concatenate(([0.0], row[:-1])))
        L[i] = row
    R = L[::-1, ::-1].copy()
    return L, R


@lru_cache(maxsize=None)
def _conversion_matrix(N: int):
    """M[i, j] = C(i, j) / C(N, j): power coefficients to Bernstein coefficients."""
    M = np.zeros((N + 1, N + 1))
    ratio = np.arange(N + 1) / (N - np.arange(N + 1) + 1.0)  # j / (N - j + 1)
    row = np.zeros(N + 1)
    row[0] = 1.0
    M[0] = row
    for i in range(1, N + 1):
        row = row + np.concatenate(([0.0], row[:-1])) * ratio
        M[i] = row
    return M


def _bound(N: int, Ab, Aabs, Aerr):
    g = gamma(3 * N + 3)
    return (1.0 + 4 * g) * (Aerr + 2 * g * Aabs) + TINY * (Aabs + Aerr).max(axis=0, initial=0.0)


def to_bernstein(c: np.ndarray, err: np.ndarray, N: int):
    """Bernstein coefficients (degree N) and error bounds of sum_j c[j] x**j."""
    cp = np.zeros(N + 1)
    ep = np.zeros(N + 1)
    cp[: c.size] = c
    ep[: err.size] = err
    if N <= DENSE_MAX:
        M = _conversion_matrix(N)
        out = M @ np.stack([cp, np.abs(cp), ep], axis=1)
    else:
        out = np.empty((N + 1, 3))
        X = np.stack([cp, np.abs(cp), ep], axis=1)
        ratio = np.arange(N + 1) / (N - np.arange(N + 1) + 1.0)
        row = np.zeros(N + 1)
        row[0] = 1.0
        out[0] = X[0]
        for i in range(1, N + 1):
            row[1 : i + 1] += row[:i] * ratio[1 : i + 1]
            out[i] = row[: i + 1] @ X[: i + 1]
    b = out[:, 0]
    return b, _bound(N, b, out[:, 1], out[:, 2])


def _casteljau(X: np.ndarray):
    """Left and right halves for each column of X by repeated averaging."""
    N = X.shape[0] - 1
    left = np.empty_like(X)
    right = np.empty_like(X)
    cur = X.copy()
    left[0] = cur[0]
    right[N] = cur[N]
    for r in range(1, N + 1):
        cur = 0.5 * (cur[:-1] + cur[1:])
        left[r] = cur[0]
        right[N - r] = cur[-1]
    return left, right


def split(B: np.ndarray, E: np.ndarray):
    """Split columns of B (errors E) at the midpoint; returns (BL, EL, BR, ER)."""
    N = B.shape[0] - 1
    k = B.shape[1]
    X = np.concatenate([B, np.abs(B), E], axis=1)
    if N <= DENSE_MAX:
        L, R = _split_matrices(N)
        YL, YR = L @ X, R @ X
    else:
        YL, YR = _casteljau(X)
    out = []
    for Y in (YL, YR):
        b = Y[:, :k]
        out += [b, _bound(N, b, Y[:, k : 2 * k], Y[:, 2 * k :])]
    return out
