"""Numba kernels for the O(n^2) partition searches.

One kernel per metric so the inner loop stays branch-free: scalar paths,
vector paths (Euclidean), axis-aligned boxes (Hausdorff, closed form) and a
precomputed distance matrix for everything else.
"""

import math

import numpy as np
from numba import njit


@njit(inline="always")
def _pow(x, p, whole, half):
    # whole >= 0 marks p = whole (+ 0.5 if half); generic pow otherwise
    if whole < 0:
        return x**p
    r = 1.0
    for _ in range(whole):
        r *= x
    if half:
        r *= math.sqrt(x)
    return r


@njit(inline="always")
def _code(p):
    if 2.0 * p == int(2.0 * p) and 0.0 <= p <= 64.0:
        return int(p), int(2.0 * p) % 2 == 1
    return -1, False


@njit(inline="always")
def _dist_box(L, H, i, j):
    # excess per axis in both directions, then a scaled norm (no underflow)
    m1 = 0.0
    m2 = 0.0
    for k in range(L.shape[1]):
        m1 = max(m1, L[j, k] - L[i, k], H[i, k] - H[j, k])
        m2 = max(m2, L[i, k] - L[j, k], H[j, k] - H[i, k])
    if L.shape[1] == 1:
        return max(m1, m2)
    s1 = 0.0
    s2 = 0.0
    for k in range(L.shape[1]):
        if m1 > 0.0:
            e1 = max(0.0, L[j, k] - L[i, k], H[i, k] - H[j, k]) / m1
            s1 += e1 * e1
        if m2 > 0.0:
            e2 = max(0.0, L[i, k] - L[j, k], H[j, k] - H[i, k]) / m2
            s2 += e2 * e2
    return max(m1 * math.sqrt(s1), m2 * math.sqrt(s2))


@njit(inline="always")
def _dist_vec(X, i, j):
    m = 0.0
    for k in range(X.shape[1]):
        m = max(m, abs(X[i, k] - X[j, k]))
    if m == 0.0:
        return 0.0
    s = 0.0
    for k in range(X.shape[1]):
        diff = (X[i, k] - X[j, k]) / m
        s += diff * diff
    return m * math.sqrt(s)


@njit(cache=True)
def prefix_scalar(x, t, p, riesz, a, b, band):
    pw, ph = _code(p)
    qw, qh = _code(p - 1.0)
    m = b - a
    best = np.empty(m + 1)
    best[0] = 0.0
    for j in range(1, m + 1):
        start = j - band if band > 0 and j > band else 0
        xj = x[a + j]
        tj = t[a + j]
        bj = -np.inf
        for i in range(start, j):
            d = abs(xj - x[a + i])
            term = _pow(d, p, pw, ph)
            if riesz:
                term = term / _pow(tj - t[a + i], p - 1.0, qw, qh)
            v = best[i] + term
            if v > bj:
                bj = v
        best[j] = bj
    return best


@njit(cache=True)
def prefix_vector(X, t, p, riesz, a, b, band):
    pw, ph = _code(p)
    qw, qh = _code(p - 1.0)
    m = b - a
    best = np.empty(m + 1)
    best[0] = 0.0
    for j in range(1, m + 1):
        start = j - band if band > 0 and j > band else 0
        bj = -np.inf
        for i in range(start, j):
            term = _pow(_dist_vec(X, a + i, a + j), p, pw, ph)
            if riesz:
                term = term / _pow(t[a + j] - t[a + i], p - 1.0, qw, qh)
            v = best[i] + term
            if v > bj:
                bj = v
        best[j] = bj
    return best


@njit(cache=True)
def prefix_box(L, H, t, p, riesz, a, b, band):
    pw, ph = _code(p)
    qw, qh = _code(p - 1.0)
    m = b - a
    best = np.empty(m + 1)
    best[0] = 0.0
    for j in range(1, m + 1):
        start = j - band if band > 0 and j > band else 0
        bj = -np.inf
        for i in range(start, j):
            term = _pow(_dist_box(L, H, a + i, a + j), p, pw, ph)
            if riesz:
                term = term / _pow(t[a + j] - t[a + i], p - 1.0, qw, qh)
            v = best[i] + term
            if v > bj:
                bj = v
        best[j] = bj
    return best


@njit(cache=True)
def prefix_matrix(D, t, p, riesz, a, b, band):
    pw, ph = _code(p)
    qw, qh = _code(p - 1.0)
    m = b - a
    best = np.empty(m + 1)
    best[0] = 0.0
    for j in range(1, m + 1):
        start = j - band if band > 0 and j > band else 0
        bj = -np.inf
        for i in range(start, j):
            term = _pow(D[a + i, a + j], p, pw, ph)
            if riesz:
                term = term / _pow(t[a + j] - t[a + i], p - 1.0, qw, qh)
            v = best[i] + term
            if v > bj:
                bj = v
        best[j] = bj
    return best


@njit(cache=True)
def holder_scalar(x, t, beta, a, b):
    best = 0.0
    for i in range(a, b + 1):
        for j in range(i + 1, b + 1):
            v = abs(x[j] - x[i]) / (t[j] - t[i]) ** beta
            if v > best:
                best = v
    return best


@njit(cache=True)
def holder_vector(X, t, beta, a, b):
    best = 0.0
    for i in range(a, b + 1):
        for j in range(i + 1, b + 1):
            v = _dist_vec(X, i, j) / (t[j] - t[i]) ** beta
            if v > best:
                best = v
    return best


@njit(cache=True)
def holder_box(L, H, t, beta, a, b):
    best = 0.0
    for i in range(a, b + 1):
        for j in range(i + 1, b + 1):
            v = _dist_box(L, H, i, j) / (t[j] - t[i]) ** beta
            if v > best:
                best = v
    return best


@njit(cache=True)
def holder_matrix(D, t, beta, a, b):
    best = 0.0
    for i in range(a, b + 1):
        for j in range(i + 1, b + 1):
            v = D[i, j] / (t[j] - t[i]) ** beta
            if v > best:
                best = v
    return best
