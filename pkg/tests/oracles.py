"""Independent brute-force references used by the test suite.

Nothing here imports the code paths it is used to check.
"""

import itertools
import math

import numpy as np


def brute_force_delta(p, q, epsilon):
    """max over all subsets S of P[p in S] - e^eps P[q in S]."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    best = 0.0
    e = math.exp(epsilon)
    for r in range(len(p) + 1):
        for S in itertools.combinations(range(len(p)), r):
            S = list(S)
            best = max(best, p[S].sum() - e * q[S].sum())
    return best


def vertex_enum_l1(F, g, tol=1e-9):
    """Minimum of sum|w| over exact w0 + F w = g by enumerating basic solutions.

    Uses the split w0 = a - b, w = u - v with all parts >= 0; an LP with a
    finite optimum attains it at a basic feasible solution, i.e. at the
    unique solution over some set of rank(A) linearly independent columns.
    Returns inf when no basic feasible solution exists.
    """
    F = np.atleast_2d(np.asarray(F, float))
    if F.shape[0] != len(g):
        F = F.T
    s, n = F.shape
    ones = np.ones((s, 1))
    A = np.hstack([ones, -ones, F, -F])
    cost = np.concatenate([[0, 0], np.ones(2 * n)])
    g = np.asarray(g, float)
    rank = np.linalg.matrix_rank(A)
    best = math.inf
    if rank == 0:
        return 0.0 if np.allclose(g, 0) else math.inf
    for cols in itertools.combinations(range(A.shape[1]), rank):
        B = A[:, cols]
        if np.linalg.matrix_rank(B) < rank:
            continue
        x, *_ = np.linalg.lstsq(B, g, rcond=None)
        if np.max(np.abs(B @ x - g)) > tol or np.any(x < -tol):
            continue
        best = min(best, float(cost[list(cols)] @ x))
    return best


def grid_l1(F, g, lo=-6, hi=6, step=0.5, tol=1e-9):
    """Grid search over weights (intercept solved exactly); small-n only."""
    F = np.asarray(F, float)
    g = np.asarray(g, float)
    n = F.shape[1]
    best = math.inf
    for w in itertools.product(np.arange(lo, hi + step / 2, step), repeat=n):
        resid = g - F @ np.array(w)
        if np.ptp(resid) <= tol:
            best = min(best, float(np.abs(w).sum()))
    return best


def kl_sum(p, q):
    total = 0.0
    for a, b in zip(p, q):
        if a > 0:
            total += a * math.log(a / b)
    return total


def random_simplex(rng, size, zero_prob=0.0):
    x = rng.exponential(size=size)
    if zero_prob:
        mask = rng.random(size) < zero_prob
        if mask.all():
            mask[rng.integers(size)] = False
        x[mask] = 0.0
    return x / x.sum()


def trapezoid_area(points):
    pts = np.asarray(points, float)
    return float(sum((pts[i + 1, 0] - pts[i, 0]) * (pts[i + 1, 1] + pts[i, 1]) / 2
                     for i in range(len(pts) - 1)))
