"""Minimum-L1 exact affine representation via a dense two-phase simplex.

Solves::

    minimize   sum_i |w_i|
    subject to w_0 + sum_i w_i f_i(x) = g(x)   for every x in the support

with the split ``w = u - v`` (``u, v >= 0``) and ``w_0 = a - b``.  Pivoting
uses Bland's lowest-index rule, so the path is deterministic and cannot cycle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from privbound.errors import ResourceError, ValidationError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"

_PIVOT_EPS = 1e-11


@dataclass(frozen=True, eq=False)
class L1Problem:
    """``functions`` is s x n (one column per function), ``target`` has length s."""

    functions: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        F = np.array(self.functions, dtype=float)
        if F.ndim == 1:
            F = F[:, None]
        g = np.array(self.target, dtype=float).reshape(-1)
        if F.ndim != 2 or F.shape[0] < 1 or F.shape[1] < 1:
            raise ValidationError(f"constraint matrix must be s x n with s, n >= 1, got {F.shape}")
        if g.shape[0] != F.shape[0]:
            raise ValidationError(
                f"target has {g.shape[0]} entries but matrix has {F.shape[0]} rows")
        if not (np.all(np.isfinite(F)) and np.all(np.isfinite(g))):
            raise ValidationError("L1 problem entries must be finite")
        object.__setattr__(self, "functions", F)
        object.__setattr__(self, "target", g)

    @property
    def shape(self):
        return self.functions.shape


@dataclass(frozen=True, eq=False)
class L1Solution:
    weights: np.ndarray
    intercept: float
    objective: float
    status: str
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def standard_form(problem: L1Problem):
    """Equality-form data ``(A, b, c)`` with columns [a, b, u_1..u_n, v_1..v_n]."""
    F, g = problem.functions, problem.target
    s, n = F.shape
    ones = np.ones((s, 1))
    A = np.hstack([ones, -ones, F, -F])
    c = np.concatenate([[0.0, 0.0], np.ones(2 * n)])
    return A, g.copy(), c


def _pivot(T, row, col):
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * T[row]


def _run_simplex(T, basis, ncols, budget):
    """Bland's rule on tableau ``T``; last row is reduced costs, last column RHS."""
    pivots = 0
    m = T.shape[0] - 1
    while True:
        cost = T[-1, :ncols]
        entering = np.flatnonzero(cost < -_PIVOT_EPS)
        if entering.size == 0:
            return pivots
        col = int(entering[0])
        column = T[:m, col]
        rows = np.flatnonzero(column > _PIVOT_EPS)
        if rows.size == 0:
            # objective is bounded below by 0 so this only signals round-off
            raise ResourceError("simplex step found no leaving row (numerical breakdown)")
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + _PIVOT_EPS * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(T, row, col)
        basis[row] = col
        pivots += 1
        if pivots > budget:
            raise ResourceError(f"simplex exceeded the pivot cap of {budget}")


def solve(problem: L1Problem, tol: float = 1e-8, max_pivots: int = 10**5) -> L1Solution:
    if not tol > 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    A, b, c = standard_form(problem)
    s, N = A.shape
    n = problem.shape[1]

    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1

    # phase 1: artificials N..N+s-1 start basic
    T = np.zeros((s + 1, N + s + 1))
    T[:s, :N] = A
    T[:s, N:N + s] = np.eye(s)
    T[:s, -1] = b
    T[-1, :N] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(N, N + s))
    pivots = _run_simplex(T, basis, N + s, max_pivots)

    if -T[-1, -1] > tol:
        return L1Solution(np.full(n, np.nan), float("nan"), float("inf"), INFEASIBLE, pivots)

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = []
    for row in range(s):
        if basis[row] >= N:
            candidates = np.flatnonzero(np.abs(T[row, :N]) > _PIVOT_EPS)
            if candidates.size:
                col = int(candidates[0])
                _pivot(T, row, col)
                basis[row] = col
                pivots += 1
            else:
                continue
        keep.append(row)

    T2 = np.zeros((len(keep) + 1, N + 1))
    T2[:-1, :N] = T[keep, :N]
    T2[:-1, -1] = T[keep, -1]
    basis2 = [basis[r] for r in keep]
    T2[-1, :N] = c
    for i, var in enumerate(basis2):
        T2[-1] -= c[var] * T2[i]
    pivots += _run_simplex(T2, basis2, N, max_pivots - pivots)

    x = np.zeros(N)
    cols = np.array(basis2, dtype=int)
    if cols.size:
        # re-solve the final basis against the original data to shed tableau round-off
        xb, *_ = np.linalg.lstsq(A[:, cols], b, rcond=None)
        # degenerate basics come back as +-1e-17 noise rather than exact zeros
        xb[np.abs(xb) <= _PIVOT_EPS * max(1.0, float(np.abs(b).max()))] = 0.0
        x[cols] = np.maximum(xb, 0.0)
    intercept = x[0] - x[1]
    weights = x[2:2 + n] - x[2 + n:]
    objective = float(np.abs(weights).sum())
    return L1Solution(weights, float(intercept), objective, OPTIMAL, pivots)


def residual(problem: L1Problem, solution: L1Solution) -> float:
    """Max absolute constraint violation of ``solution``."""
    fitted = solution.intercept + problem.functions @ solution.weights
    return float(np.max(np.abs(fitted - problem.target)))
