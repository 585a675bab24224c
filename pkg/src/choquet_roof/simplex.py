"""Dense phase-1 simplex for equality-constrained feasibility problems.

Finds ``x >= 0`` with ``A x = b`` or certifies that none exists.  Entering
columns are priced by most-negative reduced cost; after a run of degenerate
pivots the method switches to Bland's smallest-index rule, which cannot cycle,
and stays there until a pivot makes progress again.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FEAS_TOL = 1e-8
PIVOT_TOL = 1e-9
DEGENERATE_STREAK = 30
REFRESH_EVERY = 50


@dataclass
class FeasibilityResult:
    status: str  # "feasible" | "infeasible" | "iteration_limit"
    x: np.ndarray | None
    infeasibility: float
    iterations: int
    residual: float = 0.0


def _refresh(T, M, b, cost, basis):
    """Rebuild the tableau from the current basis to shed accumulated round-off."""
    m = M.shape[0]
    B = M[:, basis]
    try:
        body = np.linalg.solve(B, np.column_stack([M, b]))
    except np.linalg.LinAlgError:
        return
    T[:m] = body
    T[m, :-1] = cost - cost[basis] @ body[:, :-1]
    T[m, -1] = -cost[basis] @ body[:, -1]


def phase_one(A, b, tol: float = FEAS_TOL, max_iter: int | None = None) -> FeasibilityResult:
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float).ravel()
    m, n = A.shape
    if b.shape != (m,):
        raise ValueError(f"b has shape {b.shape}, expected ({m},)")
    if max_iter is None:
        max_iter = 10 * (n + m)

    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    M = np.hstack([A, np.eye(m)])
    cost = np.concatenate([np.zeros(n), np.ones(m)])
    T = np.zeros((m + 1, n + m + 1))
    basis = np.arange(n, n + m)
    _refresh(T, M, b, cost, basis)

    it = 0
    streak = 0
    while True:
        if -T[m, -1] <= 0.1 * tol:
            # artificial mass already gone: feasible, stop pricing degenerate pivots
            break
        costs = T[m, :-1]
        candidates = np.flatnonzero(costs < -tol)
        if candidates.size == 0:
            break
        if it >= max_iter:
            return FeasibilityResult("iteration_limit", None, float(-T[m, -1]), it)
        bland = streak >= DEGENERATE_STREAK
        j = int(candidates[0]) if bland else int(candidates[np.argmin(costs[candidates])])
        col = T[:m, j]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            # a bounded phase-1 objective has no such column; it is round-off
            T[m, j] = 0.0
            continue
        ratios = np.clip(T[rows, -1], 0.0, None) / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12]
        r = int(tied[np.argmin(basis[tied])])
        streak = streak + 1 if best <= 1e-12 else 0
        T[r] /= T[r, j]
        others = np.flatnonzero(T[:, j] != 0.0)
        others = others[others != r]
        T[others] -= np.outer(T[others, j], T[r])
        basis[r] = j
        it += 1
        if it % REFRESH_EVERY == 0:
            _refresh(T, M, b, cost, basis)

    x_full = np.zeros(n + m)
    try:
        x_full[basis] = np.linalg.solve(M[:, basis], b)
    except np.linalg.LinAlgError:
        x_full[basis] = T[:m, -1]
    infeas = float(np.sum(np.abs(x_full[n:])))
    x = np.clip(x_full[:n], 0.0, None)
    residual = float(np.max(np.abs(A @ x - b), initial=0.0))
    if infeas > tol * max(1.0, float(b.sum())):
        return FeasibilityResult("infeasible", None, infeas, it, residual)
    return FeasibilityResult("feasible", x, infeas, it, residual)
