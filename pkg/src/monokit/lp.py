"""Dense two-phase simplex for small equality-form linear programs.

Solves min c.x subject to A x = b, x >= 0. Instances here are tiny (a handful
of rows, up to a few hundred columns), so a dense tableau with Bland's rule is
both fast enough and deterministic: the entering variable is the lowest index
with a negative reduced cost, and ratio ties pick the leaving row whose basic
variable has the lowest index. Bland's rule also rules out cycling.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import LPNumericalError

_COST_TOL = 1e-11
_PIVOT_TOL = 1e-11
_FEAS_TOL = 1e-9


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPProblem:
    """min objective . x  s.t.  eq_matrix x = eq_rhs, x >= 0."""

    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray


@dataclass(frozen=True)
class LPSolution:
    status: LPStatus
    x: np.ndarray | None
    value: float | None


def _pivot(tableau, cost, basis, row, col):
    piv = tableau[row, col]
    if abs(piv) < _PIVOT_TOL:
        raise LPNumericalError(f"pivot element {piv:g} below threshold")
    tableau[row] /= piv
    for r in range(tableau.shape[0]):
        if r != row and tableau[r, col] != 0.0:
            tableau[r] -= tableau[r, col] * tableau[row]
    if cost[col] != 0.0:
        cost -= cost[col] * tableau[row]
    basis[row] = col


def _iterate(tableau, cost, basis, ncols):
    """Run simplex pivots until optimal or unbounded. Bland's rule throughout."""
    while True:
        entering = -1
        for j in range(ncols):
            if cost[j] < -_COST_TOL:
                entering = j
                break
        if entering < 0:
            return LPStatus.OPTIMAL
        ratios_row = -1
        best_ratio = np.inf
        for r in range(tableau.shape[0]):
            a = tableau[r, entering]
            if a > _PIVOT_TOL:
                ratio = tableau[r, -1] / a
                if ratio < best_ratio - _PIVOT_TOL or (
                    abs(ratio - best_ratio) <= _PIVOT_TOL
                    and ratios_row >= 0
                    and basis[r] < basis[ratios_row]
                ):
                    best_ratio = ratio
                    ratios_row = r
        if ratios_row < 0:
            return LPStatus.UNBOUNDED
        _pivot(tableau, cost, basis, ratios_row, entering)


def solve(problem: LPProblem) -> LPSolution:
    """Two-phase simplex. Infeasibility is a status, numerical trouble raises."""
    a = np.asarray(problem.eq_matrix, dtype=float)
    b = np.asarray(problem.eq_rhs, dtype=float).copy()
    c = np.asarray(problem.objective, dtype=float)
    if a.ndim != 2:
        raise LPNumericalError("constraint matrix must be two dimensional")
    m, k = a.shape
    if c.shape != (k,) or b.shape != (m,):
        raise LPNumericalError("inconsistent problem shapes")
    if not (np.isfinite(a).all() and np.isfinite(b).all() and np.isfinite(c).all()):
        raise LPNumericalError("nonfinite data in problem")

    a = a.copy()
    flip = b < 0
    a[flip] *= -1.0
    b[flip] *= -1.0

    scale = max(1.0, float(np.abs(b).max(initial=0.0)))

    # Phase one: [A | I | b], minimize the sum of the artificials.
    tableau = np.hstack([a, np.eye(m), b[:, None]])
    basis = [k + i for i in range(m)]
    cost = np.zeros(k + m + 1)
    cost[k:k + m] = 1.0
    for r, bv in enumerate(basis):
        cost -= cost[bv] * tableau[r]
    status = _iterate(tableau, cost, basis, k + m)
    if status is not LPStatus.OPTIMAL:
        raise LPNumericalError("phase one terminated without an optimum")
    if -cost[-1] > _FEAS_TOL * scale:
        return LPSolution(LPStatus.INFEASIBLE, None, None)

    # Drive leftover artificials out of the basis; drop redundant rows.
    keep = []
    for r in range(m):
        if basis[r] < k:
            keep.append(r)
            continue
        swapped = False
        for j in range(k):
            if abs(tableau[r, j]) > _PIVOT_TOL:
                _pivot(tableau, cost, basis, r, j)
                keep.append(r)
                swapped = True
                break
        if not swapped and abs(tableau[r, -1]) > _FEAS_TOL * scale:
            raise LPNumericalError("inconsistent redundant row in phase one")
    tableau = np.hstack([tableau[keep][:, :k], tableau[keep][:, -1:]])
    basis = [basis[r] for r in keep]

    # Phase two with the real objective.
    cost = np.zeros(k + 1)
    cost[:k] = c
    for r, bv in enumerate(basis):
        cost -= cost[bv] * tableau[r]
    status = _iterate(tableau, cost, basis, k)
    if status is LPStatus.UNBOUNDED:
        return LPSolution(LPStatus.UNBOUNDED, None, None)

    x = np.zeros(k)
    for r, bv in enumerate(basis):
        x[bv] = tableau[r, -1]
    residual = np.abs(np.asarray(problem.eq_matrix, dtype=float) @ x
                      - np.asarray(problem.eq_rhs, dtype=float))
    if residual.size and residual.max() > _FEAS_TOL * scale:
        raise LPNumericalError(
            f"solution residual {residual.max():.3e} exceeds {_FEAS_TOL:g}"
        )
    return LPSolution(LPStatus.OPTIMAL, x, float(c @ x))
