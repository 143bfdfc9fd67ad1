"""Dense two-phase simplex over numpy tableaux, exact or floating point.

Solves ``min c.x`` subject to ``A x = b`` and ``x >= 0``. Exact mode stores
:class:`fractions.Fraction` entries in an object array and compares against
zero; float mode uses ``float64`` and a pivot tolerance. Bland's rule picks
both the entering column and the leaving row, so results are reproducible.

Exact feasibility questions (no cost vector) are first solved in float64.
The float basis is then turned into an exact answer: the basic columns are
solved with fraction-free integer elimination, or the phase-one duals are
rounded to a Farkas vector and checked in rational arithmetic. Only when that
check fails does the solver fall back to the ``Fraction`` tableau.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from marginal_bell.core import Number, get_config

logger = logging.getLogger(__name__)

PIVOT_EPSILON = 1e-12
FARKAS_MAX_DENOMINATOR = 10**6


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    PIVOT_LIMIT = "pivot_limit"


@dataclass(frozen=True, slots=True)
class LPResult:
    """Solver outcome.

    ``farkas`` is set on infeasible results: a row weighting ``y`` with
    ``y.A <= 0`` and ``y.b > 0``, so no ``x >= 0`` solves ``A x = b``.
    """

    status: LPStatus
    x: Optional[Tuple[Number, ...]] = None
    objective: Optional[Number] = None
    phase_one_value: Optional[Number] = None
    pivots: int = 0
    farkas: Optional[Tuple[Number, ...]] = None

    @property
    def feasible(self) -> bool:
        return self.status in (LPStatus.OPTIMAL, LPStatus.UNBOUNDED)


class _PivotLimit(Exception):
    def __init__(self, pivots: int) -> None:
        super().__init__(pivots)
        self.pivots = pivots


class _Unbounded(Exception):
    pass


class _Tableau:
    """Constraint rows followed by one reduced-cost row; last column is the rhs."""

    def __init__(self, table: np.ndarray, basis: List[int], exact: bool, max_pivots: int) -> None:
        self.table = table
        self.basis = basis
        self.exact = exact
        self.max_pivots = max_pivots
        self.pivots = 0
        self.eps = 0 if exact else PIVOT_EPSILON

    @property
    def rows(self) -> int:
        return self.table.shape[0] - 1

    def pivot(self, row: int, col: int) -> None:
        if self.pivots >= self.max_pivots:
            raise _PivotLimit(self.pivots)
        self.pivots += 1
        table = self.table
        table[row] = table[row] / table[row, col]
        column = table[:, col].copy()
        column[row] = 0
        touched = np.nonzero(column != 0)[0]
        if touched.size:
            table[touched] -= np.outer(column[touched], table[row])
        self.basis[row] = col

    def entering(self, columns: int) -> Optional[int]:
        costs = self.table[-1, :columns]
        for col in range(columns):
            if costs[col] < -self.eps:
                return col
        return None

    def leaving(self, col: int) -> Optional[int]:
        best: Optional[int] = None
        best_ratio: object = None
        for row in range(self.rows):
            coefficient = self.table[row, col]
            if coefficient <= self.eps:
                continue
            ratio = self.table[row, -1] / coefficient
            if (
                best is None
                or ratio < best_ratio
                or (ratio == best_ratio and self.basis[row] < self.basis[best])
            ):
                best, best_ratio = row, ratio
        return best

    def optimize(self, columns: int) -> None:
        while True:
            col = self.entering(columns)
            if col is None:
                return
            row = self.leaving(col)
            if row is None:
                raise _Unbounded()
            self.pivot(row, col)

    def set_costs(self, costs: np.ndarray) -> None:
        """Load ``costs`` and price out the current basis."""

        row = np.zeros(self.table.shape[1], dtype=self.table.dtype)
        if self.exact:
            row[:] = Fraction(0)
        row[: costs.shape[0]] = costs
        for index, col in enumerate(self.basis):
            weight = row[col]
            if weight != 0:
                row = row - weight * self.table[index]
        self.table[-1] = row

    def phase_one_duals(self, columns: int) -> List[Number]:
        """Row prices ``y``: artificial ``i`` costs 1 and has reduced cost ``1 - y_i``."""

        return [1 - value for value in self.table[-1, columns : columns + self.rows]]


def _as_array(values: Sequence[Sequence[object]] | Sequence[object], exact: bool) -> np.ndarray:
    if exact:
        array = np.array(values, dtype=object)
        flat = array.reshape(-1)
        for index, value in enumerate(flat):
            flat[index] = Fraction(value)
        return array
    return np.array(values, dtype=np.float64)


def _phase_one(matrix: np.ndarray, rhs: np.ndarray, exact: bool, limit: int) -> _Tableau:
    """Minimize the sum of one artificial per row; ``rhs`` must be nonnegative."""

    rows, columns = matrix.shape
    dtype = object if exact else np.float64
    table = np.zeros((rows + 1, columns + rows + 1), dtype=dtype)
    if exact:
        table[:] = Fraction(0)
    table[:rows, :columns] = matrix
    for row in range(rows):
        table[row, columns + row] = Fraction(1) if exact else 1.0
    table[:rows, -1] = rhs
    tableau = _Tableau(table, [columns + row for row in range(rows)], exact, limit)

    costs = np.zeros(columns + rows, dtype=dtype)
    if exact:
        costs[:] = Fraction(0)
        costs[columns:] = Fraction(1)
    else:
        costs[columns:] = 1.0
    tableau.set_costs(costs)

    try:
        tableau.optimize(columns + rows)
    except _Unbounded:  # phase one is bounded below by zero
        raise AssertionError("phase one reported unbounded") from None
    return tableau


def _signed(duals: Sequence[Number], flipped: np.ndarray) -> Tuple[Number, ...]:
    """Undo the row negation applied to negative right-hand sides."""

    return tuple(-value if flip else value for value, flip in zip(duals, flipped))


def _farkas_gap(matrix: np.ndarray, rhs: np.ndarray, weights: Sequence[Fraction]) -> Optional[Fraction]:
    """``y.b`` when ``y`` certifies infeasibility exactly, else None."""

    y = np.array(weights, dtype=object)
    if any(value > 0 for value in y @ matrix):
        return None
    gap = Fraction(y @ rhs)
    return gap if gap > 0 else None


def _exact_basic_solution(
    matrix: np.ndarray, rhs: np.ndarray, basic: Sequence[int]
) -> Optional[List[Fraction]]:
    """Solve ``A[:, basic] x = b`` exactly, or None if inconsistent or rank deficient.

    Each row is scaled to integers, then reduced with Bareiss elimination: every
    update divides exactly by the previous pivot, so entries stay integral.
    """

    rows = matrix.shape[0]
    size = len(basic)
    scaled = np.empty((rows, size + 1), dtype=object)
    for row in range(rows):
        entries = [Fraction(value) for value in matrix[row, list(basic)]]
        entries.append(Fraction(rhs[row]))
        scale = math.lcm(*(value.denominator for value in entries))
        scaled[row] = [value.numerator * (scale // value.denominator) for value in entries]

    previous = 1
    for k in range(size):
        nonzero = np.flatnonzero(scaled[k:, k] != 0)
        if nonzero.size == 0:
            return None
        pick = k + int(nonzero[0])
        if pick != k:
            scaled[[k, pick]] = scaled[[pick, k]]
        pivot = scaled[k, k]
        rest = scaled[k + 1 :]
        scaled[k + 1 :] = (pivot * rest - np.outer(rest[:, k], scaled[k])) // previous
        previous = pivot

    if any(value != 0 for value in scaled[size:, -1]):
        return None

    values = [Fraction(0)] * size
    for k in reversed(range(size)):
        total = Fraction(scaled[k, -1])
        for j in range(k + 1, size):
            total -= scaled[k, j] * values[j]
        values[k] = total / scaled[k, k]
    return values


def _feasibility_via_float(
    matrix: np.ndarray, rhs: np.ndarray, flipped: np.ndarray, tolerance: float, limit: int
) -> Optional[LPResult]:
    """Exact feasibility verdict from a float64 solve, or None when it cannot be confirmed."""

    columns = matrix.shape[1]
    try:
        approx = _phase_one(
            np.array(matrix, dtype=np.float64), np.array(rhs, dtype=np.float64), False, limit
        )
    except _PivotLimit:
        return None

    if -approx.table[-1, -1] > tolerance:
        weights = [
            Fraction(float(value)).limit_denominator(FARKAS_MAX_DENOMINATOR)
            for value in approx.phase_one_duals(columns)
        ]
        gap = _farkas_gap(matrix, rhs, weights)
        if gap is None:
            logger.debug("simplex: rounded duals do not certify infeasibility")
            return None
        return LPResult(
            status=LPStatus.INFEASIBLE,
            phase_one_value=gap,
            pivots=approx.pivots,
            farkas=_signed(weights, flipped),
        )

    basic = sorted(col for col in approx.basis if col < columns)
    solved = _exact_basic_solution(matrix, rhs, basic)
    if solved is None or any(value < 0 for value in solved):
        logger.debug("simplex: float basis does not give an exact nonnegative solution")
        return None
    x = [Fraction(0)] * columns
    for col, value in zip(basic, solved):
        x[col] = value
    return LPResult(
        status=LPStatus.OPTIMAL, x=tuple(x), phase_one_value=Fraction(0), pivots=approx.pivots
    )


def solve_lp(
    A: Sequence[Sequence[object]] | np.ndarray,
    b: Sequence[object] | np.ndarray,
    c: Optional[Sequence[object] | np.ndarray] = None,
    *,
    exact: bool = True,
    tol: Optional[float] = None,
    max_pivots: Optional[int] = None,
) -> LPResult:
    """Minimize ``c.x`` over ``{x >= 0 : A x = b}``; with ``c`` omitted only feasibility is decided.

    Phase one adds an artificial variable for every row. Artificials left in
    the basis at level zero are pivoted out; rows where that is impossible are
    linearly dependent and get dropped.
    """

    config = get_config().polytope
    tolerance = config.feasibility_tolerance if tol is None else tol
    limit = config.max_pivots if max_pivots is None else max_pivots

    matrix = _as_array(A, exact)
    rhs = _as_array(b, exact)
    rows, columns = matrix.shape
    if rhs.shape != (rows,):
        raise ValueError(f"rhs has shape {rhs.shape}, expected ({rows},)")

    negative = rhs < 0
    matrix[negative] = -matrix[negative]
    rhs[negative] = -rhs[negative]

    if exact and c is None:
        verdict = _feasibility_via_float(matrix, rhs, negative, tolerance, limit)
        if verdict is not None:
            return verdict
        logger.debug("simplex: falling back to the exact tableau")

    try:
        tableau = _phase_one(matrix, rhs, exact, limit)
    except _PivotLimit as stop:
        logger.warning("simplex phase one hit the pivot limit (%d)", limit)
        return LPResult(status=LPStatus.PIVOT_LIMIT, pivots=stop.pivots)

    infeasibility = -tableau.table[-1, -1]
    threshold = 0 if exact else tolerance
    if infeasibility > threshold:
        logger.debug("simplex: infeasible, phase-one value %s", infeasibility)
        duals = tableau.phase_one_duals(columns)
        return LPResult(
            status=LPStatus.INFEASIBLE,
            phase_one_value=infeasibility if exact else float(infeasibility),
            pivots=tableau.pivots,
            farkas=_signed(duals if exact else [float(value) for value in duals], negative),
        )

    try:
        _drive_out_artificials(tableau, columns)
    except _PivotLimit as stop:
        logger.warning("simplex hit the pivot limit (%d) removing artificials", limit)
        return LPResult(status=LPStatus.PIVOT_LIMIT, pivots=stop.pivots)
    tableau.table = np.delete(tableau.table, np.s_[columns : columns + rows], axis=1)

    objective: Optional[Number] = None
    status = LPStatus.OPTIMAL
    if c is not None:
        costs = _as_array(c, exact)
        if costs.shape != (columns,):
            raise ValueError(f"cost vector has shape {costs.shape}, expected ({columns},)")
        tableau.set_costs(costs)
        try:
            tableau.optimize(columns)
        except _PivotLimit as stop:
            logger.warning("simplex phase two hit the pivot limit (%d)", limit)
            return LPResult(status=LPStatus.PIVOT_LIMIT, pivots=stop.pivots)
        except _Unbounded:
            status = LPStatus.UNBOUNDED

    x = _solution(tableau, columns, exact)
    if c is not None and status is LPStatus.OPTIMAL:
        objective = -tableau.table[-1, -1]
        if not exact:
            objective = float(objective)
    return LPResult(
        status=status,
        x=x,
        objective=objective,
        phase_one_value=infeasibility if exact else float(infeasibility),
        pivots=tableau.pivots,
    )


def _drive_out_artificials(tableau: _Tableau, columns: int) -> None:
    row = 0
    while row < tableau.rows:
        if tableau.basis[row] < columns:
            row += 1
            continue
        entries = tableau.table[row, :columns]
        candidates = [col for col in range(columns) if abs(entries[col]) > tableau.eps]
        if candidates:
            tableau.pivot(row, candidates[0])
            row += 1
        else:
            tableau.table = np.delete(tableau.table, row, axis=0)
            del tableau.basis[row]


def _solution(tableau: _Tableau, columns: int, exact: bool) -> Tuple[Number, ...]:
    values: List[Number] = [Fraction(0) if exact else 0.0] * columns
    for row, col in enumerate(tableau.basis):
        value = tableau.table[row, -1]
        values[col] = value if exact else float(value)
    return tuple(values)


__all__ = ["FARKAS_MAX_DENOMINATOR", "LPResult", "LPStatus", "solve_lp"]
