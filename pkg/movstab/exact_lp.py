"""
exact_lp.py - Exact two-phase simplex over Fractions.

Dense tableau simplex with Bland's anti-cycling rule. Used to decide strict
feasibility of homogeneous inequality systems (does a hyperplane meet the
interior of a cone?) without any floating point.
"""

import logging
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence

from movstab.errors import PreconditionError
from movstab.utils import Vector

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPResult(NamedTuple):
    """Outcome of maximize(): status, optimal value and a primal solution."""

    status: str
    value: Optional[Fraction]
    x: Optional[Vector]


class SimplexTableau:
    """Equality-form tableau [A | b] with an explicit basis."""

    def __init__(self, rows: List[List[Fraction]], basis: List[int]):
        self.rows = rows
        self.basis = basis

    @property
    def m(self) -> int:
        return len(self.rows)

    def pivot(self, r: int, col: int) -> None:
        piv = self.rows[r][col]
        self.rows[r] = [v / piv for v in self.rows[r]]
        pivot_row = self.rows[r]
        for i in range(self.m):
            factor = self.rows[i][col]
            if i != r and factor != 0:
                self.rows[i] = [a - factor * b for a, b in zip(self.rows[i], pivot_row)]
        self.basis[r] = col

    def reduced_cost(self, cost: Sequence[Fraction], col: int) -> Fraction:
        return cost[col] - sum(
            (cost[self.basis[i]] * self.rows[i][col] for i in range(self.m)), Fraction(0)
        )

    def bland_primal_step(self, cost: Sequence[Fraction], allowed: Sequence[int]) -> str:
        entering = next((j for j in allowed if self.reduced_cost(cost, j) > 0), None)
        if entering is None:
            return OPTIMAL
        candidates = [
            (self.rows[i][-1] / self.rows[i][entering], self.basis[i], i)
            for i in range(self.m)
            if self.rows[i][entering] > 0
        ]
        if not candidates:
            return UNBOUNDED
        _, _, leaving = min(candidates)
        self.pivot(leaving, entering)
        return "go_on"

    def bland_primal(self, cost: Sequence[Fraction], allowed: Sequence[int]) -> str:
        while True:
            status = self.bland_primal_step(cost, allowed)
            if status != "go_on":
                return status

    def solution(self, n: int) -> Vector:
        x = [Fraction(0)] * n
        for i, var in enumerate(self.basis):
            if var < n:
                x[var] = self.rows[i][-1]
        return tuple(x)


def maximize(
    c: Sequence[Fraction],
    A_eq: Sequence[Sequence[Fraction]],
    b_eq: Sequence[Fraction],
) -> LPResult:
    """
    Maximize c·x subject to A_eq·x = b_eq and x ≥ 0.

    Args:
        c: Objective coefficients (length n)
        A_eq: Equality constraint rows (each length n)
        b_eq: Right-hand sides

    Returns:
        LPResult with status "optimal", "infeasible" or "unbounded"
    """
    n = len(c)
    if len(A_eq) != len(b_eq):
        raise PreconditionError("A_eq and b_eq have different lengths")
    if any(len(row) != n for row in A_eq):
        raise PreconditionError("constraint rows must match the objective length")
    m = len(A_eq)

    # Phase 1: one artificial per row, rows sign-normalized so b >= 0.
    rows: List[List[Fraction]] = []
    for i, (row, rhs) in enumerate(zip(A_eq, b_eq)):
        sign = -1 if Fraction(rhs) < 0 else 1
        artificial = [Fraction(int(k == i)) for k in range(m)]
        rows.append([sign * Fraction(v) for v in row] + artificial + [sign * Fraction(rhs)])
    tableau = SimplexTableau(rows, [n + i for i in range(m)])

    phase_one_cost = [Fraction(0)] * n + [Fraction(-1)] * m
    tableau.bland_primal(phase_one_cost, range(n + m))
    infeasibility = sum((tableau.rows[i][-1] for i in range(m) if tableau.basis[i] >= n), Fraction(0))
    if infeasibility > 0:
        return LPResult(INFEASIBLE, None, None)

    # Drive remaining (zero-level) artificials out; drop redundant rows.
    i = 0
    while i < tableau.m:
        if tableau.basis[i] >= n:
            col = next((j for j in range(n) if tableau.rows[i][j] != 0), None)
            if col is None:
                del tableau.rows[i]
                del tableau.basis[i]
                continue
            tableau.pivot(i, col)
        i += 1

    phase_two_cost = [Fraction(v) for v in c] + [Fraction(0)] * m
    status = tableau.bland_primal(phase_two_cost, range(n))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, None)
    x = tableau.solution(n)
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, x)


def strict_interior_point(
    functionals: Sequence[Sequence[Fraction]],
    equalities: Sequence[Sequence[Fraction]],
    dim: int,
) -> Optional[Vector]:
    """
    Find x with f·x > 0 for every functional f and e·x = 0 for every equality e.

    Solves max t subject to f_i·x − t − s_i = 0, e_k·x = 0, t + u = 1 with the
    free vector x split as x⁺ − x⁻. The system is strictly feasible iff t* > 0.

    Args:
        functionals: Rows that must be strictly positive on x
        equalities: Rows that must vanish on x
        dim: Length of x

    Returns:
        A strictly feasible x, or None if none exists
    """
    n_func = len(functionals)
    # Variable layout: x+ (dim), x- (dim), t, s_1..s_k, u
    n_vars = 2 * dim + 1 + n_func + 1
    t_col = 2 * dim
    u_col = n_vars - 1

    A_eq: List[List[Fraction]] = []
    b_eq: List[Fraction] = []
    for i, f in enumerate(functionals):
        row = [Fraction(0)] * n_vars
        for j, v in enumerate(f):
            row[j] = Fraction(v)
            row[dim + j] = -Fraction(v)
        row[t_col] = Fraction(-1)
        row[t_col + 1 + i] = Fraction(-1)
        A_eq.append(row)
        b_eq.append(Fraction(0))
    for e in equalities:
        row = [Fraction(0)] * n_vars
        for j, v in enumerate(e):
            row[j] = Fraction(v)
            row[dim + j] = -Fraction(v)
        A_eq.append(row)
        b_eq.append(Fraction(0))
    bound = [Fraction(0)] * n_vars
    bound[t_col] = Fraction(1)
    bound[u_col] = Fraction(1)
    A_eq.append(bound)
    b_eq.append(Fraction(1))

    objective = [Fraction(0)] * n_vars
    objective[t_col] = Fraction(1)
    result = maximize(objective, A_eq, b_eq)
    logger.debug("strict feasibility LP: %s, t* = %s", result.status, result.value)
    if result.status != OPTIMAL or result.value <= 0:
        return None
    return tuple(result.x[j] - result.x[dim + j] for j in range(dim))
