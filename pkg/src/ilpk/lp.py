"""Exact rational LP feasibility (phase-1 simplex, Bland's rule).

Only what the TU replacement route needs: given rows ``A x <= b`` over
rationals, decide whether any rational point satisfies all of them and
produce one if so.  Arithmetic is exact (stdlib Fractions), pivoting uses
Bland's anti-cycling rule, so termination is guaranteed and a returned
witness satisfies every row with zero tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import LpError

__all__ = ["LpSystem", "lp_feasible"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True, eq=False)
class LpSystem:
    """Rows of <= constraints over rational coefficients."""

    rows: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(tuple(Fraction(c) for c in r) for r in self.rows))
        object.__setattr__(self, "rhs", tuple(Fraction(b) for b in self.rhs))
        if len(self.rows) != len(self.rhs):
            raise LpError("row count and rhs count differ")
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise LpError("rows have inconsistent variable counts")

    @property
    def n(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def m(self) -> int:
        return len(self.rows)

    @classmethod
    def from_ints(cls, rows: Iterable[Sequence[int]], rhs: Iterable[int]) -> "LpSystem":
        return cls(tuple(tuple(Fraction(c) for c in row) for row in rows),
                   tuple(Fraction(b) for b in rhs))


def _check_bounded(sys: LpSystem) -> None:
    for j in range(sys.n):
        has_upper = any(row[j] > 0 for row in sys.rows)
        has_lower = any(row[j] < 0 for row in sys.rows)
        if not (has_upper and has_lower):
            raise LpError(
                f"variable {j} lacks an upper or lower bounding row; "
                "callers must include domain rows")


def lp_feasible(sys: LpSystem) -> tuple[bool, Optional[tuple[Fraction, ...]]]:
    """Feasibility of ``A x <= b`` with x free (bounds supplied as rows).

    Phase-1 construction: minimize t subject to ``A x - t <= b``, ``t >= 0``;
    the optimum is 0 exactly when the system is feasible.  Free variables are
    split as x = u - v with u, v >= 0.
    """
    if sys.n == 0:
        ok = all(b >= 0 for b in sys.rhs)
        return ok, () if ok else None
    _check_bounded(sys)
    m, n = sys.m, sys.n
    if all(b >= 0 for b in sys.rhs):
        witness = tuple(_ZERO for _ in range(n))
        return True, witness

    # columns: u_0..u_{n-1}, v_0..v_{n-1}, t, s_0..s_{m-1}; basis starts as slacks
    width = 2 * n + 1 + m
    t_col = 2 * n
    tableau: list[list[Fraction]] = []
    for i in range(m):
        row = [_ZERO] * (width + 1)
        for j in range(n):
            row[j] = sys.rows[i][j]
            row[n + j] = -sys.rows[i][j]
        row[t_col] = -_ONE
        row[t_col + 1 + i] = _ONE
        row[width] = sys.rhs[i]
        tableau.append(row)
    basis = [t_col + 1 + i for i in range(m)]
    # objective: minimize t; reduced costs tracked in cost row
    cost = [_ZERO] * (width + 1)
    cost[t_col] = _ONE

    def pivot(row_i: int, col_j: int) -> None:
        piv = tableau[row_i][col_j]
        inv = _ONE / piv
        tableau[row_i] = [x * inv for x in tableau[row_i]]
        for i in range(m):
            if i != row_i and tableau[i][col_j] != 0:
                factor = tableau[i][col_j]
                tableau[i] = [a - factor * b for a, b in zip(tableau[i], tableau[row_i])]
        if cost[col_j] != 0:
            factor = cost[col_j]
            for k in range(width + 1):
                cost[k] -= factor * tableau[row_i][k]
        basis[row_i] = col_j

    # drive t into the basis on the most violated row to reach a valid BFS
    start = min(range(m), key=lambda i: (sys.rhs[i], i))
    pivot(start, t_col)
    if any(tableau[i][width] < 0 for i in range(m)):
        raise LpError("internal: phase-1 start point is not basic feasible")

    guard = 0
    limit = 5000 * (m + width + 1)
    while True:
        guard += 1
        if guard > limit:
            raise LpError("internal: simplex iteration limit hit despite Bland's rule")
        enter = -1
        for j in range(width):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave, best = -1, None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave < 0:
            raise LpError("internal: unbounded phase-1 objective")
        pivot(leave, enter)

    t_value = -cost[width]
    if t_value > 0:
        return False, None
    values = [_ZERO] * width
    for i, b in enumerate(basis):
        values[b] = tableau[i][width]
    witness = tuple(values[j] - values[n + j] for j in range(n))
    for i in range(m):
        total = sum(c * x for c, x in zip(sys.rows[i], witness))
        if total > sys.rhs[i]:
            raise LpError("internal: simplex witness fails exact verification")
    return True, witness
