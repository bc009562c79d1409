"""Total unimodularity checks and TU-residual boundary replacement.

A matrix is totally unimodular (TU) when every square submatrix has
determinant -1, 0 or 1.  For a boundaried instance whose non-boundary
columns form a TU matrix, substituting any boundary tuple leaves a TU system
with integral right-hand side, so exact LP feasibility decides integer
feasibility tuple by tuple.  Recognition here is desk scale: a brute-force
determinant sweep under a cap plus sound-but-incomplete fast paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence

from .boundary import BoundariedIlp, BoundarySet, boundary_box
from .caps import Caps, DEFAULT_CAPS
from .core import Ilp, normalize, substitute_many
from .errors import ModelError, NotTotallyUnimodularError, ResourceCapError
from .lp import LpSystem, lp_feasible
from .protrusion import build_blocking_gadget

__all__ = ["IntMatrix", "is_tu_bruteforce", "is_tu_fastpath", "feasible_boundary_tu",
           "replace_boundaried_tu", "tu_boundary_interval"]


@dataclass(frozen=True, eq=False)
class IntMatrix:
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "data", tuple(tuple(r) for r in self.data))
        widths = {len(r) for r in self.data}
        if len(widths) > 1:
            raise ModelError("ragged matrix")

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0]) if self.data else 0

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "IntMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_ilp_columns(cls, ilp: Ilp, cols: Sequence[int]) -> "IntMatrix":
        """Dense restriction of the (normalized) constraint matrix to cols."""
        return cls(tuple(tuple(con.coeffs.get(c, 0) for c in cols)
                         for con in ilp.constraints))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.data == other.data


def _entries_pm1(m: IntMatrix) -> bool:
    return all(e in (-1, 0, 1) for row in m.data for e in row)


def _single_nonzero_closure(m: IntMatrix) -> IntMatrix:
    """Repeatedly drop rows and columns with at most one nonzero entry.

    For entries in {-1,0,1} this preserves total unimodularity in both
    directions: such a row or column can be removed (submatrix) or added back
    (cofactor expansion along it changes no determinant's magnitude class).
    """
    rows = [list(r) for r in m.data]
    keep_r = list(range(len(rows)))
    keep_c = list(range(len(rows[0]))) if rows else []
    changed = True
    while changed and keep_r and keep_c:
        changed = False
        counts_r = {i: sum(1 for j in keep_c if rows[i][j] != 0) for i in keep_r}
        next_r = [i for i in keep_r if counts_r[i] > 1]
        if len(next_r) != len(keep_r):
            keep_r = next_r
            changed = True
            continue
        counts_c = {j: sum(1 for i in keep_r if rows[i][j] != 0) for j in keep_c}
        next_c = [j for j in keep_c if counts_c[j] > 1]
        if len(next_c) != len(keep_c):
            keep_c = next_c
            changed = True
    return IntMatrix.from_rows([[rows[i][j] for j in keep_c] for i in keep_r])


def _det_bareiss(sub: list[list[int]]) -> int:
    """Integer determinant by fraction-free elimination with row pivoting."""
    k = len(sub)
    a = [row[:] for row in sub]
    sign = 1
    prev = 1
    for col in range(k - 1):
        pivot_row = next((r for r in range(col, k) if a[r][col] != 0), -1)
        if pivot_row < 0:
            return 0
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            sign = -sign
        for r in range(col + 1, k):
            for c in range(col + 1, k):
                a[r][c] = (a[r][c] * a[col][col] - a[r][col] * a[col][c]) // prev
            a[r][col] = 0
        prev = a[col][col]
    return sign * a[k - 1][k - 1]


def is_tu_bruteforce(m: IntMatrix, caps: Caps = DEFAULT_CAPS) -> bool:
    """Exhaustive TU test: every square submatrix determinant in {-1,0,1}.

    Entries outside {-1,0,1} settle the answer immediately (1x1 submatrices).
    The single-nonzero closure is applied first; the remaining core must be
    small (min dimension <= tu_dim, or at most tu_budget square submatrices).
    """
    if not _entries_pm1(m):
        return False
    core = _single_nonzero_closure(m)
    r, c = core.rows, core.cols
    if r == 0 or c == 0:
        return True
    budget = sum(comb(r, k) * comb(c, k) for k in range(2, min(r, c) + 1))
    if min(r, c) > caps.tu_dim and budget > caps.tu_budget:
        raise ResourceCapError(
            f"TU brute force over a {r}x{c} core needs {budget} submatrices; "
            "use is_tu_fastpath or raise tu_dim/tu_budget in ILPK_CAPS")
    for k in range(2, min(r, c) + 1):
        for rows_sel in combinations(range(r), k):
            for cols_sel in combinations(range(c), k):
                sub = [[core.data[i][j] for j in cols_sel] for i in rows_sel]
                if _det_bareiss(sub) not in (-1, 0, 1):
                    return False
    return True


def is_tu_fastpath(m: IntMatrix) -> Optional[bool]:
    """Sound, incomplete TU test: True or None (unknown), never a wrong True.

    After the single-nonzero closure, matrices in which every column (or,
    transposed, every row) carries at most one +1 and at most one -1 are TU;
    an empty core is TU as well.
    """
    if not _entries_pm1(m):
        raise ModelError("is_tu_fastpath requires entries in {-1, 0, 1}")
    core = _single_nonzero_closure(m)
    if core.rows == 0 or core.cols == 0:
        return True

    def network(data: tuple[tuple[int, ...], ...]) -> bool:
        cols = len(data[0])
        for j in range(cols):
            plus = sum(1 for row in data if row[j] == 1)
            minus = sum(1 for row in data if row[j] == -1)
            if plus > 1 or minus > 1:
                return False
        return True

    if network(core.data):
        return True
    transposed = tuple(zip(*core.data))
    if network(transposed):
        return True
    return None


def _verify_residual_tu(nilp: Ilp, boundary: tuple[int, ...], caps: Caps) -> None:
    rest = [v for v in range(nilp.n) if v not in set(boundary)]
    residual = IntMatrix.from_ilp_columns(nilp, rest)
    if not _entries_pm1(residual):
        raise NotTotallyUnimodularError(
            "residual columns contain entries outside {-1, 0, 1}")
    verdict = is_tu_fastpath(residual)
    if verdict is None:
        verdict = is_tu_bruteforce(residual, caps)
    if not verdict:
        raise NotTotallyUnimodularError("residual columns are not totally unimodular")


def feasible_boundary_tu(bilp: BoundariedIlp, caps: Caps = DEFAULT_CAPS) -> BoundarySet:
    """Feasible boundary tuples of a TU-residual instance via exact LP.

    For each tuple the boundary variables are substituted away; the remaining
    system is TU with integral right-hand side, so its polyhedron is integral
    and rational feasibility coincides with integer feasibility.
    """
    nilp = normalize(bilp.ilp)
    _verify_residual_tu(nilp, bilp.boundary, caps)
    rest = [v for v in range(nilp.n) if v not in set(bilp.boundary)]
    feasible: list[tuple[int, ...]] = []
    for values in boundary_box(bilp):
        sub = substitute_many(nilp, dict(zip(bilp.boundary, values)))
        if sub.n == 0:
            if all(con.rhs >= 0 for con in sub.constraints):
                feasible.append(values)
            continue
        rows = [tuple(con.coeffs.get(j, 0) for j in range(sub.n)) for con in sub.constraints]
        rhs = [con.rhs for con in sub.constraints]
        for j in range(sub.n):
            dom = sub.domain(j)
            unit = [0] * sub.n
            unit[j] = 1
            rows.append(tuple(unit))
            rhs.append(dom.hi)
            unit = [0] * sub.n
            unit[j] = -1
            rows.append(tuple(unit))
            rhs.append(-dom.lo)
        ok, _ = lp_feasible(LpSystem.from_ints(rows, rhs))
        if ok:
            feasible.append(values)
    return BoundarySet.of(bilp.r, feasible)


def replace_boundaried_tu(bilp: BoundariedIlp, caps: Caps = DEFAULT_CAPS) -> BoundariedIlp:
    """Equivalent boundaried instance built from the blocked complement of
    the TU-feasible boundary set; same size laws as the treewidth route."""
    feasible = feasible_boundary_tu(bilp, caps)
    blocked = [t for t in boundary_box(bilp) if t not in feasible]
    domains = [bilp.ilp.domain(v) for v in bilp.boundary]
    return build_blocking_gadget(domains, BoundarySet.of(bilp.r, blocked))


def tu_boundary_interval(bilp: BoundariedIlp,
                         caps: Caps = DEFAULT_CAPS) -> Optional[tuple[int, int]]:
    """Endpoints of the feasible set of a single boundary variable.

    With a TU residual the feasible values of one boundary variable form a
    contiguous integer interval (convex combinations of feasible completions
    stay feasible), so min and max describe the whole set.
    """
    if bilp.r != 1:
        raise ModelError(f"tu_boundary_interval requires r = 1, got r = {bilp.r}")
    feasible = feasible_boundary_tu(bilp, caps)
    if not feasible.tuples:
        return None
    values = sorted(t[0] for t in feasible.tuples)
    lo, hi = values[0], values[-1]
    if len(values) != hi - lo + 1:
        raise NotTotallyUnimodularError(
            "feasible boundary values are not contiguous; the residual "
            "cannot have been totally unimodular")
    return lo, hi
