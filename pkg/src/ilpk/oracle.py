"""Brute-force ground truth: exhaustive enumeration of the domain box.

This is the arbiter every equivalence claim is tested against, so it stays
deliberately dumb: no decompositions, no LP, no pruning beyond stopping at
the first satisfying completion.  Rows are evaluated with their original
relations, which keeps the oracle independent of normalization.
"""

from __future__ import annotations

from .boundary import BoundariedIlp, BoundarySet
from . import backend
from .caps import Caps, DEFAULT_CAPS
from .core import FeasibilityResult, Ilp, Rel
from .errors import ArithmeticOverflowError, ResourceCapError

__all__ = ["brute_feasible", "brute_boundary_set"]

_REL_CODE = {Rel.LE: 0, Rel.GE: 1, Rel.EQ: 2}
_SAFE_SUM = 1 << 62


def _pack_rows(ilp: Ilp, var_order: list[int]):
    """Flatten rows for the kernels, with variables renumbered by var_order."""
    remap = {orig: i for i, orig in enumerate(var_order)}
    row_ptr = [0]
    row_var: list[int] = []
    row_coef: list[int] = []
    row_rel: list[int] = []
    row_rhs: list[int] = []
    for con in ilp.constraints:
        bound = 0
        for var, coef in con.sorted_terms():
            row_var.append(remap[var])
            row_coef.append(coef)
            dom = ilp.domain(var)
            bound += abs(coef) * max(abs(dom.lo), abs(dom.hi))
        if bound > _SAFE_SUM:
            raise ArithmeticOverflowError("row sum can overflow 64-bit arithmetic")
        row_ptr.append(len(row_var))
        row_rel.append(_REL_CODE[con.rel])
        row_rhs.append(con.rhs)
    return row_ptr, row_var, row_coef, row_rel, row_rhs


def _box_size(ilp: Ilp, caps: Caps) -> int:
    box = 1
    for v in range(ilp.n):
        box *= ilp.domain(v).size
    if box > caps.brute_box:
        raise ResourceCapError(
            f"domain box of {box} assignments exceeds brute-force cap {caps.brute_box}")
    return box


def brute_feasible(ilp: Ilp, caps: Caps = DEFAULT_CAPS) -> FeasibilityResult:
    """Scan the domain box in lexicographic order (variable 0 outermost,
    ascending values) and return the first satisfying assignment."""
    _box_size(ilp, caps)
    order = list(range(ilp.n))
    radices = [ilp.domain(v).size for v in order]
    lows = [ilp.domain(v).lo for v in order]
    offset = backend.brute_first_feasible(radices, lows, *_pack_rows(ilp, order))
    if offset < 0:
        return FeasibilityResult(False, None)
    witness: dict[int, int] = {}
    for v in reversed(order):
        witness[v] = lows[v] + offset % radices[v]
        offset //= radices[v]
    return FeasibilityResult(True, witness)


def brute_boundary_set(bilp: BoundariedIlp, caps: Caps = DEFAULT_CAPS) -> BoundarySet:
    """Exact set of boundary tuples with a feasible completion.

    Enumerates boundary tuples lexicographically; for each, scans the
    remaining box until one completion satisfies every row.
    """
    ilp = bilp.ilp
    _box_size(ilp, caps)
    nb = bilp.r
    rest = [v for v in range(ilp.n) if v not in set(bilp.boundary)]
    order = list(bilp.boundary) + rest
    radices = [ilp.domain(v).size for v in order]
    lows = [ilp.domain(v).lo for v in order]
    offsets = backend.brute_boundary_offsets(nb, radices, lows, *_pack_rows(ilp, order))
    tuples = []
    for offset in offsets:
        values = [0] * nb
        for i in range(nb - 1, -1, -1):
            values[i] = lows[i] + offset % radices[i]
            offset //= radices[i]
        tuples.append(tuple(values))
    return BoundarySet.of(nb, tuples)
