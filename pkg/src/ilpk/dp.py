"""Feasibility by dynamic programming over a nice Gaifman decomposition.

Per node the solver keeps one dense 0/1 table indexed by a mixed-radix
encoding of the bag assignment (bag variables in ascending index order, the
first variable most significant, radix = that variable's domain size).  Leaf
tables are all-ones; introduce repeats blocks, forget ORs them, join ANDs two
tables cellwise and a constraint node zeroes the cells violating its row.
The instance is feasible iff the root table has a one; a witness is read back
top-down, taking the lowest feasible value at every forget node.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from . import backend
from .boundary import BoundariedIlp, BoundarySet, boundary_box
from .caps import Caps, DEFAULT_CAPS
from .core import (FeasibilityResult, Ilp, check_assignment, is_normalized, normalize,
                   pin_variable, substitute_many)
from .errors import ArithmeticOverflowError, DecompositionError, ModelError, ResourceCapError
from .gaifman import (NiceGaifmanDecomposition, build_gaifman, make_nice, treewidth_exact,
                      validate_nice)

__all__ = ["DpTable", "dp_tables", "solve_dp", "enumerate_feasible_boundary",
           "solve_with_modulator"]

_SAFE_SUM = 1 << 62


@dataclass(frozen=True)
class DpTable:
    """One node's table; entries are reachable through lookup()/entries()."""

    node: int
    vars: tuple[int, ...]
    radices: tuple[int, ...]
    lows: tuple[int, ...]
    data: bytearray

    def index_of(self, values: Sequence[int]) -> int:
        idx = 0
        for value, radix, lo in zip(values, self.radices, self.lows):
            digit = value - lo
            if not (0 <= digit < radix):
                raise ModelError(f"value {value} outside table domain")
            idx = idx * radix + digit
        return idx

    def lookup(self, values: Sequence[int]) -> bool:
        return bool(self.data[self.index_of(values)])

    def entries(self):
        ranges = [range(lo, lo + radix) for lo, radix in zip(self.lows, self.radices)]
        for idx, values in enumerate(product(*ranges)):
            yield values, bool(self.data[idx])


def _layout(ilp: Ilp, bag: frozenset[int]) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    vs = tuple(sorted(bag))
    radices = tuple(ilp.domain(v).size for v in vs)
    lows = tuple(ilp.domain(v).lo for v in vs)
    return vs, radices, lows


def _prod(xs: Sequence[int]) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def _build_program(ilp: Ilp, ngd: NiceGaifmanDecomposition, caps: Caps):
    """Linearize the decomposition into backend table ops (post-order)."""
    order = ngd.post_order()
    slot = {node: i for i, node in enumerate(order)}
    ops = []
    layouts = []
    total_cells = 0
    for node in order:
        nd = ngd.nodes[node]
        vs, radices, lows = _layout(ilp, nd.bag)
        size = _prod(radices)
        total_cells += size
        if total_cells > caps.dp_cells:
            raise ResourceCapError(
                f"DP tables need more than {caps.dp_cells} cells; "
                "raise dp_cells in ILPK_CAPS or shrink the instance")
        if nd.kind == "leaf":
            ops.append(("leaf", size))
        elif nd.kind == "introduce":
            pos = vs.index(nd.var)
            ops.append(("introduce", slot[nd.children[0]],
                        _prod(radices[:pos]), radices[pos], _prod(radices[pos + 1:])))
        elif nd.kind == "forget":
            cvs, cradices, _ = _layout(ilp, ngd.nodes[nd.children[0]].bag)
            pos = cvs.index(nd.var)
            ops.append(("forget", slot[nd.children[0]],
                        _prod(cradices[:pos]), cradices[pos], _prod(cradices[pos + 1:])))
        elif nd.kind == "join":
            ops.append(("join", slot[nd.children[0]], slot[nd.children[1]], size))
        elif nd.kind == "constraint":
            con = ilp.constraints[nd.row]
            coeffs = [0] * len(vs)
            base = 0
            bound = 0
            for var, coef in con.coeffs.items():
                pos = vs.index(var)
                coeffs[pos] = coef
                base += coef * lows[pos]
                dom = ilp.domain(var)
                bound += abs(coef) * max(abs(dom.lo), abs(dom.hi))
            if bound > _SAFE_SUM:
                raise ArithmeticOverflowError(
                    f"row {nd.row} can overflow 64-bit arithmetic in the DP")
            ops.append(("constraint", slot[nd.children[0]], size,
                        radices, tuple(coeffs), base, con.rhs))
        else:
            raise DecompositionError(f"unknown node kind {nd.kind!r}")
        layouts.append((node, vs, radices, lows))
    return order, ops, layouts


def dp_tables(ilp: Ilp, ngd: NiceGaifmanDecomposition,
              caps: Caps = DEFAULT_CAPS) -> list[DpTable]:
    """Compute every node table bottom-up; ordered by post-order position."""
    if not is_normalized(ilp):
        raise ModelError("the DP requires a normalized instance")
    _, ops, layouts = _build_program(ilp, ngd, caps)
    raw = backend.run_table_program(ops)
    return [DpTable(node, vs, radices, lows, table)
            for (node, vs, radices, lows), table in zip(layouts, raw)]


def _solve_constant(ilp: Ilp) -> FeasibilityResult:
    """Variable-free instance: every row is a constant comparison."""
    ok = all(0 <= con.rhs for con in ilp.constraints)
    return FeasibilityResult(ok, {} if ok else None)


def solve_dp(ilp: Ilp, ngd: Optional[NiceGaifmanDecomposition],
             caps: Caps = DEFAULT_CAPS, *, check: bool = True) -> FeasibilityResult:
    """Decide feasibility over the given decomposition; witnesses verified.

    ``check=False`` skips re-validating the decomposition (used by callers
    that validated it once and then solve many pinned variants).
    """
    if not is_normalized(ilp):
        raise ModelError("solve_dp requires a normalized instance")
    if ilp.n == 0:
        return _solve_constant(ilp)
    if ngd is None:
        raise DecompositionError("a nice Gaifman decomposition is required")
    if check:
        report = validate_nice(ilp, ngd)
        if not report.ok:
            rule, detail = report.violations[0]
            raise DecompositionError(f"invalid nice decomposition ({rule}): {detail}")
    tables = dp_tables(ilp, ngd, caps)
    by_node = {t.node: t for t in tables}
    root_table = by_node[ngd.root]
    hit = root_table.data.find(1)
    if hit < 0:
        return FeasibilityResult(False, None)

    witness: dict[int, int] = {}
    idx = hit
    for radix, lo, var in zip(reversed(root_table.radices), reversed(root_table.lows),
                              reversed(root_table.vars)):
        witness[var] = lo + idx % radix
        idx //= radix
    stack = [ngd.root]
    while stack:
        node = stack.pop()
        nd = ngd.nodes[node]
        if nd.kind == "leaf":
            continue
        if nd.kind == "forget":
            child = nd.children[0]
            ct = by_node[child]
            dom = ilp.domain(nd.var)
            for value in range(dom.lo, dom.hi + 1):
                witness[nd.var] = value
                if ct.lookup([witness[v] for v in ct.vars]):
                    break
            else:
                raise DecompositionError("internal: no feasible value at a forget node")
        stack.extend(nd.children)
    if not check_assignment(ilp, witness):
        raise DecompositionError("internal: reconstructed witness fails the instance")
    return FeasibilityResult(True, witness)


def enumerate_feasible_boundary(bilp: BoundariedIlp,
                                ngd: Optional[NiceGaifmanDecomposition],
                                caps: Caps = DEFAULT_CAPS,
                                threads: int = 1) -> BoundarySet:
    """Exactly the boundary tuples of the domain box that extend to feasible
    assignments; one pinned DP solve per tuple.

    Pinning only shrinks domains, so one decomposition serves every tuple.
    """
    ilp = bilp.ilp
    if not is_normalized(ilp):
        raise ModelError("enumerate_feasible_boundary requires a normalized instance")
    if bilp.r == 0:
        ok = solve_dp(ilp, ngd, caps).feasible
        return BoundarySet.of(0, [()] if ok else [])
    if ngd is not None:
        report = validate_nice(ilp, ngd)
        if not report.ok:
            rule, detail = report.violations[0]
            raise DecompositionError(f"invalid nice decomposition ({rule}): {detail}")

    def extends(values: tuple[int, ...]) -> bool:
        pinned = ilp
        for var, value in zip(bilp.boundary, values):
            pinned = pin_variable(pinned, var, value)
        return solve_dp(pinned, ngd, caps, check=False).feasible

    tuples = list(boundary_box(bilp))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flags = list(pool.map(extends, tuples))
    else:
        flags = [extends(t) for t in tuples]
    return BoundarySet.of(bilp.r, [t for t, ok in zip(tuples, flags) if ok])


def solve_with_modulator(ilp: Ilp, mod_vars, caps: Caps = DEFAULT_CAPS) -> FeasibilityResult:
    """Branch over every assignment of the modulator variables and solve each
    residual instance by DP over a decomposition of the residual graph."""
    mods = sorted(set(mod_vars))
    for var in mods:
        if not (0 <= var < ilp.n):
            raise ModelError(f"modulator variable {var} out of range")
    nilp = normalize(ilp)
    if not mods:
        if nilp.n == 0:
            return _solve_constant(nilp)
        _, td = treewidth_exact(build_gaifman(nilp), caps)
        ngd = make_nice(nilp, td)
        return solve_dp(nilp, ngd, caps, check=False)

    branch_count = 1
    for var in mods:
        branch_count *= nilp.domain(var).size
    if branch_count > caps.brute_box:
        raise ResourceCapError(
            f"modulator box of {branch_count} assignments exceeds cap {caps.brute_box}")

    rest = [v for v in range(nilp.n) if v not in set(mods)]
    ngd: Optional[NiceGaifmanDecomposition] = None
    if rest:
        g = build_gaifman(nilp)
        local_g, _ = g.subgraph(rest)
        _, td_local = treewidth_exact(local_g, caps)

    ranges = [range(nilp.domain(v).lo, nilp.domain(v).hi + 1) for v in mods]
    for values in product(*ranges):
        branch = substitute_many(nilp, dict(zip(mods, values)))
        if branch.n == 0:
            res = _solve_constant(branch)
        else:
            if ngd is None:
                ngd = make_nice(branch, td_local)
            res = solve_dp(branch, ngd, caps, check=False)
        if res.feasible:
            witness = {orig: res.witness[local] for local, orig in enumerate(rest)}
            witness.update(dict(zip(mods, values)))
            if not check_assignment(ilp, witness):
                raise DecompositionError("internal: combined modulator witness is invalid")
            return FeasibilityResult(True, witness)
    return FeasibilityResult(False, None)
