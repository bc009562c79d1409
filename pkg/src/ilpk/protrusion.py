"""Protrusion machinery: blocking gadgets, boundaried replacement, and
reduction of an instance along a protrusion decomposition.

The blocking gadget is the universal equivalent replacement: given the list
L of boundary tuples to exclude, it spends, per tuple, one offset variable u
and one wrap variable v per boundary position, ties them to the boundary
through split equalities ``x_i = a_i + u_i - d_i * v_i`` and adds one row
``sum u_i >= 1`` that fails exactly on the excluded tuple.  The result has
exactly ``r + 2r|L|`` variables and ``2r + (6r+1)|L|`` rows, with every
coefficient and right-hand side in ``{-d, ..., d}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .boundary import BoundariedIlp, BoundarySet, boundary_box
from .caps import Caps, DEFAULT_CAPS
from .core import Constraint, DomainInterval, Ilp, Rel, Variable, normalize
from .dp import enumerate_feasible_boundary, solve_with_modulator
from .errors import DecompositionError, ModelError, ResourceCapError
from .gaifman import (NiceGaifmanDecomposition, ValidationReport, build_gaifman, make_nice,
                      treewidth_exact)

__all__ = [
    "BoundariedIlp",
    "BoundarySet",
    "ProtrusionDecomposition",
    "validate_protrusion_decomposition",
    "build_blocking_gadget",
    "replace_boundaried_tw",
    "reduce_instance",
    "reduce_instance_detailed",
]


@dataclass(frozen=True, eq=False)
class ProtrusionDecomposition:
    """Partition Y0 + Y1..Yl where parts neighbor only Y0, each part plus its
    neighborhood is an r-protrusion, and max(l, |Y0|) <= alpha."""

    y0: frozenset[int]
    parts: tuple[frozenset[int], ...]
    r: int
    alpha: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "y0", frozenset(self.y0))
        object.__setattr__(self, "parts", tuple(frozenset(p) for p in self.parts))

    @property
    def ell(self) -> int:
        return len(self.parts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProtrusionDecomposition):
            return NotImplemented
        return (self.y0, self.parts, self.r, self.alpha) == \
            (other.y0, other.parts, other.r, other.alpha)


def validate_protrusion_decomposition(ilp: Ilp, pd: ProtrusionDecomposition,
                                      caps: Caps = DEFAULT_CAPS) -> ValidationReport:
    """Check all protrusion-decomposition invariants against the Gaifman graph.

    Treewidth of a part whose closed neighborhood exceeds the exact cap is
    left unverified and reported as a note, not a violation.
    """
    g = build_gaifman(ilp)
    violations: list[tuple[str, str]] = []
    notes: list[str] = []
    blocks = [pd.y0, *pd.parts]
    counted: dict[int, int] = {}
    for block in blocks:
        for v in block:
            if not (0 <= v < ilp.n):
                violations.append(("pd.partition", f"unknown variable {v}"))
            counted[v] = counted.get(v, 0) + 1
    dupes = sorted(v for v, c in counted.items() if c > 1)
    missing = sorted(set(range(ilp.n)) - set(counted))
    if dupes:
        violations.append(("pd.partition", f"variables {dupes} appear in several blocks"))
    if missing:
        violations.append(("pd.partition", f"variables {missing} in no block"))
    if max(pd.ell, len(pd.y0)) > pd.alpha:
        violations.append(("pd.alpha",
                           f"max(l={pd.ell}, |Y0|={len(pd.y0)}) exceeds alpha={pd.alpha}"))
    if violations:
        return ValidationReport.from_violations(violations, notes)

    for i, part in enumerate(pd.parts):
        nbhd = frozenset().union(*(g.neighbors[v] for v in part)) - part if part else frozenset()
        outside = nbhd - pd.y0
        if outside:
            violations.append(
                ("pd.neighbors", f"part {i} touches non-Y0 variables {sorted(outside)}"))
            continue
        closed = part | nbhd
        bdry = {v for v in closed if g.neighbors[v] - closed}
        if len(bdry) > pd.r:
            violations.append(
                ("pd.boundary", f"part {i} has boundary size {len(bdry)} > r = {pd.r}"))
        if closed:
            sub, _ = g.subgraph(closed)
            try:
                width, _ = treewidth_exact(sub, caps)
            except ResourceCapError:
                notes.append(f"part {i}: treewidth unchecked (over the exact cap)")
                continue
            if width > pd.r - 1:
                violations.append(
                    ("pd.width", f"part {i} induces treewidth {width} > r-1 = {pd.r - 1}"))
    return ValidationReport.from_violations(violations, notes)


def build_blocking_gadget(boundary_domains: Sequence[DomainInterval],
                          blocked: BoundarySet) -> BoundariedIlp:
    """Boundaried instance whose feasible boundary set is the domain box
    minus the blocked tuples.

    Heterogeneous domains are supported: the wrap coefficient for boundary
    position i is that variable's own domain size, which keeps the
    u/v argument intact position by position.
    """
    r = len(boundary_domains)
    if r < 1:
        raise ModelError("the blocking gadget needs at least one boundary variable")
    if blocked.r != r:
        raise ModelError(f"blocked tuples have arity {blocked.r}, expected {r}")
    for t in blocked.tuples:
        for value, dom in zip(t, boundary_domains):
            if value not in dom:
                raise ModelError(f"blocked tuple {t} leaves the boundary domain box")

    sizes = [dom.size for dom in boundary_domains]
    variables: list[Variable] = [Variable(f"t{i}", dom) for i, dom in enumerate(boundary_domains)]
    rows: list[Constraint] = []
    for i, dom in enumerate(boundary_domains):
        rows.append(Constraint({i: 1}, Rel.LE, dom.hi))
        rows.append(Constraint({i: -1}, Rel.LE, -dom.lo))

    for j, point in enumerate(blocked.sorted_tuples()):
        u_base = len(variables)
        for i in range(r):
            variables.append(Variable(f"u{j}_{i}", DomainInterval(0, sizes[i] - 1)))
        v_base = len(variables)
        for i in range(r):
            variables.append(Variable(f"v{j}_{i}", DomainInterval(0, 1)))
        for i in range(r):
            u, v = u_base + i, v_base + i
            rows.append(Constraint({i: 1, u: -1, v: sizes[i]}, Rel.LE, point[i]))
            rows.append(Constraint({i: -1, u: 1, v: -sizes[i]}, Rel.LE, -point[i]))
        rows.append(Constraint({u_base + i: -1 for i in range(r)}, Rel.LE, -1))
        for i in range(r):
            rows.append(Constraint({u_base + i: 1}, Rel.LE, sizes[i] - 1))
            rows.append(Constraint({u_base + i: -1}, Rel.LE, 0))
        for i in range(r):
            rows.append(Constraint({v_base + i: 1}, Rel.LE, 1))
            rows.append(Constraint({v_base + i: -1}, Rel.LE, 0))
    gadget = Ilp(tuple(variables), tuple(rows))
    return BoundariedIlp(gadget, tuple(range(r)))


def replace_boundaried_tw(bilp: BoundariedIlp, ngd: Optional[NiceGaifmanDecomposition],
                          caps: Caps = DEFAULT_CAPS, threads: int = 1) -> BoundariedIlp:
    """Equivalent boundaried instance: enumerate the feasible boundary set by
    DP, block its complement within the domain box."""
    feasible = enumerate_feasible_boundary(bilp, ngd, caps, threads)
    blocked = [t for t in boundary_box(bilp) if t not in feasible]
    domains = [bilp.ilp.domain(v) for v in bilp.boundary]
    return build_blocking_gadget(domains, BoundarySet.of(bilp.r, blocked))


def _extract_part(ilp: Ilp, part: frozenset[int], nbhd: list[int],
                  row_ids: list[int]) -> tuple[Ilp, tuple[int, ...]]:
    """Subsystem of all rows touching the part plus boundary domain rows."""
    local = sorted(part | set(nbhd))
    remap = {v: i for i, v in enumerate(local)}
    rows = []
    for idx in row_ids:
        con = ilp.constraints[idx]
        if not con.support <= set(local):
            raise DecompositionError(
                f"row {idx} leaves the closed neighborhood of a part")
        rows.append(Constraint({remap[v]: c for v, c in con.coeffs.items()}, con.rel, con.rhs))
    for b in nbhd:
        dom = ilp.domain(b)
        rows.append(Constraint({remap[b]: 1}, Rel.LE, dom.hi))
        rows.append(Constraint({remap[b]: -1}, Rel.LE, -dom.lo))
    sub = Ilp(tuple(ilp.vars[v] for v in local), tuple(rows))
    return sub, tuple(remap[b] for b in nbhd)


def reduce_instance_detailed(ilp: Ilp, pd: ProtrusionDecomposition,
                             caps: Caps = DEFAULT_CAPS,
                             threads: int = 1) -> tuple[Ilp, list[dict]]:
    """reduce_instance plus a per-part summary for reporting."""
    report = validate_protrusion_decomposition(ilp, pd, caps)
    if not report.ok:
        rule, detail = report.violations[0]
        raise DecompositionError(f"invalid protrusion decomposition ({rule}): {detail}")
    g = build_gaifman(ilp)
    y0_sorted = sorted(pd.y0)
    y0_new = {v: i for i, v in enumerate(y0_sorted)}

    part_rows: list[list[int]] = []
    claimed: set[int] = set()
    for part in pd.parts:
        ids = [i for i, con in enumerate(ilp.constraints) if con.support & part]
        if claimed & set(ids):
            raise DecompositionError("a row touches two different parts")
        claimed |= set(ids)
        part_rows.append(ids)

    out_vars: list[Variable] = [ilp.vars[v] for v in y0_sorted]
    out_rows: list[Constraint] = []
    for i, con in enumerate(ilp.constraints):
        if i in claimed:
            continue
        if not con.support <= pd.y0:
            raise DecompositionError(f"row {i} touches no part but leaves Y0")
        out_rows.append(Constraint({y0_new[v]: c for v, c in con.coeffs.items()},
                                   con.rel, con.rhs))

    details: list[dict] = []
    dead = False
    gadget_rows: list[Constraint] = []
    for p, part in enumerate(pd.parts):
        nbhd = sorted(frozenset().union(*(g.neighbors[v] for v in part)) - part) if part else []
        sub, boundary_local = _extract_part(ilp, part, nbhd, part_rows[p])
        nsub = normalize(sub)
        if not nbhd:
            verdict = solve_with_modulator(nsub, [], caps)
            if not verdict.feasible:
                dead = True
            details.append({"part": p, "boundary": [], "blocked": None,
                            "feasible": verdict.feasible,
                            "gadget_vars": 0, "gadget_rows": 0})
            continue
        sub_g = build_gaifman(nsub)
        _, td = treewidth_exact(sub_g, caps)
        ngd = make_nice(nsub, td)
        gadget = replace_boundaried_tw(BoundariedIlp(nsub, boundary_local), ngd, caps, threads)
        r_p = gadget.r
        base = len(out_vars)
        var_map: dict[int, int] = {}
        for k, b in enumerate(nbhd):
            var_map[k] = y0_new[b]
        for k in range(r_p, gadget.ilp.n):
            var_map[k] = base + (k - r_p)
            gv = gadget.ilp.vars[k]
            out_vars.append(Variable(f"g{p}_{gv.name}", gv.domain))
        for con in gadget.ilp.constraints:
            gadget_rows.append(Constraint({var_map[v]: c for v, c in con.coeffs.items()},
                                          con.rel, con.rhs))
        details.append({"part": p, "boundary": nbhd,
                        "blocked": (gadget.ilp.n - r_p) // (2 * r_p),
                        "feasible": None,
                        "gadget_vars": gadget.ilp.n, "gadget_rows": gadget.ilp.m})
    out_rows.extend(gadget_rows)
    if dead:
        out_rows.append(Constraint({}, Rel.LE, -1))
    return Ilp(tuple(out_vars), tuple(out_rows)), details


def reduce_instance(ilp: Ilp, pd: ProtrusionDecomposition, caps: Caps = DEFAULT_CAPS,
                    threads: int = 1) -> Ilp:
    """Replace every part by an equivalent blocking gadget on its boundary.

    The output keeps (a) the original rows supported inside Y0, re-indexed,
    and (b) the gadget rows, with gadget variables appended after Y0's in
    part order.  A part with empty boundary is solved outright: if feasible
    it vanishes, otherwise one unsatisfiable row marks the whole instance
    infeasible.  Feasibility is preserved exactly.
    """
    reduced, _ = reduce_instance_detailed(ilp, pd, caps, threads)
    return reduced
