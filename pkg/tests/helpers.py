"""Seeded instance families shared by the unit and acceptance suites."""

from __future__ import annotations

import random
from itertools import product

from ilpk import (BoundariedIlp, Constraint, DomainInterval, Ilp, Rel, Variable,
                  build_gaifman, make_nice, normalize, treewidth_exact)
from ilpk.caps import DEFAULT_CAPS

RELS = [Rel.LE, Rel.LE, Rel.GE, Rel.EQ]


def random_bounded_width_ilp(rng: random.Random, n_max: int = 8, d_max: int = 3,
                             width_max: int = 3, lo_choices=(0,)) -> Ilp:
    """Random instance whose rows live in sliding windows of width_max + 1
    consecutive variables, so the Gaifman graph has treewidth <= width_max."""
    n = rng.randint(1, n_max)
    variables = []
    for i in range(n):
        lo = rng.choice(lo_choices)
        variables.append(Variable(f"v{i}", DomainInterval(lo, lo + rng.randint(0, d_max - 1))))
    m = rng.randint(0, n + 3)
    rows = []
    for _ in range(m):
        start = rng.randrange(n)
        window = range(start, min(n, start + width_max + 1))
        size = rng.randint(1, min(3, len(window)))
        support = rng.sample(list(window), size)
        coeffs = {v: rng.choice([-3, -2, -1, 1, 2, 3]) for v in support}
        hi = sum(abs(c) * max(abs(variables[v].domain.lo), abs(variables[v].domain.hi))
                 for v, c in coeffs.items())
        rows.append(Constraint(coeffs, rng.choice(RELS), rng.randint(-hi - 1, hi + 1)))
    return Ilp(tuple(variables), tuple(rows))


def random_boundaried(rng: random.Random, r_max: int = 3, n_max: int = 8,
                      d_max: int = 3) -> BoundariedIlp:
    ilp = random_bounded_width_ilp(rng, n_max=n_max, d_max=d_max)
    r = rng.randint(1, min(r_max, ilp.n))
    boundary = tuple(rng.sample(range(ilp.n), r))
    return BoundariedIlp(ilp, boundary)


def solve_pipeline(ilp: Ilp, caps=DEFAULT_CAPS):
    """normalize -> exact treewidth -> nice decomposition -> solver input."""
    nilp = normalize(ilp)
    if nilp.n == 0:
        return nilp, None
    _, td = treewidth_exact(build_gaifman(nilp), caps)
    return nilp, make_nice(nilp, td)


def enumerate_box(ilp: Ilp):
    """Independent in-test enumeration of all assignments (dicts)."""
    ranges = [range(ilp.domain(v).lo, ilp.domain(v).hi + 1) for v in range(ilp.n)]
    for values in product(*ranges):
        yield dict(enumerate(values))


def satisfies(ilp: Ilp, assignment: dict[int, int]) -> bool:
    """Row evaluation written out longhand, independent of library helpers."""
    for v in range(ilp.n):
        dom = ilp.domain(v)
        if not (dom.lo <= assignment[v] <= dom.hi):
            return False
    for con in ilp.constraints:
        total = sum(c * assignment[v] for v, c in con.coeffs.items())
        if con.rel is Rel.LE and total > con.rhs:
            return False
        if con.rel is Rel.GE and total < con.rhs:
            return False
        if con.rel is Rel.EQ and total != con.rhs:
            return False
    return True


def feasible_by_enumeration(ilp: Ilp) -> bool:
    return any(satisfies(ilp, a) for a in enumerate_box(ilp))


def random_network_ilp(rng: random.Random, n_max: int = 6, d_max: int = 3) -> Ilp:
    """Rows whose columns carry at most one +1 and one -1: TU by construction."""
    n = rng.randint(1, n_max)
    m = rng.randint(1, n_max)
    rows = [[0] * n for _ in range(m)]
    for j in range(n):
        spots = rng.sample(range(m), min(m, rng.randint(0, 2)))
        signs = [1, -1]
        rng.shuffle(signs)
        for slot, sign in zip(spots, signs):
            rows[slot][j] = sign
    variables = tuple(Variable(f"v{j}", DomainInterval(0, rng.randint(1, d_max - 1)))
                      for j in range(n))
    cons = tuple(Constraint({j: c for j, c in enumerate(row) if c}, Rel.LE,
                            rng.randint(-1, 2))
                 for row in rows if any(row))
    return Ilp(variables, cons)


def random_network_boundaried(rng: random.Random, r_max: int = 2, d_max: int = 3,
                              rest_max: int = 4) -> BoundariedIlp:
    """Boundary columns arbitrary; residual columns network-style TU."""
    n_rest = rng.randint(1, rest_max)
    r = rng.randint(1, r_max)
    m = rng.randint(1, 5)
    rows = [[0] * (r + n_rest) for _ in range(m)]
    for j in range(r):
        for i in rng.sample(range(m), rng.randint(0, m)):
            rows[i][j] = rng.choice([-2, -1, 1, 2])
    for j in range(r, r + n_rest):
        spots = rng.sample(range(m), min(m, rng.randint(0, 2)))
        signs = [1, -1]
        rng.shuffle(signs)
        for slot, sign in zip(spots, signs):
            rows[slot][j] = sign
    variables = tuple(Variable(f"v{j}", DomainInterval(0, rng.randint(1, d_max - 1)))
                      for j in range(r + n_rest))
    cons = tuple(Constraint({j: c for j, c in enumerate(row) if c}, Rel.LE,
                            rng.randint(-1, 3))
                 for row in rows if any(row))
    return BoundariedIlp(Ilp(variables, cons), tuple(range(r)))


def boundary_box_size(bilp: BoundariedIlp) -> int:
    box = 1
    for v in bilp.boundary:
        box *= bilp.ilp.domain(v).size
    return box


def gadget_box_size(bilp: BoundariedIlp, blocked: int) -> int:
    """Domain-box size of the blocking gadget for `blocked` excluded tuples;
    used to keep oracle checks on gadgets inside the brute-force cap."""
    per_block = boundary_box_size(bilp) * (2 ** bilp.r)
    return boundary_box_size(bilp) * per_block ** blocked
