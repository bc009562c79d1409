"""Instance generators, each packaging the structural certificate that makes
its output useful downstream: a path decomposition for the subset-sum chain,
the modified-entry list for the hitting-set matrix, and protrusion
decompositions for the OR-composition and the random decomposable family.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, Sequence

from .core import Constraint, DomainInterval, Ilp, Rel, Variable
from .errors import ModelError
from .gaifman import TreeDecomposition
from .protrusion import ProtrusionDecomposition

__all__ = ["gen_subset_sum", "gen_hitting_set", "gen_or_composition",
           "gen_random_protrusion"]


def gen_subset_sum(items: Sequence[int], target: int) -> tuple[Ilp, TreeDecomposition]:
    """Chain encoding of Subset Sum: selector bits x_j and running sums y_j
    with y_j = a_j * x_j + y_{j-1} and y_n pinned to the target.

    The packaged path decomposition has bags {x_1, y_1} and {x_j, y_{j-1}, y_j},
    so the Gaifman graph has treewidth at most two.  The running sums get the
    attainable range [min(0, sum of negatives), max(0, sum of positives)],
    which is finite and loses no solutions.
    """
    n = len(items)
    if n < 1:
        raise ModelError("subset sum needs at least one item")
    lo = min(0, sum(a for a in items if a < 0))
    hi = max(0, sum(a for a in items if a > 0))
    variables = [Variable(f"x{j + 1}", DomainInterval(0, 1)) for j in range(n)]
    variables += [Variable(f"y{j + 1}", DomainInterval(lo, hi)) for j in range(n)]
    y = lambda j: n + j  # noqa: E731 - tiny index helper

    rows = []
    coeffs = {y(0): 1}
    if items[0] != 0:
        coeffs[0] = -items[0]
    rows.append(Constraint(coeffs, Rel.EQ, 0))
    for j in range(1, n):
        coeffs = {y(j): 1, y(j - 1): -1}
        if items[j] != 0:
            coeffs[j] = -items[j]
        rows.append(Constraint(coeffs, Rel.EQ, 0))
    rows.append(Constraint({y(n - 1): 1}, Rel.EQ, target))

    bags = [frozenset({0, y(0)})]
    for j in range(1, n):
        bags.append(frozenset({j, y(j - 1), y(j)}))
    parent = [-1] + list(range(n - 1))
    td = TreeDecomposition(tuple(bags), tuple(parent), 0)
    return Ilp(tuple(variables), tuple(rows)), td


def gen_hitting_set(universe_size: int, sets: Sequence[Iterable[int]],
                    k: int) -> tuple[Ilp, list[tuple[int, int]]]:
    """Hitting-set instance whose matrix is TU plus |U| modified entries.

    Variables are the per-(element, set) hit indicators followed by the
    per-element pick indicators, all binary.  Rows, already in <= form: one
    cover row per set, one control row per element (the -|F| entry on the
    pick variable is the modified one), the budget row, then the domain rows.
    Returned positions (row, column) point at the -|F| entries; zeroing them
    leaves a totally unimodular matrix.
    """
    if universe_size < 1:
        raise ModelError("hitting set needs a nonempty universe")
    family = [sorted(set(s)) for s in sets]
    for i, members in enumerate(family):
        if not members:
            raise ModelError(f"set {i} is empty and can never be hit")
        for u in members:
            if not (0 <= u < universe_size):
                raise ModelError(f"set {i} mentions unknown element {u}")
    f_count = len(family)
    if f_count < 1:
        raise ModelError("hitting set needs at least one set")

    def hit_var(u: int, f: int) -> int:
        return u * f_count + f

    pick_base = universe_size * f_count
    variables = [Variable(f"x_{u}_{f}", DomainInterval(0, 1))
                 for u in range(universe_size) for f in range(f_count)]
    variables += [Variable(f"x_{u}", DomainInterval(0, 1)) for u in range(universe_size)]

    rows: list[Constraint] = []
    for f, members in enumerate(family):
        rows.append(Constraint({hit_var(u, f): -1 for u in members}, Rel.LE, -1))
    modified: list[tuple[int, int]] = []
    for u in range(universe_size):
        coeffs = {hit_var(u, f): 1 for f in range(f_count)}
        coeffs[pick_base + u] = -f_count
        modified.append((len(rows), pick_base + u))
        rows.append(Constraint(coeffs, Rel.LE, 0))
    rows.append(Constraint({pick_base + u: 1 for u in range(universe_size)}, Rel.LE, k))
    for j in range(len(variables)):
        rows.append(Constraint({j: 1}, Rel.LE, 1))
        rows.append(Constraint({j: -1}, Rel.LE, 0))
    return Ilp(tuple(variables), tuple(rows)), modified


def gen_or_composition(graphs: Sequence[tuple[int, Iterable[tuple[int, int]]]],
                       k: int) -> tuple[Ilp, ProtrusionDecomposition]:
    """OR-composition of independent-set instances on a shared vertex count.

    One selector s in {1..t} picks a graph; per vertex pair the gadget
    variables d (selector indicators) and c (running sums forcing exactly one
    d to be zero) copy the picked graph's adjacency into y, and the shared
    part checks an independent set of size >= k against y.  Feasible iff some
    input graph has an independent set of size >= k.  The packaged partition
    (Y0 = x, y, s; one part per vertex pair) is a protrusion decomposition
    of order 5.
    """
    t = len(graphs)
    if t < 1:
        raise ModelError("need at least one graph")
    n = graphs[0][0]
    if n < 1:
        raise ModelError("graphs must have at least one vertex")
    edge_sets: list[frozenset[tuple[int, int]]] = []
    for gi, (nv, edges) in enumerate(graphs):
        if nv != n:
            raise ModelError(f"graph {gi} has {nv} vertices, expected {n}")
        es = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ModelError(f"graph {gi} has a bad edge ({u}, {v})")
            es.add((min(u, v), max(u, v)))
        edge_sets.append(frozenset(es))

    pairs = list(combinations(range(n), 2))
    variables = [Variable(f"x{i}", DomainInterval(0, 1)) for i in range(n)]
    y_index = {}
    for i, j in pairs:
        y_index[(i, j)] = len(variables)
        variables.append(Variable(f"y{i}_{j}", DomainInterval(0, 1)))
    s_index = len(variables)
    variables.append(Variable("s", DomainInterval(1, t)))
    d_index: dict[tuple[int, int, int], int] = {}
    c_index: dict[tuple[int, int, int], int] = {}
    parts = []
    for i, j in pairs:
        local = []
        for p in range(1, t + 1):
            d_index[(i, j, p)] = len(variables)
            local.append(len(variables))
            variables.append(Variable(f"d{i}_{j}_{p}", DomainInterval(0, 1)))
        for p in range(1, t + 1):
            c_index[(i, j, p)] = len(variables)
            local.append(len(variables))
            variables.append(Variable(f"c{i}_{j}_{p}", DomainInterval(0, 1)))
        parts.append(frozenset(local))

    rows: list[Constraint] = []
    rows.append(Constraint({i: 1 for i in range(n)}, Rel.GE, k))
    for i, j in pairs:
        rows.append(Constraint({i: 1, j: 1, y_index[(i, j)]: 1}, Rel.LE, 2))
    for i, j in pairs:
        for p in range(1, t + 1):
            d = d_index[(i, j, p)]
            rows.append(Constraint({s_index: 1, d: t}, Rel.GE, p))
            rows.append(Constraint({s_index: 1, d: -t}, Rel.LE, p))
        rows.append(Constraint({c_index[(i, j, 1)]: 1, d_index[(i, j, 1)]: -1}, Rel.EQ, 0))
        for p in range(2, t + 1):
            rows.append(Constraint({c_index[(i, j, p)]: 1,
                                    c_index[(i, j, p - 1)]: -1,
                                    d_index[(i, j, p)]: -1}, Rel.EQ, -1))
        rows.append(Constraint({c_index[(i, j, t)]: 1}, Rel.EQ, 0))
        for p in range(1, t + 1):
            d = d_index[(i, j, p)]
            if (i, j) in edge_sets[p - 1]:
                rows.append(Constraint({y_index[(i, j)]: 1, d: 1}, Rel.GE, 1))
            else:
                rows.append(Constraint({y_index[(i, j)]: 1, d: -1}, Rel.LE, 0))
    for v, descr in enumerate(variables):
        rows.append(Constraint({v: 1}, Rel.LE, descr.domain.hi))
        rows.append(Constraint({v: -1}, Rel.LE, -descr.domain.lo))

    y0 = frozenset(range(n)) | frozenset(y_index.values()) | {s_index}
    pd = ProtrusionDecomposition(y0, tuple(parts), 5, max(len(parts), len(y0)))
    return Ilp(tuple(variables), tuple(rows)), pd


def gen_random_protrusion(k: int, r: int, d: int, parts: int,
                          seed: int) -> tuple[Ilp, ProtrusionDecomposition]:
    """Seed-deterministic instance with a valid protrusion decomposition.

    The shared part Y0 gets up to k variables and a few random rows.  Each
    part is a small subsystem whose rows form a random tree over the part
    variables and at most r boundary variables, so the part plus its
    neighborhood keeps treewidth <= 1 <= r-1.  For r = 1 a protrusion may
    carry no edges at all, so parts degenerate to isolated subsystems with
    single-variable rows (occasionally unsatisfiable ones).
    """
    if r < 1 or d < 2 or k < 1 or parts < 0:
        raise ModelError("need r >= 1, d >= 2, k >= 1, parts >= 0")
    rng = random.Random(seed)
    k0 = rng.randint(1, k)
    variables = [Variable(f"z{i}", DomainInterval(0, d - 1)) for i in range(k0)]
    rows: list[Constraint] = []
    rels = [Rel.LE, Rel.LE, Rel.GE, Rel.EQ]
    conflict: set[tuple[int, int]] = set()
    for _ in range(rng.randint(0, k0 + 1)):
        size = rng.randint(1, min(3, k0))
        support = rng.sample(range(k0), size)
        conflict.update((min(a, b), max(a, b)) for a, b in combinations(support, 2))
        coeffs = {v: rng.choice([-2, -1, 1, 2]) for v in support}
        rows.append(Constraint(coeffs, rng.choice(rels), rng.randint(-d, 2 * d)))

    def two_var_row(a: int, b: int) -> Constraint:
        coeffs = {a: rng.choice([-2, -1, 1, 2]), b: rng.choice([-2, -1, 1, 2])}
        return Constraint(coeffs, rng.choice(rels), rng.randint(-d, 2 * d))

    part_sets: list[frozenset[int]] = []
    for p in range(parts):
        n_p = rng.randint(1, 3)
        base = len(variables)
        variables += [Variable(f"p{p}_{i}", DomainInterval(0, d - 1)) for i in range(n_p)]
        members = list(range(base, base + n_p))
        part_sets.append(frozenset(members))
        if r == 1:
            for v in members:
                if rng.random() < 0.8:
                    rows.append(Constraint({v: 1}, Rel.LE, rng.randint(0, d - 1)))
                if rng.random() < 0.3:
                    rows.append(Constraint({v: -1}, Rel.LE, -rng.randint(0, d)))
            continue
        for i in range(1, n_p):
            rows.append(two_var_row(members[rng.randrange(i)], members[i]))
        # boundary variables hang off the part as leaves and must not share a
        # Y0 row pairwise, so the part plus neighborhood stays a forest
        boundary: list[int] = []
        for _ in range(rng.randint(0, min(r, k0)) * 4):
            cand = rng.randrange(k0)
            if cand in boundary or len(boundary) >= min(r, k0):
                continue
            if any((min(cand, b), max(cand, b)) in conflict for b in boundary):
                continue
            boundary.append(cand)
        for b in sorted(boundary):
            rows.append(two_var_row(b, rng.choice(members)))
    pd = ProtrusionDecomposition(frozenset(range(k0)), tuple(part_sets),
                                 r, max(parts, k0))
    return Ilp(tuple(variables), tuple(rows)), pd
