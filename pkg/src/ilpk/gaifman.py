"""Gaifman graphs, tree decompositions, and nice Gaifman decompositions.

The Gaifman graph of an instance has one vertex per variable and an edge
whenever two variables share a row, so every row's support is a clique.
A nice Gaifman decomposition is a rooted nice tree decomposition of that
graph (leaf/join/introduce/forget nodes) augmented with constraint nodes,
each owning exactly one row whose support lies inside its bag; the solver
in :mod:`ilpk.dp` runs directly on this structure.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from . import backend
from .caps import Caps, DEFAULT_CAPS
from .core import Ilp, is_normalized
from .errors import DecompositionError, ModelError, ParseError, ResourceCapError

__all__ = [
    "GaifmanGraph",
    "TreeDecomposition",
    "NiceNode",
    "NiceGaifmanDecomposition",
    "ValidationReport",
    "build_gaifman",
    "validate_tree_decomposition",
    "treewidth_exact",
    "treewidth_heuristic",
    "make_nice",
    "validate_nice",
    "td_to_json",
    "td_from_json",
    "td_to_pace",
    "td_from_pace",
]


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validator: ok iff no violations; notes are advisory."""

    ok: bool
    violations: tuple[tuple[str, str], ...] = ()
    notes: tuple[str, ...] = ()

    @classmethod
    def from_violations(cls, violations: Iterable[tuple[str, str]],
                        notes: Iterable[str] = ()) -> "ValidationReport":
        vs = tuple(violations)
        return cls(not vs, vs, tuple(notes))


@dataclass(frozen=True, eq=False)
class GaifmanGraph:
    n: int
    neighbors: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if len(self.neighbors) != self.n:
            raise ModelError("neighbor table size does not match vertex count")
        for v, nb in enumerate(self.neighbors):
            if v in nb:
                raise ModelError(f"self-loop at vertex {v}")
            for u in nb:
                if not (0 <= u < self.n) or v not in self.neighbors[u]:
                    raise ModelError(f"asymmetric or out-of-range edge {{{v}, {u}}}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "GaifmanGraph":
        nb: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ModelError(f"self-loop at vertex {u}")
            nb[u].add(v)
            nb[v].add(u)
        return cls(n, tuple(frozenset(s) for s in nb))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.neighbors[u]) if u < v]

    def subgraph(self, vertices: Iterable[int]) -> tuple["GaifmanGraph", dict[int, int]]:
        """Induced subgraph on the given vertices plus old->new index map."""
        keep = sorted(set(vertices))
        remap = {v: i for i, v in enumerate(keep)}
        nb = tuple(frozenset(remap[u] for u in self.neighbors[v] if u in remap) for v in keep)
        return GaifmanGraph(len(keep), nb), remap

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GaifmanGraph):
            return NotImplemented
        return self.n == other.n and self.neighbors == other.neighbors


def build_gaifman(ilp: Ilp) -> GaifmanGraph:
    """Vertices are variables; two are adjacent iff some row uses both.

    The relation of a row is irrelevant, so the graph is invariant under
    normalization.
    """
    nb: list[set[int]] = [set() for _ in range(ilp.n)]
    for con in ilp.constraints:
        sup = sorted(con.coeffs)
        for i, u in enumerate(sup):
            for v in sup[i + 1:]:
                nb[u].add(v)
                nb[v].add(u)
    return GaifmanGraph(ilp.n, tuple(frozenset(s) for s in nb))


@dataclass(frozen=True, eq=False)
class TreeDecomposition:
    """Rooted tree of bags; parent[i] == -1 exactly for the root."""

    bags: tuple[frozenset[int], ...]
    parent: tuple[int, ...]
    root: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(self, "parent", tuple(self.parent))
        if len(self.bags) != len(self.parent) or not self.bags:
            raise ModelError("bags and parent arrays must be nonempty and equally long")
        if not (0 <= self.root < len(self.bags)) or self.parent[self.root] != -1:
            raise ModelError("root must be a valid node with parent -1")

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in self.bags]
        for i, p in enumerate(self.parent):
            if p != -1:
                ch[p].append(i)
        return ch

    def edges(self) -> list[tuple[int, int]]:
        return [(p, i) for i, p in enumerate(self.parent) if p != -1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        return (self.bags, self.parent, self.root) == (other.bags, other.parent, other.root)


def validate_tree_decomposition(g: GaifmanGraph, td: TreeDecomposition) -> ValidationReport:
    """Check the tree shape plus the three decomposition conditions."""
    violations: list[tuple[str, str]] = []
    size = len(td.bags)
    seen = [False] * size
    stack = [td.root]
    seen[td.root] = True
    children = td.children()
    while stack:
        node = stack.pop()
        for c in children[node]:
            if seen[c]:
                violations.append(("td.structure", f"node {c} reached twice"))
                return ValidationReport.from_violations(violations)
            seen[c] = True
            stack.append(c)
    if not all(seen):
        missing = [i for i, s in enumerate(seen) if not s]
        violations.append(("td.structure", f"nodes {missing} unreachable from the root"))
        return ValidationReport.from_violations(violations)

    for i, bag in enumerate(td.bags):
        for v in bag:
            if not (0 <= v < g.n):
                violations.append(("td.vertices", f"bag {i} mentions unknown vertex {v}"))

    covered = set().union(*td.bags) if td.bags else set()
    missing_vertices = set(range(g.n)) - covered
    if missing_vertices:
        violations.append(("td.cover", f"vertices {sorted(missing_vertices)} in no bag"))

    for u, v in g.edges():
        if not any(u in bag and v in bag for bag in td.bags):
            violations.append(("td.edges", f"edge {{{u}, {v}}} inside no bag"))

    for v in range(g.n):
        nodes = [i for i, bag in enumerate(td.bags) if v in bag]
        if not nodes:
            continue
        node_set = set(nodes)
        comp = {nodes[0]}
        frontier = [nodes[0]]
        while frontier:
            x = frontier.pop()
            for y in children[x] + ([td.parent[x]] if td.parent[x] != -1 else []):
                if y in node_set and y not in comp:
                    comp.add(y)
                    frontier.append(y)
        if comp != node_set:
            violations.append(("td.connected", f"occurrences of vertex {v} are disconnected"))
    return ValidationReport.from_violations(violations)


# ---------------------------------------------------------------------------
# treewidth


def _simplicial_prefix(adj: list[set[int]], alive: set[int]) -> tuple[list[int], int]:
    """Greedily eliminate simplicial vertices (lowest index first).

    Returns the eliminated order and the max elimination degree seen.  Safe:
    for simplicial v, tw(G) = max(deg(v), tw(G - v)).
    """
    order: list[int] = []
    width = 0
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            nb = adj[v] & alive
            if all(u in adj[w] for u, w in combinations(sorted(nb), 2)):
                order.append(v)
                width = max(width, len(nb))
                alive.discard(v)
                changed = True
                break
    return order, width


def _elimination_order(g: GaifmanGraph, caps: Caps) -> tuple[int, list[int]]:
    """Exact treewidth and a witnessing elimination order.

    The exact_tw cap limits the subset-DP core of each connected component
    after simplicial vertices are peeled off, which is where the exponential
    cost lives; overall vertex count is irrelevant.
    """
    width = 0
    order: list[int] = []
    assigned: set[int] = set()
    for start in range(g.n):
        if start in assigned:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for u in g.neighbors[v]:
                if u not in comp:
                    comp.add(u)
                    frontier.append(u)
        assigned |= comp
        adj = [set(g.neighbors[v]) for v in range(g.n)]
        alive = set(comp)
        simp, w0 = _simplicial_prefix(adj, alive)
        width = max(width, w0)
        order.extend(simp)
        if alive:
            if len(alive) > caps.exact_tw:
                raise ResourceCapError(
                    f"instance too large for exact mode: a component keeps "
                    f"{len(alive)} vertices after reduction, cap is {caps.exact_tw}")
            local = sorted(alive)
            idx = {v: i for i, v in enumerate(local)}
            masks = []
            for v in local:
                m = 0
                for u in g.neighbors[v]:
                    if u in idx:
                        m |= 1 << idx[u]
                masks.append(m)
            w1, local_order = backend.elimination_order_dp(len(local), masks)
            width = max(width, w1)
            order.extend(local[i] for i in local_order)
    return width, order


def _td_from_order(g: GaifmanGraph, order: list[int]) -> TreeDecomposition:
    """Fill-in bags along an elimination order, linked as an elimination tree."""
    n = g.n
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(g.neighbors[v]) for v in range(n)]
    bags: list[frozenset[int]] = []
    later: list[list[int]] = []
    for v in order:
        nb = sorted((u for u in adj[v] if pos[u] > pos[v]), key=pos.get)
        bags.append(frozenset([v] + nb))
        later.append(nb)
        for u, w in combinations(nb, 2):
            adj[u].add(w)
            adj[w].add(u)
    parent = [-1] * n
    for i, nb in enumerate(later):
        if nb:
            parent[i] = pos[nb[0]]
    roots = [i for i in range(n) if parent[i] == -1]
    for extra in roots[1:]:
        parent[extra] = roots[0]
    return TreeDecomposition(tuple(bags), tuple(parent), roots[0])


def _empty_graph_td() -> TreeDecomposition:
    return TreeDecomposition((frozenset(),), (-1,), 0)


def treewidth_exact(g: GaifmanGraph, caps: Caps = DEFAULT_CAPS) -> tuple[int, TreeDecomposition]:
    """Exact treewidth plus a witnessing decomposition.

    Subset DP over elimination orders, run per connected component after
    peeling simplicial vertices; a component whose residual core exceeds the
    exact_tw cap raises ResourceCapError.  The empty graph gets width -1 by
    the usual convention.
    """
    if g.n == 0:
        return -1, _empty_graph_td()
    width, order = _elimination_order(g, caps)
    td = _td_from_order(g, order)
    if td.width != width:
        raise DecompositionError(
            f"internal: decomposition width {td.width} != computed width {width}")
    return width, td


def treewidth_heuristic(g: GaifmanGraph) -> tuple[int, TreeDecomposition]:
    """Min-fill greedy upper bound; ties broken by lowest vertex index."""
    if g.n == 0:
        return -1, _empty_graph_td()
    adj = [set(nb) for nb in g.neighbors]
    alive = set(range(g.n))
    order: list[int] = []
    while alive:
        best_v, best_fill = -1, None
        for v in sorted(alive):
            nb = sorted(adj[v] & alive)
            fill = sum(1 for u, w in combinations(nb, 2) if w not in adj[u])
            if best_fill is None or fill < best_fill:
                best_v, best_fill = v, fill
        nb = adj[best_v] & alive
        for u, w in combinations(sorted(nb), 2):
            adj[u].add(w)
            adj[w].add(u)
        alive.discard(best_v)
        order.append(best_v)
    td = _td_from_order(g, order)
    return td.width, td


# ---------------------------------------------------------------------------
# nice Gaifman decompositions


@dataclass(frozen=True)
class NiceNode:
    kind: str  # leaf | introduce | forget | join | constraint
    bag: frozenset[int]
    children: tuple[int, ...]
    var: Optional[int] = None   # introduce/forget only
    row: Optional[int] = None   # constraint only


@dataclass(frozen=True, eq=False)
class NiceGaifmanDecomposition:
    nodes: tuple[NiceNode, ...]
    root: int

    @property
    def width(self) -> int:
        return max(len(nd.bag) for nd in self.nodes) - 1

    def post_order(self) -> list[int]:
        out: list[int] = []
        stack: list[tuple[int, bool]] = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                out.append(node)
            else:
                stack.append((node, True))
                for c in reversed(self.nodes[node].children):
                    stack.append((c, False))
        return out

    def row_assignment(self) -> dict[int, int]:
        """Map row index -> id of the constraint node that owns it."""
        out: dict[int, int] = {}
        for i, nd in enumerate(self.nodes):
            if nd.kind == "constraint" and nd.row is not None:
                out.setdefault(nd.row, i)
        return out


class _NiceBuilder:
    def __init__(self) -> None:
        self.kind: list[str] = []
        self.bag: list[frozenset[int]] = []
        self.children: list[list[int]] = []
        self.var: list[Optional[int]] = []
        self.row: list[Optional[int]] = []

    def add(self, kind: str, bag: frozenset[int], children: list[int],
            var: Optional[int] = None, row: Optional[int] = None) -> int:
        self.kind.append(kind)
        self.bag.append(bag)
        self.children.append(children)
        self.var.append(var)
        self.row.append(row)
        return len(self.kind) - 1

    def freeze(self, root: int) -> NiceGaifmanDecomposition:
        nodes = tuple(
            NiceNode(k, b, tuple(c), v, r)
            for k, b, c, v, r in zip(self.kind, self.bag, self.children, self.var, self.row))
        return NiceGaifmanDecomposition(nodes, root)


def _mcs_peo(adj: list[set[int]], n: int) -> list[int]:
    """Maximum-cardinality search; returns a perfect elimination order for
    chordal input (ties to the lowest index)."""
    weight = [0] * n
    numbered = [False] * n
    selection: list[int] = []
    for _ in range(n):
        best = -1
        for v in range(n):
            if not numbered[v] and (best == -1 or weight[v] > weight[best]):
                best = v
        numbered[best] = True
        selection.append(best)
        for u in adj[best]:
            if not numbered[u]:
                weight[u] += 1
    selection.reverse()
    return selection


def make_nice(ilp: Ilp, td: TreeDecomposition) -> NiceGaifmanDecomposition:
    """Turn a valid tree decomposition of the Gaifman graph into a nice
    Gaifman decomposition of the same width.

    Pipeline: complete every bag into a clique (chordal supergraph), take a
    perfect elimination order, build the elimination-tree bags, expand them
    into leaf/introduce/forget/join chains (threading sibling chains through
    one another where bags nest, which keeps the node count low), and finally
    splice one constraint node per row at the first bag in post-order that
    contains the row's support.
    """
    if not is_normalized(ilp):
        raise ModelError("make_nice requires a normalized instance (only <= rows)")
    if ilp.n == 0:
        raise DecompositionError("nice decomposition undefined without variables")
    g = build_gaifman(ilp)
    report = validate_tree_decomposition(g, td)
    if not report.ok:
        rule, detail = report.violations[0]
        raise DecompositionError(f"invalid tree decomposition ({rule}): {detail}")

    n = ilp.n
    adj = [set(g.neighbors[v]) for v in range(n)]
    for bag in td.bags:
        for u, w in combinations(sorted(bag), 2):
            adj[u].add(w)
            adj[w].add(u)
    peo = _mcs_peo(adj, n)
    pos = {v: i for i, v in enumerate(peo)}
    bag_of: list[frozenset[int]] = []
    succ: list[list[int]] = []
    for i, v in enumerate(peo):
        later = sorted((u for u in adj[v] if pos[u] > i), key=pos.get)
        bag_of.append(frozenset([v] + later))
        succ.append(later)
    if max(len(b) for b in bag_of) - 1 > td.width:
        raise DecompositionError("internal: elimination order exceeded input width")
    parent = [-1] * n
    children: list[list[int]] = [[] for _ in range(n)]
    for i, later in enumerate(succ):
        if later:
            parent[i] = pos[later[0]]
            children[parent[i]].append(i)

    b = _NiceBuilder()

    def leaf_chain(target: frozenset[int]) -> tuple[int, frozenset[int]]:
        vs = sorted(target)
        node = b.add("leaf", frozenset([vs[0]]), [])
        bag = frozenset([vs[0]])
        for v in vs[1:]:
            bag = bag | {v}
            node = b.add("introduce", bag, [node], var=v)
        return node, bag

    def raise_to(node: int, bag: frozenset[int], target: frozenset[int]) -> int:
        for v in sorted(target - bag):
            bag = bag | {v}
            node = b.add("introduce", bag, [node], var=v)
        return node

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 1000))

    def build(i: int, base: Optional[tuple[int, frozenset[int]]]) -> int:
        target = bag_of[i]
        kids = sorted(children[i],
                      key=lambda c: (len(bag_of[c]) - 1, tuple(sorted(bag_of[c] - {peo[c]})), c))
        chains: list[tuple[int, frozenset[int]]] = []
        pending = base
        for c in kids:
            vc = peo[c]
            if pending is not None and vc not in pending[1] and pending[1] <= bag_of[c]:
                top = build(c, pending)
            else:
                if pending is not None:
                    chains.append(pending)
                top = build(c, None)
            bag = bag_of[c] - {vc}
            node = b.add("forget", bag, [top], var=vc)
            pending = (node, bag)
        if pending is not None:
            chains.append(pending)
        if not chains:
            node, bag = leaf_chain(target)
            return node
        # merge chains pairwise at the union of their tops (cheapest first);
        # raising to the full target bag happens only once at the end
        while len(chains) > 1:
            best = None
            for i in range(len(chains)):
                for j in range(i + 1, len(chains)):
                    union = chains[i][1] | chains[j][1]
                    key = (len(union), tuple(sorted(union)), i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j, union)
            _, i, j, union = best
            left = raise_to(chains[i][0], chains[i][1], union)
            right = raise_to(chains[j][0], chains[j][1], union)
            merged = (b.add("join", union, [left, right]), union)
            chains = [c for k, c in enumerate(chains) if k not in (i, j)] + [merged]
        return raise_to(chains[0][0], chains[0][1], target)

    roots = [i for i in range(n) if parent[i] == -1]
    tops = [build(r, None) for r in roots]
    if len(tops) == 1:
        root = tops[0]
    else:
        stubs = []
        for r, t in zip(roots, tops):
            stubs.append(b.add("forget", frozenset(), [t], var=peo[r]))
        root = stubs[0]
        for t in stubs[1:]:
            root = b.add("join", frozenset(), [root, t])

    # splice constraint nodes in post-order, first fitting bag wins
    parent_of: dict[int, int] = {}
    post: list[int] = []
    visit: list[tuple[int, bool]] = [(root, False)]
    while visit:
        node, expanded = visit.pop()
        if expanded:
            post.append(node)
            continue
        visit.append((node, True))
        for c in reversed(b.children[node]):
            parent_of[c] = node
            visit.append((c, False))

    supports = [con.support for con in ilp.constraints]
    unplaced = list(range(ilp.m))
    top_above: dict[int, int] = {}
    for node in post:
        bag = b.bag[node]
        still: list[int] = []
        for row in unplaced:
            if supports[row] <= bag:
                cur = top_above.get(node, node)
                up = parent_of.get(cur)
                new = b.add("constraint", bag, [cur], row=row)
                parent_of[cur] = new
                if up is None:
                    root = new
                else:
                    b.children[up][b.children[up].index(cur)] = new
                    parent_of[new] = up
                top_above[node] = new
            else:
                still.append(row)
        unplaced = still
    if unplaced:
        raise DecompositionError(f"internal: rows {unplaced} fit no bag")

    total = len(b.kind)
    if total > 4 * n + ilp.m:
        raise DecompositionError(
            f"nice decomposition has {total} nodes, above the 4n+m budget "
            f"({4 * n + ilp.m}); the input decomposition is too fragmented")
    ngd = b.freeze(root)
    check = validate_nice(ilp, ngd)
    if not check.ok:
        rule, detail = check.violations[0]
        raise DecompositionError(f"internal: constructed decomposition invalid ({rule}): {detail}")
    return ngd


def validate_nice(ilp: Ilp, ngd: NiceGaifmanDecomposition) -> ValidationReport:
    """Check every structural invariant of a nice Gaifman decomposition."""
    violations: list[tuple[str, str]] = []
    nodes = ngd.nodes
    size = len(nodes)
    if not (0 <= ngd.root < size):
        return ValidationReport.from_violations([("nice.structure", "root out of range")])
    seen = [False] * size
    stack = [ngd.root]
    seen[ngd.root] = True
    while stack:
        x = stack.pop()
        for c in nodes[x].children:
            if not (0 <= c < size) or seen[c]:
                violations.append(("nice.structure", f"node {x} has bad child {c}"))
                return ValidationReport.from_violations(violations)
            seen[c] = True
            stack.append(c)
    if not all(seen):
        violations.append(("nice.structure", "tree does not cover all nodes"))
        return ValidationReport.from_violations(violations)

    for i, nd in enumerate(nodes):
        kind = nd.kind
        kids = nd.children
        if kind == "leaf":
            if kids or len(nd.bag) != 1:
                violations.append(("nice.leaf", f"node {i} is not a unit leaf"))
        elif kind == "join":
            if len(kids) != 2 or any(nodes[c].bag != nd.bag for c in kids):
                violations.append(("nice.join", f"node {i} children bags differ from its own"))
        elif kind == "introduce":
            if (len(kids) != 1 or nd.var is None or nd.var in nodes[kids[0]].bag
                    or nd.bag != nodes[kids[0]].bag | {nd.var}):
                violations.append(("nice.introduce", f"node {i} malformed"))
        elif kind == "forget":
            if (len(kids) != 1 or nd.var is None or nd.var not in nodes[kids[0]].bag
                    or nd.bag != nodes[kids[0]].bag - {nd.var}):
                violations.append(("nice.forget", f"node {i} malformed"))
        elif kind == "constraint":
            if len(kids) != 1 or nd.bag != nodes[kids[0]].bag:
                violations.append(("nice.constraint", f"node {i} bag differs from child"))
            if nd.row is None or not (0 <= nd.row < ilp.m):
                violations.append(("nice.constraint", f"node {i} stores no valid row"))
            elif not ilp.constraints[nd.row].support <= nd.bag:
                violations.append(
                    ("nice.constraint", f"node {i}: row {nd.row} support outside bag"))
        else:
            violations.append(("nice.kind", f"node {i} has unknown kind {kind!r}"))

    assigned: dict[int, list[int]] = {}
    for i, nd in enumerate(nodes):
        if nd.kind == "constraint" and nd.row is not None:
            assigned.setdefault(nd.row, []).append(i)
    for row in range(ilp.m):
        hits = assigned.get(row, [])
        if len(hits) != 1:
            violations.append(("nice.rows", f"row {row} assigned to {len(hits)} nodes"))

    if size > 4 * ilp.n + ilp.m:
        violations.append(("nice.count",
                           f"{size} nodes exceed the 4n+m bound {4 * ilp.n + ilp.m}"))

    # underlying tree decomposition conditions against the Gaifman graph
    g = build_gaifman(ilp)
    bags = tuple(nd.bag for nd in nodes)
    parent = [-1] * size
    for i, nd in enumerate(nodes):
        for c in nd.children:
            parent[c] = i
    if ilp.n > 0:
        td = TreeDecomposition(bags, tuple(parent), ngd.root)
        sub = validate_tree_decomposition(g, td)
        violations.extend(sub.violations)
    return ValidationReport.from_violations(violations)


# ---------------------------------------------------------------------------
# serialization of tree decompositions


def td_to_json(td: TreeDecomposition) -> dict:
    return {
        "bags": [sorted(bag) for bag in td.bags],
        "edges": [[p, i] for i, p in enumerate(td.parent) if p != -1],
        "root": td.root,
    }


def td_from_json(obj: dict) -> TreeDecomposition:
    try:
        bags = [frozenset(int(v) for v in bag) for bag in obj["bags"]]
        edges = [(int(a), int(b)) for a, b in obj.get("edges", [])]
        root = int(obj.get("root", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad tree decomposition object: {exc}") from None
    return _orient(bags, edges, root)


def _orient(bags: list[frozenset[int]], edges: list[tuple[int, int]],
            root: int) -> TreeDecomposition:
    size = len(bags)
    if size == 0:
        raise ParseError("tree decomposition has no bags")
    if not (0 <= root < size):
        raise ParseError(f"root {root} out of range")
    adj: list[list[int]] = [[] for _ in range(size)]
    for a, b_ in edges:
        if not (0 <= a < size and 0 <= b_ < size):
            raise ParseError(f"tree edge ({a}, {b_}) out of range")
        adj[a].append(b_)
        adj[b_].append(a)
    parent = [-1] * size
    seen = [False] * size
    seen[root] = True
    queue = [root]
    while queue:
        x = queue.pop()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                queue.append(y)
    if not all(seen):
        raise ParseError("tree decomposition edges do not form a spanning tree")
    return TreeDecomposition(tuple(bags), tuple(parent), root)


def td_to_pace(td: TreeDecomposition, n_vertices: int) -> str:
    """PACE-style .td text; vertices and bag ids are printed 1-based."""
    lines = [f"s td {len(td.bags)} {td.width + 1} {n_vertices}"]
    for i, bag in enumerate(td.bags):
        lines.append("b " + " ".join([str(i + 1)] + [str(v + 1) for v in sorted(bag)]))
    for p, i in td.edges():
        lines.append(f"{p + 1} {i + 1}")
    return "\n".join(lines) + "\n"


def td_from_pace(text: str) -> tuple[TreeDecomposition, int]:
    """Parse PACE .td text; returns the decomposition plus the declared
    vertex count.  Bag 1 becomes the root."""
    header: Optional[tuple[int, int, int]] = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise ParseError(f"line {lineno}: duplicate s-line")
            if len(parts) != 5 or parts[1] != "td":
                raise ParseError(f"line {lineno}: malformed s-line {line!r}")
            header = (int(parts[2]), int(parts[3]), int(parts[4]))
        elif parts[0] == "b":
            if len(parts) < 2:
                raise ParseError(f"line {lineno}: malformed bag line")
            bag_id = int(parts[1])
            bags[bag_id] = frozenset(int(v) - 1 for v in parts[2:])
        else:
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: malformed edge line {line!r}")
            edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
    if header is None:
        raise ParseError("missing s-line")
    count, _, n_vertices = header
    bag_list = [bags.get(i + 1, frozenset()) for i in range(count)]
    if len(bags) != count:
        raise ParseError(f"s-line declares {count} bags, found {len(bags)}")
    return _orient(bag_list, edges, 0), n_vertices
