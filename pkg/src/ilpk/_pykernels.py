"""Pure-Python fallbacks for the hot kernels.

The compiled twin (``ilpk._kernels``) implements the same four entry points
with identical semantics; ``ilpk.backend`` picks one at import time.  Table
cells are bytes holding 0/1; tables are kept as bytearrays so both backends
can share witness extraction and tests can compare outputs bit for bit.
"""

from __future__ import annotations

__all__ = [
    "run_table_program",
    "brute_first_feasible",
    "brute_boundary_offsets",
    "elimination_order_dp",
]

# relation codes shared with the compiled kernel
REL_LE, REL_GE, REL_EQ = 0, 1, 2


def run_table_program(ops):
    """Execute a bottom-up table program; returns one 0/1 bytearray per op.

    Supported ops (children are indices of earlier ops):
      ("leaf", size)
      ("introduce", child, pre, q, post)      # repeat child blocks q times
      ("forget", child, pre, q, post)         # OR child blocks q-wise
      ("join", a, b, size)                    # cellwise AND
      ("constraint", child, size, radices, coeffs, base, rhs)
    """
    tables: list[bytearray] = []
    for op in ops:
        kind = op[0]
        if kind == "leaf":
            tables.append(bytearray(b"\x01") * op[1])
        elif kind == "introduce":
            _, child, pre, q, post = op
            src = tables[child]
            out = bytearray(pre * q * post)
            idx = 0
            for a in range(pre):
                block = src[a * post:(a + 1) * post]
                for _ in range(q):
                    out[idx:idx + post] = block
                    idx += post
            tables.append(out)
        elif kind == "forget":
            _, child, pre, q, post = op
            src = tables[child]
            out = bytearray(pre * post)
            stride = q * post
            for a in range(pre):
                seg = src[a * stride:(a + 1) * stride]
                acc = int.from_bytes(seg[:post], "little")
                for b in range(1, q):
                    acc |= int.from_bytes(seg[b * post:(b + 1) * post], "little")
                out[a * post:(a + 1) * post] = acc.to_bytes(post, "little")
            tables.append(out)
        elif kind == "join":
            _, a, b, size = op
            merged = (int.from_bytes(tables[a], "little")
                      & int.from_bytes(tables[b], "little"))
            tables.append(bytearray(merged.to_bytes(size, "little")))
        elif kind == "constraint":
            _, child, size, radices, coeffs, base, rhs = op
            out = bytearray(tables[child])
            k = len(radices)
            digits = [0] * k
            cur = base
            for idx in range(size):
                if out[idx] and cur > rhs:
                    out[idx] = 0
                i = k - 1
                while i >= 0:
                    digits[i] += 1
                    cur += coeffs[i]
                    if digits[i] < radices[i]:
                        break
                    cur -= coeffs[i] * radices[i]
                    digits[i] = 0
                    i -= 1
            tables.append(out)
        else:
            raise ValueError(f"unknown table op {kind!r}")
    return tables


def _row_ok(value: int, rel: int, rhs: int) -> bool:
    if rel == REL_LE:
        return value <= rhs
    if rel == REL_GE:
        return value >= rhs
    return value == rhs


def brute_first_feasible(radices, lows, row_ptr, row_var, row_coef, row_rel, row_rhs):
    """Offset (mixed-radix, variable 0 most significant) of the first feasible
    point of the domain box, or -1.  Plain exhaustive scan."""
    n = len(radices)
    rows = []
    for r in range(len(row_rhs)):
        terms = [(row_var[k], row_coef[k]) for k in range(row_ptr[r], row_ptr[r + 1])]
        rows.append((terms, row_rel[r], row_rhs[r]))
    total = 1
    for q in radices:
        total *= q
    vals = list(lows)
    digits = [0] * n
    for offset in range(total):
        feasible = True
        for terms, rel, rhs in rows:
            s = 0
            for v, c in terms:
                s += c * vals[v]
            if not _row_ok(s, rel, rhs):
                feasible = False
                break
        if feasible:
            return offset
        i = n - 1
        while i >= 0:
            digits[i] += 1
            if digits[i] < radices[i]:
                vals[i] = lows[i] + digits[i]
                break
            digits[i] = 0
            vals[i] = lows[i]
            i -= 1
    return -1


def brute_boundary_offsets(nb, radices, lows, row_ptr, row_var, row_coef, row_rel, row_rhs):
    """Boundary offsets (over variables 0..nb-1) that extend to a feasible
    point; the remaining variables are scanned until one completion works."""
    n = len(radices)
    b_rows = []   # per row: boundary terms, rest terms, rel, rhs
    for r in range(len(row_rhs)):
        bt, rt = [], []
        for k in range(row_ptr[r], row_ptr[r + 1]):
            (bt if row_var[k] < nb else rt).append((row_var[k], row_coef[k]))
        b_rows.append((bt, rt, row_rel[r], row_rhs[r]))
    b_total, r_total = 1, 1
    for q in radices[:nb]:
        b_total *= q
    for q in radices[nb:]:
        r_total *= q

    result = []
    bvals = list(lows[:nb])
    bdigits = [0] * nb
    for b_offset in range(b_total):
        partial = []
        for bt, rt, rel, rhs in b_rows:
            s = 0
            for v, c in bt:
                s += c * bvals[v]
            partial.append((s, rt, rel, rhs))
        rvals = list(lows[nb:])
        rdigits = [0] * (n - nb)
        for _ in range(r_total):
            feasible = True
            for s0, rt, rel, rhs in partial:
                s = s0
                for v, c in rt:
                    s += c * rvals[v - nb]
                if not _row_ok(s, rel, rhs):
                    feasible = False
                    break
            if feasible:
                result.append(b_offset)
                break
            i = n - nb - 1
            while i >= 0:
                rdigits[i] += 1
                if rdigits[i] < radices[nb + i]:
                    rvals[i] = lows[nb + i] + rdigits[i]
                    break
                rdigits[i] = 0
                rvals[i] = lows[nb + i]
                i -= 1
        i = nb - 1
        while i >= 0:
            bdigits[i] += 1
            if bdigits[i] < radices[i]:
                bvals[i] = lows[i] + bdigits[i]
                break
            bdigits[i] = 0
            bvals[i] = lows[i]
            i -= 1
    return result


def _reach_count(adj, eliminated, v):
    seen = adj[v]
    work = seen & eliminated
    while work:
        low = work & -work
        work ^= low
        u = low.bit_length() - 1
        new = adj[u] & ~seen
        seen |= new
        work |= new & eliminated
    return bin(seen & ~eliminated & ~(1 << v)).count("1")


def elimination_order_dp(n, adj):
    """Exact treewidth by DP over subsets of eliminated vertices.

    ``f[S]`` is the best achievable width of an elimination prefix on S;
    ties between candidate vertices go to the lowest index so the returned
    elimination order is deterministic.
    """
    full = (1 << n) - 1
    f = bytearray(1 << n)
    choice = bytearray(1 << n)
    for s in range(1, 1 << n):
        best = n + 1
        best_v = 0
        rest = s
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            before = s ^ low
            width = _reach_count(adj, before, v)
            if f[before] > width:
                width = f[before]
            if width < best:
                best = width
                best_v = v
        f[s] = best
        choice[s] = best_v
    order = []
    s = full
    while s:
        v = choice[s]
        order.append(v)
        s ^= 1 << v
    order.reverse()
    return f[full], order
