# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the pure-Python kernels (see ilpk._pykernels).

Semantics are identical bit for bit; tests compare the two backends on the
same inputs.  Only the inner loops are typed; per-node and per-row dispatch
stays in Python, which is negligible next to the table and box sizes.
"""

from cpython cimport array
from libc.stdlib cimport free, malloc

import array

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef array.array _LL_TEMPLATE = array.array('q', [])


cdef array.array _as_ll(values):
    cdef array.array out = array.array('q', values)
    return out


# ---------------------------------------------------------------------------
# DP table program


cdef void _fill_ones(unsigned char[::1] t, Py_ssize_t size) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(size):
        t[i] = 1


cdef void _introduce(const unsigned char[::1] src, unsigned char[::1] dst,
                     Py_ssize_t pre, Py_ssize_t q, Py_ssize_t post) noexcept nogil:
    cdef Py_ssize_t a, b, i, sbase, dbase
    for a in range(pre):
        sbase = a * post
        for b in range(q):
            dbase = (a * q + b) * post
            for i in range(post):
                dst[dbase + i] = src[sbase + i]


cdef void _forget(const unsigned char[::1] src, unsigned char[::1] dst,
                  Py_ssize_t pre, Py_ssize_t q, Py_ssize_t post) noexcept nogil:
    cdef Py_ssize_t a, b, i, sbase
    cdef unsigned char acc
    for a in range(pre):
        sbase = a * q * post
        for i in range(post):
            acc = 0
            for b in range(q):
                acc |= src[sbase + b * post + i]
            dst[a * post + i] = acc


cdef void _join(const unsigned char[::1] a, const unsigned char[::1] b,
                unsigned char[::1] dst, Py_ssize_t size) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(size):
        dst[i] = a[i] & b[i]


cdef void _constraint(unsigned char[::1] t, Py_ssize_t size,
                      const long long[::1] radices, const long long[::1] coeffs,
                      long long base, long long rhs) noexcept nogil:
    cdef Py_ssize_t k = radices.shape[0]
    cdef long long* digits = <long long*> malloc(k * sizeof(long long) if k else sizeof(long long))
    cdef long long cur = base
    cdef Py_ssize_t idx
    cdef Py_ssize_t i
    for i in range(k):
        digits[i] = 0
    for idx in range(size):
        if t[idx] != 0 and cur > rhs:
            t[idx] = 0
        i = k - 1
        while i >= 0:
            digits[i] += 1
            cur += coeffs[i]
            if digits[i] < radices[i]:
                break
            cur -= coeffs[i] * radices[i]
            digits[i] = 0
            i -= 1
    free(digits)


def run_table_program(ops):
    """See _pykernels.run_table_program."""
    tables = []
    cdef Py_ssize_t size, pre, q, post
    cdef long long base, rhs
    for op in ops:
        kind = op[0]
        if kind == "leaf":
            size = op[1]
            t = bytearray(size)
            _fill_ones(t, size)
        elif kind == "introduce":
            pre, q, post = op[2], op[3], op[4]
            t = bytearray(pre * q * post)
            _introduce(tables[op[1]], t, pre, q, post)
        elif kind == "forget":
            pre, q, post = op[2], op[3], op[4]
            t = bytearray(pre * post)
            _forget(tables[op[1]], t, pre, q, post)
        elif kind == "join":
            size = op[3]
            t = bytearray(size)
            _join(tables[op[1]], tables[op[2]], t, size)
        elif kind == "constraint":
            size = op[2]
            base = op[5]
            rhs = op[6]
            t = bytearray(tables[op[1]])
            _constraint(t, size, _as_ll(op[3]), _as_ll(op[4]), base, rhs)
        else:
            raise ValueError(f"unknown table op {kind!r}")
        tables.append(t)
    return tables


# ---------------------------------------------------------------------------
# brute-force enumeration


cdef bint _row_ok(long long value, long long rel, long long rhs) noexcept nogil:
    if rel == 0:
        return value <= rhs
    if rel == 1:
        return value >= rhs
    return value == rhs


def brute_first_feasible(radices, lows, row_ptr, row_var, row_coef, row_rel, row_rhs):
    """See _pykernels.brute_first_feasible."""
    cdef Py_ssize_t n = len(radices)
    cdef Py_ssize_t m = len(row_rhs)
    cdef long long[::1] rad = _as_ll(radices)
    cdef long long[::1] low = _as_ll(lows)
    cdef long long[::1] ptr = _as_ll(row_ptr)
    cdef long long[::1] var = _as_ll(row_var) if row_var else _LL_TEMPLATE
    cdef long long[::1] coef = _as_ll(row_coef) if row_coef else _LL_TEMPLATE
    cdef long long[::1] rel = _as_ll(row_rel) if row_rel else _LL_TEMPLATE
    cdef long long[::1] rhs = _as_ll(row_rhs) if row_rhs else _LL_TEMPLATE

    cdef long long total = 1
    cdef Py_ssize_t i
    for i in range(n):
        total *= rad[i]
    cdef long long* vals = <long long*> malloc((n if n else 1) * sizeof(long long))
    cdef long long* digits = <long long*> malloc((n if n else 1) * sizeof(long long))
    for i in range(n):
        vals[i] = low[i]
        digits[i] = 0
    cdef long long offset, s
    cdef Py_ssize_t r, kk
    cdef bint ok
    cdef Py_ssize_t pos
    try:
        for offset in range(total):
            ok = True
            for r in range(m):
                s = 0
                for kk in range(ptr[r], ptr[r + 1]):
                    s += coef[kk] * vals[var[kk]]
                if not _row_ok(s, rel[r], rhs[r]):
                    ok = False
                    break
            if ok:
                return offset
            pos = n - 1
            while pos >= 0:
                digits[pos] += 1
                if digits[pos] < rad[pos]:
                    vals[pos] = low[pos] + digits[pos]
                    break
                digits[pos] = 0
                vals[pos] = low[pos]
                pos -= 1
        return -1
    finally:
        free(vals)
        free(digits)


def brute_boundary_offsets(nb, radices, lows, row_ptr, row_var, row_coef, row_rel, row_rhs):
    """See _pykernels.brute_boundary_offsets."""
    cdef Py_ssize_t nbound = nb
    cdef Py_ssize_t n = len(radices)
    cdef Py_ssize_t m = len(row_rhs)
    cdef long long[::1] rad = _as_ll(radices)
    cdef long long[::1] low = _as_ll(lows)

    # split each row's terms into boundary and rest parts
    b_ptr, b_var, b_coef = [0], [], []
    r_ptr, r_var, r_coef = [0], [], []
    for row_i in range(m):
        for term_i in range(row_ptr[row_i], row_ptr[row_i + 1]):
            if row_var[term_i] < nbound:
                b_var.append(row_var[term_i])
                b_coef.append(row_coef[term_i])
            else:
                r_var.append(row_var[term_i])
                r_coef.append(row_coef[term_i])
        b_ptr.append(len(b_var))
        r_ptr.append(len(r_var))
    cdef long long[::1] bptr = _as_ll(b_ptr)
    cdef long long[::1] bvar = _as_ll(b_var) if b_var else _LL_TEMPLATE
    cdef long long[::1] bcoef = _as_ll(b_coef) if b_coef else _LL_TEMPLATE
    cdef long long[::1] rptr = _as_ll(r_ptr)
    cdef long long[::1] rvar = _as_ll(r_var) if r_var else _LL_TEMPLATE
    cdef long long[::1] rcoef = _as_ll(r_coef) if r_coef else _LL_TEMPLATE
    cdef long long[::1] rel = _as_ll(row_rel) if row_rel else _LL_TEMPLATE
    cdef long long[::1] rhs = _as_ll(row_rhs) if row_rhs else _LL_TEMPLATE

    cdef long long b_total = 1, r_total = 1
    cdef Py_ssize_t i
    for i in range(nbound):
        b_total *= rad[i]
    for i in range(nbound, n):
        r_total *= rad[i]

    cdef Py_ssize_t nrest = n - nbound
    cdef long long* bvals = <long long*> malloc((nbound if nbound else 1) * sizeof(long long))
    cdef long long* bdig = <long long*> malloc((nbound if nbound else 1) * sizeof(long long))
    cdef long long* rvals = <long long*> malloc((nrest if nrest else 1) * sizeof(long long))
    cdef long long* rdig = <long long*> malloc((nrest if nrest else 1) * sizeof(long long))
    cdef long long* partial = <long long*> malloc((m if m else 1) * sizeof(long long))
    for i in range(nbound):
        bvals[i] = low[i]
        bdig[i] = 0

    result = []
    cdef long long b_off, r_off, s
    cdef Py_ssize_t r, kk, pos
    cdef bint ok, found
    try:
        for b_off in range(b_total):
            for r in range(m):
                s = 0
                for kk in range(bptr[r], bptr[r + 1]):
                    s += bcoef[kk] * bvals[bvar[kk]]
                partial[r] = s
            for i in range(nrest):
                rvals[i] = low[nbound + i]
                rdig[i] = 0
            found = False
            for r_off in range(r_total):
                ok = True
                for r in range(m):
                    s = partial[r]
                    for kk in range(rptr[r], rptr[r + 1]):
                        s += rcoef[kk] * rvals[rvar[kk] - nbound]
                    if not _row_ok(s, rel[r], rhs[r]):
                        ok = False
                        break
                if ok:
                    found = True
                    break
                pos = nrest - 1
                while pos >= 0:
                    rdig[pos] += 1
                    if rdig[pos] < rad[nbound + pos]:
                        rvals[pos] = low[nbound + pos] + rdig[pos]
                        break
                    rdig[pos] = 0
                    rvals[pos] = low[nbound + pos]
                    pos -= 1
            if found:
                result.append(b_off)
            pos = nbound - 1
            while pos >= 0:
                bdig[pos] += 1
                if bdig[pos] < rad[pos]:
                    bvals[pos] = low[pos] + bdig[pos]
                    break
                bdig[pos] = 0
                bvals[pos] = low[pos]
                pos -= 1
        return result
    finally:
        free(bvals)
        free(bdig)
        free(rvals)
        free(rdig)
        free(partial)


# ---------------------------------------------------------------------------
# exact treewidth DP


cdef inline int _reach_count(const unsigned long long* adj, unsigned long long elim,
                             int v) noexcept nogil:
    cdef unsigned long long seen = adj[v]
    cdef unsigned long long work = seen & elim
    cdef unsigned long long lowbit, fresh
    cdef int u
    while work:
        lowbit = work & (~work + 1)
        work ^= lowbit
        u = __builtin_ctzll(lowbit)
        fresh = adj[u] & ~seen
        seen |= fresh
        work |= fresh & elim
    return __builtin_popcountll(seen & ~elim & ~((<unsigned long long> 1) << v))


def elimination_order_dp(n, adj):
    """See _pykernels.elimination_order_dp."""
    cdef int nn = n
    if nn > 25:
        raise ValueError("subset DP limited to 25 vertices")
    cdef Py_ssize_t states = (<Py_ssize_t> 1) << nn
    cdef unsigned long long* masks = <unsigned long long*> malloc(
        (nn if nn else 1) * sizeof(unsigned long long))
    cdef unsigned char* f = <unsigned char*> malloc(states)
    cdef unsigned char* choice = <unsigned char*> malloc(states)
    cdef Py_ssize_t s
    cdef unsigned long long rest, lowbit
    cdef int v, best, best_v, width
    cdef Py_ssize_t before
    cdef int i
    for i in range(nn):
        masks[i] = adj[i]
    try:
        f[0] = 0
        for s in range(1, states):
            best = nn + 1
            best_v = 0
            rest = <unsigned long long> s
            while rest:
                lowbit = rest & (~rest + 1)
                rest ^= lowbit
                v = __builtin_ctzll(lowbit)
                before = s ^ <Py_ssize_t> lowbit
                width = _reach_count(masks, <unsigned long long> before, v)
                if f[before] > width:
                    width = f[before]
                if width < best:
                    best = width
                    best_v = v
            f[s] = <unsigned char> best
            choice[s] = <unsigned char> best_v
        order = []
        s = states - 1
        while s:
            v = choice[s]
            order.append(v)
            s ^= (<Py_ssize_t> 1) << v
        order.reverse()
        return (f[states - 1] if nn else 0), order
    finally:
        free(masks)
        free(f)
        free(choice)
