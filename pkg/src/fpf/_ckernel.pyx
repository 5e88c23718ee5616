# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Per-set classification of subsets of Z_p^2 (p <= 7) packed in 64-bit masks.

Mirrors fpf._pykernel line for line; see that module for the reference
semantics of every entry point.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memset

import numpy as np

cdef extern from *:
    int popcount "__builtin_popcountll"(unsigned long long) nogil
    int ctz "__builtin_ctzll"(unsigned long long) nogil

DEF MAXN = 64
DEF MAXP = 8

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t STREAM = 0xD1B54A32D192ED03ULL


cdef struct Tables:
    int p
    int n
    uint64_t full
    int cx[MAXN]
    int cy[MAXN]
    unsigned char sub[MAXN][MAXN]
    int ndir
    uint64_t H[MAXP + 1][MAXP]
    uint64_t dirline[MAXP + 1]
    int class_of[MAXN]
    uint64_t Hm[MAXN][MAXP]
    uint64_t lowcols[MAXP]
    uint64_t highcols[MAXP]


cdef void build(Tables* T, int p):
    cdef int n = p * p, c, e, j, t, a, x, r, r1, r2
    memset(T, 0, sizeof(Tables))
    T.p = p
    T.n = n
    T.full = (<uint64_t>1 << n) - 1 if n < 64 else <uint64_t>0xFFFFFFFFFFFFFFFFULL
    for c in range(n):
        T.cx[c] = c % p
        T.cy[c] = c // p
    for c in range(n):
        for e in range(n):
            T.sub[c][e] = ((T.cx[c] - T.cx[e] + p) % p) + p * ((T.cy[c] - T.cy[e] + p) % p)
    # direction representatives (0,1), (1,0), (1,1), ..., (1,p-1)
    T.ndir = p + 1
    for j in range(p + 1):
        if j == 0:
            r1 = 0
            r2 = 1
        else:
            r1 = 1
            r2 = j - 1
        for c in range(n):
            t = (T.cx[c] * r1 + T.cy[c] * r2) % p
            T.H[j][t] |= (<uint64_t>1) << c
        for r in range(1, p):
            c = (r * r1) % p + p * ((r * r2) % p)
            T.dirline[j] |= (<uint64_t>1) << c
            T.class_of[c] = j
    for c in range(1, n):
        for x in range(n):
            t = (T.cx[x] * T.cx[c] + T.cy[x] * T.cy[c]) % p
            T.Hm[c][t] |= (<uint64_t>1) << x
    for a in range(p):
        for c in range(n):
            if T.cx[c] < p - a:
                T.lowcols[a] |= (<uint64_t>1) << c
            else:
                T.highcols[a] |= (<uint64_t>1) << c


cdef inline uint64_t translate(Tables* T, uint64_t mask, int a, int b) nogil:
    cdef int s
    if a:
        mask = ((mask & T.lowcols[a]) << a) | ((mask & T.highcols[a]) >> (T.p - a))
    if b:
        s = T.p * b
        mask = ((mask << s) | (mask >> (T.n - s))) & T.full
    return mask


cdef inline bint balanced(uint64_t E, uint64_t* levels, int p, int share) nogil:
    cdef int t
    for t in range(p):
        if popcount(E & levels[t]) != share:
            return False
    return True


cdef uint64_t zero_cells(Tables* T, uint64_t E, int k) nogil:
    cdef uint64_t Z = 0
    cdef int j
    if k % T.p:
        return 0
    for j in range(T.ndir):
        if balanced(E, T.H[j], T.p, k // T.p):
            Z |= T.dirline[j]
    return Z


cdef uint64_t zero_cells_direct(Tables* T, uint64_t E, int k) nogil:
    cdef uint64_t Z = 0
    cdef int c
    if k % T.p:
        return 0
    for c in range(1, T.n):
        if balanced(E, T.Hm[c], T.p, k // T.p):
            Z |= (<uint64_t>1) << c
    return Z


cdef int color_bound(uint64_t cand, uint64_t* adj) nogil:
    cdef int colors = 0, v
    cdef uint64_t q, low
    while cand:
        colors += 1
        q = cand
        while q:
            low = q & (~q + 1)
            v = ctz(q)
            cand &= ~low
            q &= ~low & ~adj[v]
    return colors


cdef bint clique(uint64_t cand, uint64_t* adj, int need) nogil:
    cdef int v
    if need == 0:
        return True
    if popcount(cand) < need or color_bound(cand, adj) < need:
        return False
    while cand:
        if popcount(cand) < need:
            return False
        v = ctz(cand)
        cand &= cand - 1
        if clique(cand & adj[v], adj, need - 1):
            return True
    return False


cdef bint spectral(Tables* T, uint64_t E, int k, uint64_t Z) nogil:
    cdef uint64_t adj[MAXN]
    cdef uint64_t rest
    cdef int v
    if k == 1:
        return True
    if popcount(Z) < k - 1:
        return False
    rest = Z
    while rest:
        v = ctz(rest)
        rest &= rest - 1
        adj[v] = translate(T, Z, T.cx[v], T.cy[v]) & Z & ~((<uint64_t>1) << v)
    return clique(Z, adj, k - 1)


cdef bint cover(Tables* T, uint64_t covered, uint64_t* tr, int* elems, int k) nogil:
    cdef int c, i
    cdef uint64_t piece
    if covered == T.full:
        return True
    c = ctz(~covered & T.full)
    for i in range(k):
        piece = tr[T.sub[c][elems[i]]]
        if piece & covered:
            continue
        if cover(T, covered | piece, tr, elems, k):
            return True
    return False


cdef bint tiles(Tables* T, uint64_t E, int k) nogil:
    cdef uint64_t tr[MAXN]
    cdef int elems[MAXN]
    cdef int i = 0, tau
    cdef uint64_t rest = E
    if T.n % k:
        return False
    while rest:
        elems[i] = ctz(rest)
        rest &= rest - 1
        i += 1
    for tau in range(T.n):
        tr[tau] = translate(T, E, T.cx[tau], T.cy[tau])
    return cover(T, 0, tr, elems, k)


cdef bint full_graph(Tables* T, uint64_t E, int k) nogil:
    cdef int elems[MAXN]
    cdef int i = 0, j
    cdef uint64_t rest = E, seen = 0
    cdef uint64_t all_dirs = ((<uint64_t>1) << T.ndir) - 1
    if k != T.p:
        return False
    while rest:
        elems[i] = ctz(rest)
        rest &= rest - 1
        i += 1
    for i in range(k):
        for j in range(i + 1, k):
            seen |= (<uint64_t>1) << T.class_of[T.sub[elems[j]][elems[i]]]
            if seen == all_dirs:
                return False
    return True


cdef inline uint64_t splitmix_next(uint64_t* state) nogil:
    cdef uint64_t z
    state[0] += GOLDEN
    z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef uint64_t sample_mask(Tables* T, uint64_t seed, uint64_t i, bint restrict) nogil:
    cdef uint64_t state = seed + (i + 1) * STREAM
    cdef uint64_t mask
    cdef int k
    while True:
        mask = splitmix_next(&state) & T.full
        if mask == 0:
            continue
        k = popcount(mask)
        if restrict and (k == 1 or k % T.p == 0):
            continue
        return mask


def sample(int p, uint64_t seed, uint64_t i, bint restrict=False):
    """The i-th sampled mask of the counter-based stream."""
    cdef Tables T
    build(&T, p)
    return sample_mask(&T, seed, i, restrict)


def classify(int p, uint64_t mask, bint audit=False):
    """(spectral, tiles, graph, closure_ok) for one nonempty mask."""
    cdef Tables T
    build(&T, p)
    cdef int k = popcount(mask)
    cdef uint64_t Z = zero_cells(&T, mask, k)
    cdef bint closure_ok = True
    if audit:
        closure_ok = zero_cells_direct(&T, mask, k) == Z
    return (bool(spectral(&T, mask, k, Z)), bool(tiles(&T, mask, k)),
            bool(full_graph(&T, mask, k)), bool(closure_ok))


def zero_set_mask(int p, uint64_t mask):
    cdef Tables T
    build(&T, p)
    return zero_cells(&T, mask, popcount(mask))


def run_block(int p, int mode, int k, uint64_t start, uint64_t stop,
              uint64_t seed=0, bint audit=False, bint prune=True, bint collect=False,
              first_mask=None):
    """Classify ranks [start, stop) of a family; see fpf._pykernel.run_block."""
    cdef Tables T
    build(&T, p)
    cdef int n = T.n, size, j
    cdef int64_t tallies[MAXN + 1][5]
    memset(tallies, 0, sizeof(tallies))
    cdef uint64_t r, mask = 0, Z, low, ripple
    cdef bint s, t, g, structural, closure_ok, skip
    cdef uint64_t* buf = NULL
    cdef size_t nbuf = 0, cap = 0, idx
    cdef uint64_t[::1] view
    violations = []
    divisibility = []
    density = []
    closure = []
    if mode == 1 and start < stop:
        mask = first_mask
    try:
        for r in range(start, stop):
            if mode == 0:
                mask = r
            elif mode == 1:
                if r != start:
                    low = mask & (~mask + 1)
                    ripple = mask + low
                    mask = ripple | (((mask ^ ripple) >> 2) // low)
            else:
                mask = sample_mask(&T, seed, r, audit)
            size = popcount(mask)
            tallies[size][0] += 1
            skip = prune and not (size == 1 or size == T.p or size == n)
            if skip:
                tallies[size][4] += 1
                continue
            Z = zero_cells(&T, mask, size)
            closure_ok = True
            if audit:
                closure_ok = zero_cells_direct(&T, mask, size) == Z
            s = spectral(&T, mask, size, Z)
            t = tiles(&T, mask, size)
            g = full_graph(&T, mask, size)
            structural = size == 1 or size == n or g
            tallies[size][1] += s
            tallies[size][2] += t
            tallies[size][3] += g
            if s == t and t == structural:
                tallies[size][4] += 1
            else:
                violations.append((int(mask), bool(s), bool(t), bool(g)))
            if s and collect:
                if nbuf == cap:
                    cap = cap * 2 if cap else 4096
                    buf = <uint64_t*>realloc(buf, cap * sizeof(uint64_t))
                    if buf == NULL:
                        raise MemoryError()
                buf[nbuf] = mask
                nbuf += 1
            if audit:
                if s and size != 1 and size % T.p:
                    divisibility.append(int(mask))
                if s and size > T.p and mask != T.full:
                    density.append(int(mask))
                if not closure_ok:
                    closure.append(int(mask))
        out = np.empty(nbuf, dtype=np.uint64)
        view = out
        for idx in range(nbuf):
            view[idx] = buf[idx]
    finally:
        free(buf)
    return {
        "tallies": [[int(tallies[size][j]) for j in range(5)] for size in range(n + 1)],
        "violations": violations,
        "divisibility": divisibility,
        "density": density,
        "closure": closure,
        "spectral_masks": out,
    }
