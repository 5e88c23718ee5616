"""Pure-Python kernel: per-set classification of subsets of Z_p^2 packed in
integer masks (bit c = cell c, row-major, x_1 least significant).

This is the reference for the compiled ``_ckernel`` and the fallback when the
extension is not built.  Both expose:

``classify(p, mask, audit=False) -> (spectral, tiles, graph, closure_ok)``
    ``graph`` means a graph of a function on all of Z_p (|E| = p with a
    missing direction); ``closure_ok`` compares the zero set built from one
    frequency per direction with the frequency-by-frequency test (audit only).

``run_block(p, mode, k, start, stop, seed=0, audit=False, prune=True, collect=False, first_mask=None)``
    mode 0: masks ``start..stop-1`` of all subsets; mode 1: colex ranks of the
    k-subsets (``first_mask`` is the mask of rank ``start``); mode 2: sample
    indices of the splitmix64 counter stream, restricted to sizes outside
    {1} ∪ pZ when ``audit`` is set.  With ``prune`` the sizes outside
    {1, p, p^2} are counted but not searched.

``sample(p, seed, i, restrict=False)`` and ``zero_set_mask(p, mask)``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

M64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
STREAM = 0xD1B54A32D192ED03


class _Tables:
    def __init__(self, p: int) -> None:
        n = p * p
        self.p = p
        self.n = n
        self.full = (1 << n) - 1
        self.cx = [c % p for c in range(n)]
        self.cy = [c // p for c in range(n)]
        cx, cy = self.cx, self.cy
        self.sub = [
            [(cx[c] - cx[e]) % p + p * ((cy[c] - cy[e]) % p) for e in range(n)] for c in range(n)
        ]
        reps = [(0, 1)] + [(1, j) for j in range(p)]
        self.ndir = p + 1
        self.H = []
        self.dirline = []
        self.class_of = [0] * n
        for j, (r1, r2) in enumerate(reps):
            levels = [0] * p
            for c in range(n):
                levels[(cx[c] * r1 + cy[c] * r2) % p] |= 1 << c
            self.H.append(levels)
            line = 0
            for r in range(1, p):
                c = (r * r1) % p + p * ((r * r2) % p)
                line |= 1 << c
                self.class_of[c] = j
            self.dirline.append(line)
        self.Hm = [None] * n
        for c in range(1, n):
            levels = [0] * p
            for x in range(n):
                levels[(cx[x] * cx[c] + cy[x] * cy[c]) % p] |= 1 << x
            self.Hm[c] = levels
        self.lowcols = [sum(1 << c for c in range(n) if cx[c] < p - a) for a in range(p)]
        self.highcols = [sum(1 << c for c in range(n) if cx[c] >= p - a) for a in range(p)]

    def translate(self, mask: int, a: int, b: int) -> int:
        p = self.p
        if a:
            mask = ((mask & self.lowcols[a]) << a) | ((mask & self.highcols[a]) >> (p - a))
        if b:
            s = p * b
            mask = ((mask << s) | (mask >> (self.n - s))) & self.full
        return mask

    def zero_cells(self, E: int, k: int) -> int:
        p = self.p
        if k % p:
            return 0
        share = k // p
        Z = 0
        for j in range(self.ndir):
            if all((E & level).bit_count() == share for level in self.H[j]):
                Z |= self.dirline[j]
        return Z

    def zero_cells_direct(self, E: int, k: int) -> int:
        p = self.p
        if k % p:
            return 0
        share = k // p
        Z = 0
        for c in range(1, self.n):
            if all((E & level).bit_count() == share for level in self.Hm[c]):
                Z |= 1 << c
        return Z

    def spectral(self, E: int, k: int, Z: int) -> bool:
        if k == 1:
            return True
        if Z.bit_count() < k - 1:
            return False
        adj = {}
        rest = Z
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            adj[v] = self.translate(Z, self.cx[v], self.cy[v]) & Z & ~low
        return _clique(Z, adj, k - 1)

    def tiles(self, E: int, k: int) -> bool:
        n = self.n
        if n % k:
            return False
        elems = _bits(E)
        tr = [self.translate(E, self.cx[t], self.cy[t]) for t in range(n)]
        sub = self.sub
        full = self.full

        def cover(covered: int) -> bool:
            if covered == full:
                return True
            free = ~covered & full
            row = sub[(free & -free).bit_length() - 1]
            for e in elems:
                piece = tr[row[e]]
                if piece & covered:
                    continue
                if cover(covered | piece):
                    return True
            return False

        return cover(0)

    def full_graph(self, E: int, k: int) -> bool:
        if k != self.p:
            return False
        elems = _bits(E)
        all_dirs = (1 << self.ndir) - 1
        seen = 0
        for i in range(k):
            for j in range(i + 1, k):
                seen |= 1 << self.class_of[self.sub[elems[j]][elems[i]]]
                if seen == all_dirs:
                    return False
        return True


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _color_bound(cand: int, adj: dict[int, int]) -> int:
    colors = 0
    while cand:
        colors += 1
        q = cand
        while q:
            low = q & -q
            v = low.bit_length() - 1
            cand &= ~low
            q &= ~low & ~adj[v]
    return colors


def _clique(cand: int, adj: dict[int, int], need: int) -> bool:
    if need == 0:
        return True
    if cand.bit_count() < need or _color_bound(cand, adj) < need:
        return False
    while cand:
        if cand.bit_count() < need:
            return False
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        if _clique(cand & adj[v], adj, need - 1):
            return True
    return False


@lru_cache(maxsize=16)
def _tables(p: int) -> _Tables:
    if p * p > 64:
        raise ValueError(f"kernel masks hold at most 64 cells; p = {p} is too large")
    return _Tables(p)


def _splitmix_next(state: int) -> tuple[int, int]:
    state = (state + GOLDEN) & M64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return z ^ (z >> 31), state


def _sample_mask(T: _Tables, seed: int, i: int, restrict: bool) -> int:
    state = (seed + (i + 1) * STREAM) & M64
    while True:
        z, state = _splitmix_next(state)
        mask = z & T.full
        if not mask:
            continue
        k = mask.bit_count()
        if restrict and (k == 1 or k % T.p == 0):
            continue
        return mask


def sample(p: int, seed: int, i: int, restrict: bool = False) -> int:
    return _sample_mask(_tables(p), seed, i, restrict)


def classify(p: int, mask: int, audit: bool = False) -> tuple[bool, bool, bool, bool]:
    T = _tables(p)
    k = mask.bit_count()
    Z = T.zero_cells(mask, k)
    closure_ok = True
    if audit:
        closure_ok = T.zero_cells_direct(mask, k) == Z
    return T.spectral(mask, k, Z), T.tiles(mask, k), T.full_graph(mask, k), closure_ok


def zero_set_mask(p: int, mask: int) -> int:
    T = _tables(p)
    return T.zero_cells(mask, mask.bit_count())


def run_block(
    p: int,
    mode: int,
    k: int,
    start: int,
    stop: int,
    seed: int = 0,
    audit: bool = False,
    prune: bool = True,
    collect: bool = False,
    first_mask: int | None = None,
) -> dict:
    T = _tables(p)
    n = T.n
    tallies = [[0] * 5 for _ in range(n + 1)]
    violations, divisibility, density, closure, spectral_masks = [], [], [], [], []
    mask = first_mask if mode == 1 else 0
    for r in range(start, stop):
        if mode == 0:
            mask = r
        elif mode == 1:
            if r != start:
                low = mask & -mask
                ripple = mask + low
                mask = ripple | (((mask ^ ripple) >> 2) // low)
        else:
            mask = _sample_mask(T, seed, r, audit)
        size = mask.bit_count()
        row = tallies[size]
        row[0] += 1
        if prune and not (size == 1 or size == p or size == n):
            row[4] += 1
            continue
        Z = T.zero_cells(mask, size)
        closure_ok = True
        if audit:
            closure_ok = T.zero_cells_direct(mask, size) == Z
        s = T.spectral(mask, size, Z)
        t = T.tiles(mask, size)
        g = T.full_graph(mask, size)
        structural = size == 1 or size == n or g
        row[1] += s
        row[2] += t
        row[3] += g
        if s == t == structural:
            row[4] += 1
        else:
            violations.append((mask, s, t, g))
        if s and collect:
            spectral_masks.append(mask)
        if audit:
            if s and size != 1 and size % p:
                divisibility.append(mask)
            if s and size > p and mask != T.full:
                density.append(mask)
            if not closure_ok:
                closure.append(mask)
    return {
        "tallies": tallies,
        "violations": violations,
        "divisibility": divisibility,
        "density": density,
        "closure": closure,
        "spectral_masks": np.asarray(spectral_masks, dtype=np.uint64),
    }
