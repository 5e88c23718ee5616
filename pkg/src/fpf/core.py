"""Arithmetic in Z_p, vectors and point sets in Z_p^d, subset enumeration
and affine canonical forms.

Cells are indexed row-major with the first coordinate least significant:
``(x_1, ..., x_d) -> x_1 + x_2 p + ... + x_d p^(d-1)``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from fpf.errors import (
    DimensionMismatchError,
    IncompleteFunctionError,
    RankRangeError,
    UnsupportedDimensionError,
)

MAX_PRIME = 251
MAX_DIM = 8


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not 2 <= self.p <= MAX_PRIME or not is_prime(self.p):
            raise ValueError(f"modulus must be a prime in [2, {MAX_PRIME}], got {self.p!r}")

    def inverse(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(a, -1, self.p)

    def units(self) -> range:
        return range(1, self.p)


@dataclass(frozen=True)
class Ambient:
    """The space Z_p^d."""

    p: int
    d: int

    def __post_init__(self) -> None:
        PrimeModulus(self.p)
        if not isinstance(self.d, int) or not 1 <= self.d <= MAX_DIM:
            raise ValueError(f"dimension must be in [1, {MAX_DIM}], got {self.d!r}")
        if self.p**self.d >= 2**64:
            raise ValueError(f"p^d = {self.p}^{self.d} does not fit in 64 bits")

    @property
    def modulus(self) -> PrimeModulus:
        return PrimeModulus(self.p)

    @property
    def cells(self) -> int:
        return self.p**self.d

    def vector(self, coords: Iterable[int]) -> Vector:
        return Vector(self, tuple(coords))

    def zero(self) -> Vector:
        return Vector(self, (0,) * self.d)

    def vector_at(self, index: int) -> Vector:
        if not 0 <= index < self.cells:
            raise IndexError(f"cell {index} outside Z_{self.p}^{self.d}")
        coords = []
        for _ in range(self.d):
            index, r = divmod(index, self.p)
            coords.append(r)
        return Vector(self, tuple(coords))

    def vectors(self) -> Iterator[Vector]:
        for i in range(self.cells):
            yield self.vector_at(i)

    def nonzero_vectors(self) -> Iterator[Vector]:
        for i in range(1, self.cells):
            yield self.vector_at(i)


@dataclass(frozen=True)
class Vector:
    ambient: Ambient
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.ambient.d:
            raise DimensionMismatchError(
                f"expected {self.ambient.d} coordinates, got {len(self.coords)}"
            )
        if any(not 0 <= c < self.ambient.p for c in self.coords):
            raise ValueError(f"coordinates {self.coords} not reduced mod {self.ambient.p}")

    @property
    def index(self) -> int:
        p = self.ambient.p
        return sum(c * p**i for i, c in enumerate(self.coords))

    def _check(self, other: Vector) -> None:
        if self.ambient != other.ambient:
            raise DimensionMismatchError(f"{self.ambient} vs {other.ambient}")

    def __add__(self, other: Vector) -> Vector:
        self._check(other)
        p = self.ambient.p
        return Vector(self.ambient, tuple((a + b) % p for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: Vector) -> Vector:
        self._check(other)
        p = self.ambient.p
        return Vector(self.ambient, tuple((a - b) % p for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> Vector:
        p = self.ambient.p
        return Vector(self.ambient, tuple(-a % p for a in self.coords))

    def scale(self, r: int) -> Vector:
        p = self.ambient.p
        return Vector(self.ambient, tuple(r * a % p for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


def dot(u: Vector, v: Vector) -> int:
    """Standard bilinear form ``sum u_i v_i mod p``."""
    if u.ambient != v.ambient:
        raise DimensionMismatchError(f"{u.ambient} vs {v.ambient}")
    return sum(a * b for a, b in zip(u.coords, v.coords)) % u.ambient.p


@dataclass(frozen=True)
class PointSet:
    """A subset of Z_p^d, stored as its sorted cell indices.

    ``mask`` is the membership bit vector as a Python int (bit i = cell i).
    """

    ambient: Ambient
    cells: tuple[int, ...]

    def __post_init__(self) -> None:
        cells = tuple(sorted(set(self.cells)))
        if cells and not (0 <= cells[0] and cells[-1] < self.ambient.cells):
            raise ValueError("cell index outside the ambient space")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_vectors(cls, ambient: Ambient, vectors: Iterable[Vector | Sequence[int]]) -> PointSet:
        cells = []
        for v in vectors:
            if not isinstance(v, Vector):
                v = ambient.vector(v)
            elif v.ambient != ambient:
                raise DimensionMismatchError(f"{v.ambient} vs {ambient}")
            cells.append(v.index)
        return cls(ambient, tuple(cells))

    @classmethod
    def from_mask(cls, ambient: Ambient, mask: int) -> PointSet:
        cells = []
        while mask:
            low = mask & -mask
            cells.append(low.bit_length() - 1)
            mask ^= low
        return cls(ambient, tuple(cells))

    @classmethod
    def full(cls, ambient: Ambient) -> PointSet:
        return cls(ambient, tuple(range(ambient.cells)))

    @classmethod
    def empty(cls, ambient: Ambient) -> PointSet:
        return cls(ambient, ())

    @cached_property
    def mask(self) -> int:
        m = 0
        for c in self.cells:
            m |= 1 << c
        return m

    @property
    def size(self) -> int:
        return len(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[Vector]:
        return (self.ambient.vector_at(c) for c in self.cells)

    def vectors(self) -> list[Vector]:
        return list(self)

    def __contains__(self, item: Vector | int) -> bool:
        if isinstance(item, Vector):
            if item.ambient != self.ambient:
                return False
            item = item.index
        return bool(self.mask >> item & 1)

    def translate(self, v: Vector) -> PointSet:
        return PointSet.from_vectors(self.ambient, (x + v for x in self))

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self) + "}"


def _det_mod(matrix: Sequence[Sequence[int]], p: int) -> int:
    a = [list(row) for row in matrix]
    n = len(a)
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] % p), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], -1, p)
        for r in range(col + 1, n):
            f = a[r][col] * inv % p
            if f:
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
    return det % p


def solve_mod(matrix: Sequence[Sequence[int]], rhs: Sequence[int], p: int) -> tuple[int, ...]:
    """Solve ``matrix @ x = rhs`` over Z_p for an invertible square matrix."""
    n = len(matrix)
    a = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] % p), None)
        if pivot is None:
            raise ValueError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv = pow(a[col][col], -1, p)
        a[col] = [x * inv % p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[col])]
    return tuple(a[r][n] for r in range(n))


@dataclass(frozen=True)
class AffineMap:
    """x -> Mx + t with M invertible mod p."""

    ambient: Ambient
    matrix: tuple[tuple[int, ...], ...]
    translation: Vector = field(default=None)  # type: ignore[assignment]
    """Translation part; a coordinate sequence is accepted and converted."""

    def __post_init__(self) -> None:
        d, p = self.ambient.d, self.ambient.p
        matrix = tuple(tuple(x % p for x in row) for row in self.matrix)
        if len(matrix) != d or any(len(row) != d for row in matrix):
            raise DimensionMismatchError(f"matrix must be {d}x{d}")
        if _det_mod(matrix, p) == 0:
            raise ValueError("matrix is singular mod p")
        object.__setattr__(self, "matrix", matrix)
        if self.translation is None:
            object.__setattr__(self, "translation", self.ambient.zero())
        elif not isinstance(self.translation, Vector):
            object.__setattr__(self, "translation", self.ambient.vector(self.translation))
        elif self.translation.ambient != self.ambient:
            raise DimensionMismatchError("translation lives in another ambient")

    @classmethod
    def random(cls, ambient: Ambient, rng: random.Random) -> AffineMap:
        p, d = ambient.p, ambient.d
        while True:
            m = tuple(tuple(rng.randrange(p) for _ in range(d)) for _ in range(d))
            if _det_mod(m, p):
                break
        t = ambient.vector(rng.randrange(p) for _ in range(d))
        return cls(ambient, m, t)

    @property
    def linear(self) -> AffineMap:
        return AffineMap(self.ambient, self.matrix)

    def __call__(self, v: Vector) -> Vector:
        p = self.ambient.p
        coords = tuple(
            (sum(m * x for m, x in zip(row, v.coords)) + t) % p
            for row, t in zip(self.matrix, self.translation.coords)
        )
        return Vector(self.ambient, coords)

    def apply_set(self, E: PointSet) -> PointSet:
        return PointSet.from_vectors(self.ambient, (self(v) for v in E))

    def dual(self) -> AffineMap:
        """Linear map (M^T)^{-1}, the induced action on frequencies."""
        p, d = self.ambient.p, self.ambient.d
        transposed = [[self.matrix[j][i] for j in range(d)] for i in range(d)]
        cols = [solve_mod(transposed, [int(i == k) for i in range(d)], p) for k in range(d)]
        inverse = tuple(tuple(cols[k][i] for k in range(d)) for i in range(d))
        return AffineMap(self.ambient, inverse)


def sqrt_minus_one(p: int) -> int | None:
    """Smallest i in [1, p) with i^2 = -1 mod p, or None when p = 3 mod 4."""
    PrimeModulus(p)
    if p == 2:
        return 1
    if p % 4 == 3:
        return None
    for i in range(1, p):
        if i * i % p == p - 1:
            return i
    raise AssertionError("unreachable for p = 1 mod 4")


def interpolate(values: Mapping[int, int] | Sequence[int], p: int) -> tuple[int, ...]:
    """Coefficients c_0..c_{p-1} of the unique polynomial of degree < p
    agreeing with ``values`` on Z_p (Lagrange form, reduced mod p)."""
    PrimeModulus(p)
    table = dict(enumerate(values)) if not isinstance(values, Mapping) else dict(values)
    missing = [k for k in range(p) if k not in table]
    if missing or len(table) != p:
        raise IncompleteFunctionError(f"function undefined at {missing or 'extra keys'}")
    coeffs = [0] * p
    for k in range(p):
        fk = table[k] % p
        if not fk:
            continue
        # numerator prod_{j != k} (x - j), built as a coefficient list
        num = [1]
        denom = 1
        for j in range(p):
            if j == k:
                continue
            num = [((num[i - 1] if i else 0) - j * (num[i] if i < len(num) else 0)) % p
                   for i in range(len(num) + 1)]
            denom = denom * (k - j) % p
        scale = fk * pow(denom, -1, p) % p
        for i, c in enumerate(num):
            coeffs[i] = (coeffs[i] + scale * c) % p
    return tuple(coeffs)


def evaluate_polynomial(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def direction_representatives(ambient: Ambient) -> list[Vector]:
    """One vector per direction class, first nonzero coordinate equal to 1,
    in lexicographic order of the coordinate tuples."""
    p, d = ambient.p, ambient.d
    reps = []
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            reps.append(Vector(ambient, (0,) * lead + (1,) + tail))
    return sorted(reps, key=lambda v: v.coords)


def normalize_direction(v: Vector) -> Vector:
    """Scale a nonzero vector so its first nonzero coordinate is 1."""
    lead = next((c for c in v.coords if c), None)
    if lead is None:
        raise ValueError("the zero vector has no direction")
    return v.scale(pow(lead, -1, v.ambient.p))


# -- subset enumeration -------------------------------------------------------


def count_subsets(ambient: Ambient, size: int | None = None) -> int:
    n = ambient.cells
    return 2**n if size is None else math.comb(n, size)


def unrank_combination(rank: int, k: int, n: int) -> int:
    """Colex unranking: the k-subset of range(n) with the given rank, as a mask."""
    if not 0 <= rank < math.comb(n, k):
        raise RankRangeError(f"rank {rank} outside C({n},{k})")
    mask = 0
    for i in range(k, 0, -1):
        c = i - 1
        while math.comb(c + 1, i) <= rank:
            c += 1
        rank -= math.comb(c, i)
        mask |= 1 << c
    return mask


def rank_combination(mask: int) -> int:
    rank = 0
    i = 0
    while mask:
        low = mask & -mask
        i += 1
        rank += math.comb(low.bit_length() - 1, i)
        mask ^= low
    return rank


def next_combination(mask: int) -> int:
    """Next mask with the same popcount in increasing integer (= colex) order."""
    low = mask & -mask
    ripple = mask + low
    return ripple | (((mask ^ ripple) >> 2) // low)


def enumerate_subsets(
    ambient: Ambient,
    size: int | None = None,
    start: int = 0,
    stop: int | None = None,
) -> Iterator[PointSet]:
    """Stream subsets in colex order, ranks ``start <= r < stop``.

    With ``size=None`` every subset is produced and the rank is the membership
    mask itself; otherwise only ``size``-element subsets.
    """
    total = count_subsets(ambient, size)
    if stop is None:
        stop = total
    if not 0 <= start <= stop <= total:
        raise RankRangeError(f"range [{start}, {stop}) outside family of {total}")
    if size is None:
        for mask in range(start, stop):
            yield PointSet.from_mask(ambient, mask)
        return
    if start == stop:
        return
    mask = unrank_combination(start, size, ambient.cells)
    for r in range(start, stop):
        yield PointSet.from_mask(ambient, mask)
        if size == 0 or r + 1 == stop:
            break
        mask = next_combination(mask)


# -- affine canonical form (d = 2) ---------------------------------------------


@lru_cache(maxsize=None)
def affine_permutations(p: int) -> np.ndarray:
    """Cell permutations of every element of AGL(2, p), shape (|AGL|, p^2)."""
    n = p * p
    xs = np.arange(n) % p
    ys = np.arange(n) // p
    perms = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 0:
            continue
        nx = (a * xs + b * ys) % p
        ny = (c * xs + d * ys) % p
        for tx in range(p):
            for ty in range(p):
                perms.append(((nx + tx) % p) + p * ((ny + ty) % p))
    return np.asarray(perms, dtype=np.int64)


def orbit_masks(p: int, cells: Sequence[int]) -> np.ndarray:
    """Masks of every affine image of the set (with repetition); requires p^2 <= 64."""
    perms = affine_permutations(p)
    if not cells:
        return np.zeros(len(perms), dtype=np.uint64)
    images = perms[:, list(cells)].astype(np.uint64)
    return np.bitwise_or.reduce(np.left_shift(np.uint64(1), images), axis=1)


def canonicalize(E: PointSet) -> PointSet:
    """Least-mask representative of the orbit of E under AGL(2, p).

    "Least" compares membership masks as integers with cell i weighted 2^i,
    so the canonical single point is the origin.
    """
    ambient = E.ambient
    if ambient.d != 2:
        raise UnsupportedDimensionError("canonicalize is defined for d = 2")
    if not E.cells:
        return E
    p = ambient.p
    if p * p <= 64:
        return PointSet.from_mask(ambient, int(orbit_masks(p, E.cells).min()))
    best = None
    perms = _affine_permutation_rows(p)
    for perm in perms:
        m = 0
        for c in E.cells:
            m |= 1 << perm[c]
        if best is None or m < best:
            best = m
    return PointSet.from_mask(ambient, best)


def _affine_permutation_rows(p: int) -> Iterator[list[int]]:
    n = p * p
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 0:
            continue
        for tx in range(p):
            for ty in range(p):
                yield [
                    (a * (i % p) + b * (i // p) + tx) % p + p * ((c * (i % p) + d * (i // p) + ty) % p)
                    for i in range(n)
                ]
