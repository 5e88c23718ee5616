"""Exact Fourier analysis of indicator functions on Z_p^d.

Coefficients are kept unnormalized: for a set E and frequency m,

    E^(m) = sum_{x in E} chi(-x.m) = sum_t n(t) xi^t,   xi = chi(-1) = exp(-2 pi i / p),

where n(t) = |{x in E : x.m = t}|.  The conventional 1/p^d factor never
changes whether a coefficient vanishes, so it is applied only by the numeric
checks that need it.  Values live in Z[xi] and are reduced modulo
1 + u + ... + u^(p-1), so a value is zero iff all raw coordinates coincide.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from fpf.core import Ambient, PointSet, Vector, direction_representatives, dot
from fpf.errors import DimensionMismatchError, TheoremViolation, ZeroFrequencyError

_INT64 = 2**63


@dataclass(frozen=True)
class CyclotomicValue:
    """Element sum_t coeffs[t] xi^t of Z[xi], in canonical form (coeffs[p-1] == 0)."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.p:
            raise ValueError(f"need {self.p} coordinates, got {len(self.coeffs)}")
        top = self.coeffs[-1]
        if top:
            object.__setattr__(self, "coeffs", tuple(c - top for c in self.coeffs))
        if __debug__:
            assert all(-_INT64 <= c < _INT64 for c in self.coeffs), "64-bit coefficient overflow"

    @classmethod
    def from_raw(cls, p: int, raw: Sequence[int]) -> CyclotomicValue:
        return cls(p, tuple(raw))

    @classmethod
    def constant(cls, p: int, c: int) -> CyclotomicValue:
        return cls(p, (c,) + (0,) * (p - 1))

    @classmethod
    def zero(cls, p: int) -> CyclotomicValue:
        return cls(p, (0,) * p)

    @classmethod
    def root(cls, p: int, k: int = 1) -> CyclotomicValue:
        """xi^k."""
        raw = [0] * p
        raw[k % p] = 1
        return cls(p, tuple(raw))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: CyclotomicValue) -> None:
        if self.p != other.p:
            raise DimensionMismatchError(f"Z[xi_{self.p}] vs Z[xi_{other.p}]")

    def __add__(self, other: CyclotomicValue) -> CyclotomicValue:
        self._check(other)
        return CyclotomicValue(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: CyclotomicValue) -> CyclotomicValue:
        self._check(other)
        return CyclotomicValue(self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> CyclotomicValue:
        return CyclotomicValue(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other: CyclotomicValue | int) -> CyclotomicValue:
        if isinstance(other, int):
            return CyclotomicValue(self.p, tuple(other * a for a in self.coeffs))
        self._check(other)
        p = self.p
        # product in Z[u]/(u^p - 1), which maps onto Z[u]/Q(u)
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[(i + j) % p] += a * b
        return CyclotomicValue(p, tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> CyclotomicValue:
        """Multiply by xi^k."""
        p = self.p
        k %= p
        return CyclotomicValue(p, tuple(self.coeffs[(t - k) % p] for t in range(p)))


def evaluate_complex(v: CyclotomicValue) -> complex:
    """Double-precision value of v with xi = exp(-2 pi i / p)."""
    p = v.p
    return sum((c * cmath.exp(-2j * math.pi * t / p) for t, c in enumerate(v.coeffs) if c), 0j)


@dataclass(frozen=True)
class HyperplaneProfile:
    """Counts n(t) = |E ∩ {x : x.m = t}| for t in Z_p."""

    m: Vector
    counts: tuple[int, ...]

    def is_equidistributed(self) -> bool:
        return len(set(self.counts)) == 1

    @property
    def total(self) -> int:
        return sum(self.counts)


def _require_same(E: PointSet, v: Vector) -> None:
    if E.ambient != v.ambient:
        raise DimensionMismatchError(f"{E.ambient} vs {v.ambient}")


def hyperplane_profile(E: PointSet, m: Vector) -> HyperplaneProfile:
    _require_same(E, m)
    if m.is_zero():
        raise ZeroFrequencyError("hyperplane profile is undefined at m = 0")
    counts = [0] * E.ambient.p
    for x in E:
        counts[dot(x, m)] += 1
    return HyperplaneProfile(m, tuple(counts))


def fourier_coefficient(E: PointSet, m: Vector) -> CyclotomicValue:
    _require_same(E, m)
    p = E.ambient.p
    if m.is_zero():
        return CyclotomicValue.constant(p, E.size)
    return CyclotomicValue.from_raw(p, hyperplane_profile(E, m).counts)


def is_zero_coefficient(E: PointSet, m: Vector) -> bool:
    return hyperplane_profile(E, m).is_equidistributed()


@dataclass(frozen=True)
class ZeroSet:
    """Nonzero frequencies at which the transform of E vanishes."""

    ambient: Ambient
    cells: frozenset[int]

    def __contains__(self, m: Vector | int) -> bool:
        if isinstance(m, Vector):
            m = m.index
        return m in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def vectors(self) -> list[Vector]:
        return [self.ambient.vector_at(c) for c in sorted(self.cells)]

    def directions(self) -> list[Vector]:
        reps = direction_representatives(self.ambient)
        return [r for r in reps if r.index in self.cells]

    @property
    def mask(self) -> int:
        m = 0
        for c in self.cells:
            m |= 1 << c
        return m


def zero_set(E: PointSet, audit: bool = False) -> ZeroSet:
    """All nonzero m with E^(m) = 0.

    One representative per direction class is tested and the result expanded
    by scaling.  The expansion is then checked for closure under Z_p^*; with
    ``audit=True`` every nonzero m is also tested individually.
    """
    ambient = E.ambient
    p = ambient.p
    cells: set[int] = set()
    for rep in direction_representatives(ambient):
        if is_zero_coefficient(E, rep):
            cells.update(rep.scale(r).index for r in range(1, p))
    for c in cells:
        m = ambient.vector_at(c)
        if any(m.scale(r).index not in cells for r in range(2, p)):
            raise TheoremViolation(f"zero set of {E} not closed under scaling at {m}")
    if audit:
        direct = {m.index for m in ambient.nonzero_vectors() if is_zero_coefficient(E, m)}
        if direct != cells:
            raise TheoremViolation(f"scaled zero set of {E} disagrees with the per-element test")
    return ZeroSet(ambient, frozenset(cells))


def transform_table(values: Sequence[int], ambient: Ambient, m: Vector) -> CyclotomicValue:
    """Unnormalized transform sum_x values[x] xi^(x.m) of an integer table."""
    if len(values) != ambient.cells:
        raise DimensionMismatchError(f"table has {len(values)} entries, expected {ambient.cells}")
    raw = [0] * ambient.p
    for idx, val in enumerate(values):
        if val:
            raw[dot(ambient.vector_at(idx), m)] += val
    return CyclotomicValue.from_raw(ambient.p, raw)


def convolve_indicator(E: PointSet, T: PointSet) -> list[int]:
    """out[x] = sum_tau E(x - tau) T(tau), indexed by cell."""
    if E.ambient != T.ambient:
        raise DimensionMismatchError(f"{E.ambient} vs {T.ambient}")
    out = [0] * E.ambient.cells
    tvecs = T.vectors()
    for e in E:
        for tau in tvecs:
            out[(e + tau).index] += 1
    return out


def inversion_check(E: PointSet) -> bool:
    """Exact check of p^d E(x) = sum_m chi(x.m) E^(m) for every x."""
    ambient = E.ambient
    p = ambient.p
    freqs = list(ambient.vectors())
    raws = []
    for m in freqs:
        if m.is_zero():
            raw = [E.size] + [0] * (p - 1)
        else:
            raw = list(hyperplane_profile(E, m).counts)
        raws.append(raw)
    for x in ambient.vectors():
        acc = [0] * p
        for m, raw in zip(freqs, raws):
            # chi(x.m) = xi^(-x.m)
            k = -dot(x, m) % p
            for t, c in enumerate(raw):
                if c:
                    acc[(t + k) % p] += c
        lhs = CyclotomicValue.constant(p, ambient.cells * (1 if x in E else 0))
        if CyclotomicValue.from_raw(p, acc) != lhs:
            return False
    return True
