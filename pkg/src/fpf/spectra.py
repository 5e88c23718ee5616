"""Spectral sets: orthogonality, spectrum search, and the numeric checks on
expansion coefficients (reconstruction, delta identity, Parseval).

A spectrum A of E is a set of frequencies with |A| = |E| whose pairwise
differences all lie in the zero set of E.  Since only differences matter,
every spectrum can be translated to contain 0, and the search looks for a
clique through 0 in the graph on {0} ∪ Z(E) with edges u ~ v iff u - v ∈ Z(E).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

from fpf.core import PointSet, Vector, dot, normalize_direction
from fpf.errors import DimensionMismatchError, EmptySetError, InvalidPairError
from fpf.fourier import ZeroSet, is_zero_coefficient, zero_set

Function = Union[Callable[[Vector], complex], Sequence[complex], Mapping[int, complex]]

TOLERANCE = 1e-9


@dataclass(frozen=True)
class SpectralPair:
    E: PointSet
    A: PointSet
    witness: tuple[Vector, ...]
    """Direction classes of the differences of A, each checked to be a zero of E^."""


def _same_ambient(E: PointSet, A: PointSet) -> None:
    if E.ambient != A.ambient:
        raise DimensionMismatchError(f"{E.ambient} vs {A.ambient}")


def _difference_classes(A: PointSet) -> set[Vector]:
    vecs = A.vectors()
    out = set()
    for i, a in enumerate(vecs):
        for b in vecs[i + 1 :]:
            out.add(normalize_direction(a - b))
    return out


def is_orthogonal_spectrum(E: PointSet, A: PointSet) -> bool:
    """Every nonzero difference of A is a zero of the transform of E."""
    _same_ambient(E, A)
    if not A.cells:
        raise ValueError("A must be nonempty")
    vecs = A.vectors()
    checked: set[int] = set()
    for i, a in enumerate(vecs):
        for b in vecs[i + 1 :]:
            m = a - b
            if m.index in checked:
                continue
            # E^(-m) is the conjugate of E^(m), so one sign per pair suffices
            if not is_zero_coefficient(E, m):
                return False
            checked.add(m.index)
    return True


def is_spectral_pair(E: PointSet, A: PointSet) -> bool:
    return E.size == A.size and is_orthogonal_spectrum(E, A)


def spectral_pair(E: PointSet, A: PointSet) -> SpectralPair:
    """Validated certificate object; raises InvalidPairError if (E, A) fails."""
    if not is_spectral_pair(E, A):
        raise InvalidPairError(f"({E}, {A}) is not a spectral pair")
    witness = tuple(sorted(_difference_classes(A), key=lambda v: v.coords))
    return SpectralPair(E, A, witness)


def _color_bound(cand: int, adj: Mapping[int, int]) -> int:
    """Number of colours in a greedy colouring of the candidate set."""
    colors = 0
    rest = cand
    while rest:
        colors += 1
        q = rest
        while q:
            low = q & -q
            v = low.bit_length() - 1
            rest &= ~low
            q &= ~low & ~adj[v]
    return colors


def _find_clique(cand: int, adj: Mapping[int, int], need: int) -> list[int] | None:
    """First clique of ``need`` vertices from ``cand`` in ascending vertex order."""
    if need == 0:
        return []
    if cand.bit_count() < need or _color_bound(cand, adj) < need:
        return None
    while cand:
        if cand.bit_count() < need:
            return None
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        found = _find_clique(cand & adj[v], adj, need - 1)
        if found is not None:
            return [v] + found
    return None


def clique_graph(Z: ZeroSet) -> dict[int, int]:
    """Adjacency masks on the cells of Z: u ~ v iff u - v ∈ Z."""
    ambient = Z.ambient
    zvecs = Z.vectors()
    adj = {}
    for c in Z.cells:
        u = ambient.vector_at(c)
        m = 0
        for z in zvecs:
            w = (u + z).index
            if w in Z.cells and w != c:
                m |= 1 << w
        adj[c] = m
    return adj


def find_spectrum(E: PointSet) -> PointSet | None:
    """A spectrum of E containing 0, or None if E is not spectral."""
    if not E.cells:
        raise EmptySetError("the empty set is excluded from spectral decisions")
    ambient = E.ambient
    if E.size == 1:
        return PointSet(ambient, (0,))
    Z = zero_set(E)
    if len(Z) < E.size - 1:
        return None
    adj = clique_graph(Z)
    found = _find_clique(Z.mask, adj, E.size - 1)
    if found is None:
        return None
    A = PointSet(ambient, (0, *found))
    assert is_spectral_pair(E, A)
    return A


def clique_bound(E: PointSet) -> int:
    """Upper bound on the size of any orthogonal frequency set of E
    (1 + greedy colour count of the zero-set graph)."""
    Z = zero_set(E)
    if not Z.cells:
        return 1
    return 1 + _color_bound(Z.mask, clique_graph(Z))


def is_spectral(E: PointSet) -> bool:
    return find_spectrum(E) is not None


# -- numeric coefficient checks -------------------------------------------------


def _chi(u: int, p: int) -> complex:
    return cmath.exp(2j * math.pi * u / p)


def _lookup(f: Function, x: Vector) -> complex:
    if callable(f):
        return complex(f(x))
    return complex(f[x.index])


@dataclass(frozen=True)
class SpectralCoefficients:
    values: dict[int, complex]
    """Map from frequency cell a ∈ A to c_a(f)."""

    def __getitem__(self, a: Vector | int) -> complex:
        if isinstance(a, Vector):
            a = a.index
        return self.values[a]


def coefficients(E: PointSet, A: PointSet, f: Function) -> SpectralCoefficients:
    """c_a(f) = |E|^-1 sum_{x in E} chi(-x.a) f(x)."""
    if not is_spectral_pair(E, A):
        raise InvalidPairError(f"({E}, {A}) is not a spectral pair")
    p = E.ambient.p
    fx = [(x, _lookup(f, x)) for x in E]
    values = {}
    for a in A:
        values[a.index] = sum(_chi(-dot(x, a), p) * v for x, v in fx) / E.size
    return SpectralCoefficients(values)


def reconstruct_error(E: PointSet, A: PointSet, f: Function) -> float:
    """max over x in E of |f(x) - sum_a c_a chi(x.a)|; points outside E are not compared."""
    c = coefficients(E, A, f)
    p = E.ambient.p
    avecs = A.vectors()
    worst = 0.0
    for x in E:
        approx = sum(c[a] * _chi(dot(x, a), p) for a in avecs)
        worst = max(worst, abs(_lookup(f, x) - approx))
    return worst


def reconstruct_check(E: PointSet, A: PointSet, f: Function) -> bool:
    return reconstruct_error(E, A, f) < TOLERANCE


def delta_check(E: PointSet, A: PointSet) -> bool:
    """delta_0(x) = |E|^-1 sum_a chi(x.a) on E, for 0 ∈ E."""
    if 0 not in E:
        raise ValueError("the delta identity needs 0 in E")
    p = E.ambient.p
    avecs = A.vectors()
    for x in E:
        rhs = sum(_chi(dot(x, a), p) for a in avecs) / E.size
        if abs(rhs - (1.0 if x.is_zero() else 0.0)) >= TOLERANCE:
            return False
    return True


def parseval_sides(E: PointSet, A: PointSet, f: Function) -> tuple[float, float]:
    c = coefficients(E, A, f)
    left = sum(abs(v) ** 2 for v in c.values.values())
    right = sum(abs(_lookup(f, x)) ** 2 for x in E) / E.size
    return left, right


def parseval_check(E: PointSet, A: PointSet, f: Function) -> bool:
    left, right = parseval_sides(E, A, f)
    return abs(left - right) <= TOLERANCE * max(abs(left), abs(right), 1e-300) or left == right
