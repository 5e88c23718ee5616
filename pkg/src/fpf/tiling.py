"""Translational tilings of Z_p^d and the structural constructions in Z_p^2.

(E, T) is a tiling pair when every point is uniquely e + tau, i.e. the
indicator convolution E * T is identically 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from fpf.core import PointSet, Vector, dot
from fpf.directions import GraphPresentation, graph_presentation
from fpf.errors import (
    DimensionMismatchError,
    EmptySetError,
    PreconditionError,
    TheoremViolation,
    UnsupportedDimensionError,
)
from fpf.fourier import convolve_indicator, is_zero_coefficient


@dataclass(frozen=True)
class TilingPair:
    E: PointSet
    T: PointSet

    def __post_init__(self) -> None:
        if not is_tiling_pair(self.E, self.T):
            raise PreconditionError(f"({self.E}, {self.T}) is not a tiling pair")


def is_tiling_pair(E: PointSet, T: PointSet) -> bool:
    if E.ambient != T.ambient:
        raise DimensionMismatchError(f"{E.ambient} vs {T.ambient}")
    if E.size * T.size != E.ambient.cells:
        return False
    return all(v == 1 for v in convolve_indicator(E, T))


def divisibility_obstruction(E: PointSet) -> str | None:
    """Human-readable reason E cannot tile by counting, or None."""
    p, d = E.ambient.p, E.ambient.d
    if E.ambient.cells % E.size:
        return f"{E.size} does not divide {p}^{d}"
    return None


def find_tiling_complement(E: PointSet) -> PointSet | None:
    """Depth-first exact cover: always cover the least uncovered cell, trying
    translations in increasing cell order."""
    if not E.cells:
        raise EmptySetError("the empty set cannot tile")
    ambient = E.ambient
    n = ambient.cells
    if n % E.size:
        return None
    evecs = E.vectors()
    full = (1 << n) - 1
    translates: dict[int, int] = {}

    def translate(tau: int) -> int:
        mask = translates.get(tau)
        if mask is None:
            t = ambient.vector_at(tau)
            mask = 0
            for e in evecs:
                mask |= 1 << (e + t).index
            translates[tau] = mask
        return mask

    chosen: list[int] = []

    def search(covered: int) -> bool:
        if covered == full:
            return True
        free = ~covered & full
        c = ambient.vector_at((free & -free).bit_length() - 1)
        for tau in sorted((c - e).index for e in evecs):
            piece = translate(tau)
            if piece & covered:
                continue
            chosen.append(tau)
            if search(covered | piece):
                return True
            chosen.pop()
        return False

    if not search(0):
        return None
    return PointSet(ambient, tuple(chosen))


def tiles(E: PointSet) -> bool:
    return find_tiling_complement(E) is not None


def line_perp_partner(E: PointSet, m: Vector) -> TilingPair:
    """(E, {x : x.m = 0}) for a p-element E whose transform vanishes at m."""
    ambient = E.ambient
    if ambient.d != 2:
        raise UnsupportedDimensionError("line_perp_partner is defined in Z_p^2")
    if m.is_zero():
        raise PreconditionError("m must be nonzero")
    if E.size != ambient.p:
        raise PreconditionError(f"|E| = {E.size}, expected p = {ambient.p}")
    if not is_zero_coefficient(E, m):
        raise PreconditionError(f"the transform of E does not vanish at {m}")
    perp = PointSet.from_vectors(ambient, (x for x in ambient.vectors() if dot(x, m) == 0))
    pair = TilingPair(E, perp)
    return pair


def graph_partner(G: GraphPresentation) -> TilingPair:
    """(graph, {t e2 : t ∈ Z_p}); the fibers of a full graph are exactly the e2-lines."""
    ambient = G.ambient
    if len(G.support) != ambient.p:
        raise PreconditionError("graph_partner needs f defined on all of Z_p")
    partner = PointSet.from_vectors(ambient, (G.e2.scale(t) for t in range(ambient.p)))
    return TilingPair(G.points(), partner)


Kind = Literal["point", "graph", "full", "not-a-tile"]


@dataclass(frozen=True)
class TileClass:
    kind: Kind
    presentation: GraphPresentation | None = None
    complement: PointSet | None = None
    obstruction: str | None = None


def tileshot_classify(E: PointSet) -> TileClass:
    """Classify a subset of Z_p^2 as a point, a graph of order p, the whole
    plane, or a non-tile (with the first obstruction found)."""
    ambient = E.ambient
    if ambient.d != 2:
        raise UnsupportedDimensionError("tileshot_classify is defined in Z_p^2")
    if not E.cells:
        raise EmptySetError("the empty set cannot tile")
    obstruction = divisibility_obstruction(E)
    if obstruction:
        return TileClass("not-a-tile", obstruction=obstruction)
    T = find_tiling_complement(E)
    if T is None:
        return TileClass("not-a-tile", obstruction="exact-cover search exhausted")
    if E.size == 1:
        return TileClass("point", complement=T)
    if E.size == ambient.cells:
        return TileClass("full", complement=T)
    if E.size != ambient.p:
        raise TheoremViolation(f"tile of size {E.size} in Z_{ambient.p}^2")
    G = graph_presentation(E)
    if G is None:
        raise TheoremViolation(f"tile {E} of size p is not a graph")
    return TileClass("graph", presentation=G, complement=T)
