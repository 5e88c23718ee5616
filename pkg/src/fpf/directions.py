"""Direction sets and graph presentations in Z_p^2.

D(E) is the set of nonzero differences of E modulo scaling by Z_p^*.
A set misses a direction u exactly when every line parallel to u meets it at
most once; it is then the graph {x e1 + f(x) e2 : x ∈ S} with e2 spanning u.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Mapping

from fpf.core import (
    Ambient,
    PointSet,
    Vector,
    direction_representatives,
    dot,
    interpolate,
    normalize_direction,
    solve_mod,
    sqrt_minus_one,
)
from fpf.errors import EmptySetError, PreconditionError, UnsupportedDimensionError


@dataclass(frozen=True)
class DirectionClass:
    """A direction, represented by its scaling with first nonzero coordinate 1."""

    representative: Vector

    def __post_init__(self) -> None:
        if normalize_direction(self.representative) != self.representative:
            raise ValueError(f"{self.representative} is not a normalized representative")

    @classmethod
    def of(cls, v: Vector) -> DirectionClass:
        return cls(normalize_direction(v))

    def __lt__(self, other: DirectionClass) -> bool:
        return self.representative.coords < other.representative.coords

    def __str__(self) -> str:
        return str(self.representative)


@dataclass(frozen=True)
class DirectionSet:
    ambient: Ambient
    classes: frozenset[DirectionClass]

    def __post_init__(self) -> None:
        p, d = self.ambient.p, self.ambient.d
        assert len(self.classes) <= (p**d - 1) // (p - 1)

    def __len__(self) -> int:
        return len(self.classes)

    def __contains__(self, item: DirectionClass | Vector) -> bool:
        if isinstance(item, Vector):
            item = DirectionClass.of(item)
        return item in self.classes

    def sorted(self) -> list[DirectionClass]:
        return sorted(self.classes)

    def representatives(self) -> list[tuple[int, ...]]:
        return [c.representative.coords for c in self.sorted()]


@lru_cache(maxsize=32)
def _class_table(ambient: Ambient) -> tuple[int, ...]:
    """Cell of the normalized representative of every nonzero cell (0 maps to 0)."""
    return (0,) + tuple(normalize_direction(v).index for v in ambient.nonzero_vectors())


def _difference_cells(E: PointSet):
    """Yield the class cell of a - b for every pair of E, one pair at a time."""
    ambient = E.ambient
    p = ambient.p
    table = _class_table(ambient)
    weights = [p**i for i in range(ambient.d)]
    coords = [v.coords for v in E]
    for i, a in enumerate(coords):
        for b in coords[i + 1 :]:
            yield table[sum((x - y) % p * w for x, y, w in zip(a, b, weights))]


def direction_set(E: PointSet) -> DirectionSet:
    if not E.cells:
        raise EmptySetError("direction set of the empty set")
    ambient = E.ambient
    classes = frozenset(DirectionClass(ambient.vector_at(c)) for c in set(_difference_cells(E)))
    return DirectionSet(ambient, classes)


@lru_cache(maxsize=32)
def all_directions(p: int, d: int) -> DirectionSet:
    ambient = Ambient(p, d)
    return DirectionSet(ambient, frozenset(DirectionClass(v) for v in direction_representatives(ambient)))


def missing_directions(E: PointSet) -> list[DirectionClass]:
    present = direction_set(E)
    full = all_directions(E.ambient.p, E.ambient.d)
    return sorted(full.classes - present.classes)


def determines_all_directions(E: PointSet) -> bool:
    if not E.cells:
        raise EmptySetError("direction set of the empty set")
    p, d = E.ambient.p, E.ambient.d
    total = (p**d - 1) // (p - 1)
    if E.size * (E.size - 1) // 2 < total:
        return False
    seen: set[int] = set()
    for c in _difference_cells(E):
        seen.add(c)
        if len(seen) == total:
            return True
    return False


Kind = Literal["orthogonal", "isotropic"]


@dataclass(frozen=True)
class GraphPresentation:
    """E = {x e1 + f(x) e2 : x ∈ S} in the basis (e1, e2).

    Orthogonal kind: e1.e2 = 0, e1.e1 != 0.  Isotropic kind (the hyperbolic
    plane): e1.e1 = e2.e2 = 0 and e1.e2 = 1.
    """

    e1: Vector
    e2: Vector
    kind: Kind
    values: Mapping[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", dict(sorted(self.values.items())))
        p = self.e1.ambient.p
        a, b = self.e1.coords
        c, d = self.e2.coords
        if (a * d - b * c) % p == 0:
            raise ValueError("e1 and e2 are linearly dependent")
        if self.kind == "orthogonal":
            if dot(self.e1, self.e2) or not dot(self.e1, self.e1):
                raise ValueError("orthogonal presentation needs e1.e2 = 0 and e1.e1 != 0")
        elif self.kind == "isotropic":
            if dot(self.e1, self.e1) or dot(self.e2, self.e2) or dot(self.e1, self.e2) != 1:
                raise ValueError("isotropic presentation needs e1.e1 = e2.e2 = 0, e1.e2 = 1")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")
        if any(not (0 <= x < p and 0 <= y < p) for x, y in self.values.items()):
            raise ValueError("function values must be residues")

    @property
    def ambient(self) -> Ambient:
        return self.e1.ambient

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.values)

    @property
    def fiber_normal(self) -> Vector:
        """m whose level lines {y : y.m = t} are the fibers (lines parallel to e2)."""
        return self.e1 if self.kind == "orthogonal" else self.e2

    def points(self) -> PointSet:
        return PointSet.from_vectors(
            self.ambient, (self.e1.scale(x) + self.e2.scale(fx) for x, fx in self.values.items())
        )

    def polynomial(self) -> tuple[int, ...]:
        return interpolate(self.values, self.ambient.p)


def basis_for(u: Vector) -> tuple[Vector, Vector, Kind]:
    """Basis (e1, e2) with e2 spanning the direction u, orthogonal when u is
    not isotropic and hyperbolic otherwise."""
    ambient = u.ambient
    p = ambient.p
    u = normalize_direction(u)
    if dot(u, u):
        e1 = normalize_direction(ambient.vector((-u.coords[1] % p, u.coords[0])))
        return e1, u, "orthogonal"
    i = sqrt_minus_one(p)
    if p == 2 or i is None:
        raise PreconditionError(f"direction {u} has no independent isotropic partner in Z_{p}^2")
    # isotropic lines are spanned by (1, i) and (1, -i); u is one of them
    other = ambient.vector((1, (p - u.coords[1]) % p))
    e2 = u.scale(pow(dot(other, u), -1, p))
    return other, e2, "isotropic"


def graph_presentation(E: PointSet, direction: Vector | None = None) -> GraphPresentation | None:
    """Present E as a graph over the fibers parallel to a missing direction.

    Uses the least missing direction unless ``direction`` is given; None when
    E determines every direction.
    """
    ambient = E.ambient
    if ambient.d != 2:
        raise UnsupportedDimensionError("graph presentations are implemented for d = 2")
    missing = missing_directions(E)
    if direction is None:
        if not missing:
            return None
        u = missing[0].representative
    else:
        u = normalize_direction(direction)
        if DirectionClass(u) not in missing:
            raise PreconditionError(f"{E} is not a graph over lines parallel to {u}")
    e1, e2, kind = basis_for(u)
    p = ambient.p
    basis = [[e1.coords[0], e2.coords[0]], [e1.coords[1], e2.coords[1]]]
    values = {}
    for y in E:
        x, fx = solve_mod(basis, y.coords, p)
        assert x not in values
        values[x] = fx
    G = GraphPresentation(e1, e2, kind, values)
    assert G.points() == E
    return G
