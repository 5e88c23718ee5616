from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpf.core import (
    Ambient,
    PointSet,
    direction_representatives,
    dot,
    enumerate_subsets,
    evaluate_polynomial,
    normalize_direction,
    sqrt_minus_one,
)
from fpf.directions import (
    DirectionClass,
    GraphPresentation,
    all_directions,
    basis_for,
    determines_all_directions,
    direction_set,
    graph_presentation,
    missing_directions,
)
from fpf.errors import EmptySetError, PreconditionError, UnsupportedDimensionError
from fpf.fourier import hyperplane_profile

from conftest import point_sets

A3 = Ambient(3, 2)
A5 = Ambient(5, 2)


def S(amb, *pts):
    return PointSet.from_vectors(amb, pts)


def naive_directions(E) -> set[tuple[int, ...]]:
    """Classes of E - E by brute force: the set of all nonzero multiples, as a frozenset key."""
    p = E.ambient.p
    out = set()
    for a, b in itertools.permutations(E.vectors(), 2):
        out.add(frozenset((a - b).scale(r).coords for r in range(1, p)))
    return out


def test_direction_set_examples():
    assert direction_set(S(A3, (0, 0), (1, 0), (2, 0))).representatives() == [(1, 0)]
    assert direction_set(S(A3, (0, 0), (1, 0), (0, 1))).representatives() == [(0, 1), (1, 0), (1, 2)]
    assert len(direction_set(PointSet.full(A3))) == 4
    assert len(direction_set(S(A3, (1, 1)))) == 0
    with pytest.raises(EmptySetError):
        direction_set(PointSet.empty(A3))


@pytest.mark.parametrize("p,d,count", [(3, 2, 4), (5, 2, 6), (3, 3, 13), (2, 2, 3), (7, 1, 1)])
def test_all_directions(p, d, count):
    assert len(all_directions(p, d)) == count


def test_direction_class_representative():
    for v in A5.nonzero_vectors():
        cls = DirectionClass.of(v)
        rep = cls.representative
        assert rep.coords[next(i for i, c in enumerate(rep.coords) if c)] == 1
        assert any(v.scale(r) == rep for r in range(1, 5))
    order = [c.representative.coords for c in sorted(all_directions(3, 2).classes)]
    assert order == [(0, 1), (1, 0), (1, 1), (1, 2)]


@given(point_sets(primes=(2, 3, 5, 7), dims=(1, 2, 3), max_size=15))
def test_direction_set_matches_brute_force(E):
    D = direction_set(E)
    brute = naive_directions(E)
    assert len(D) == len(brute)
    for rep in D.representatives():
        assert any(rep in cls for cls in brute)
    assert determines_all_directions(E) == (not missing_directions(E))


def test_determines_all_examples():
    assert not determines_all_directions(S(A3, (0, 0), (1, 0), (0, 1)))
    assert [c.representative.coords for c in missing_directions(S(A3, (0, 0), (1, 0), (0, 1)))] == [(1, 1)]
    assert determines_all_directions(PointSet.full(A3))


def test_size_bound_exhaustive_p3():
    for mask in range(1, 512):
        E = PointSet.from_mask(A3, mask)
        if E.size > 3:
            assert determines_all_directions(E)


def test_size_bound_sampled_p5():
    rng = random.Random(55)
    checked = 0
    while checked < 100_000:
        mask = rng.getrandbits(25)
        if mask.bit_count() <= 5:
            continue
        assert determines_all_directions(PointSet.from_mask(A5, mask))
        checked += 1


# -- graph presentations ----------------------------------------------------------


def test_orthogonal_example():
    E = S(A3, (0, 0), (1, 1), (2, 1))
    G = graph_presentation(E)
    assert G.kind == "orthogonal"
    assert G.e1.coords == (1, 0) and G.e2.coords == (0, 1)
    assert G.values == {0: 0, 1: 1, 2: 1}
    assert G.polynomial() == (0, 0, 1)
    assert G.points() == E


def test_isotropic_example():
    E = PointSet.from_vectors(A5, [(t, 2 * t % 5) for t in range(5)])
    # the least missing class (0,1) is not isotropic
    assert graph_presentation(E).kind == "orthogonal"
    G = graph_presentation(E, direction=A5.vector((1, 3)))
    assert G.kind == "isotropic"
    assert G.e1.coords == (1, 2) and G.e2.coords == (3, 4)
    assert dot(G.e1, G.e2) == 1
    assert G.values == {x: 0 for x in range(5)}
    assert G.points() == E


def test_full_plane_has_no_presentation():
    assert graph_presentation(PointSet.full(A3)) is None


def test_presentation_errors():
    with pytest.raises(UnsupportedDimensionError):
        graph_presentation(PointSet.full(Ambient(3, 3)))
    E = S(A3, (0, 0), (1, 0))
    with pytest.raises(PreconditionError):
        graph_presentation(E, direction=A3.vector((1, 0)))
    with pytest.raises(PreconditionError):
        basis_for(Ambient(2, 2).vector((1, 1)))
    with pytest.raises(ValueError):
        GraphPresentation(A3.vector((1, 0)), A3.vector((2, 0)), "orthogonal", {})
    with pytest.raises(ValueError):
        GraphPresentation(A3.vector((1, 0)), A3.vector((1, 1)), "orthogonal", {})
    with pytest.raises(ValueError):
        GraphPresentation(A5.vector((1, 2)), A5.vector((1, 3)), "isotropic", {})


@pytest.mark.parametrize("p", [2, 3, 5, 13])
def test_basis_invariants(p):
    amb = Ambient(p, 2)
    for v in amb.nonzero_vectors():
        try:
            e1, e2, kind = basis_for(v)
        except PreconditionError:
            assert p == 2 and dot(v, v) == 0
            continue
        assert normalize_direction(e2) == normalize_direction(v)
        if kind == "orthogonal":
            assert dot(e1, e2) == 0 and dot(e1, e1) != 0
        else:
            assert p % 4 == 1
            assert dot(e1, e1) == dot(e2, e2) == 0 and dot(e1, e2) == 1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_graph_dichotomy_exhaustive(p):
    amb = Ambient(p, 2)
    for E in itertools.chain.from_iterable(enumerate_subsets(amb, size=k) for k in range(1, p + 1)):
        G = graph_presentation(E)
        missing = missing_directions(E)
        assert (G is not None) == bool(missing)
        if G is None:
            continue
        assert G.points() == E
        assert len(G.support) == E.size
        if E.size == p:
            # one point per fiber: the fiber normal balances E
            assert hyperplane_profile(E, G.fiber_normal).counts == (1,) * p


@pytest.mark.parametrize("p", [3, 7, 11])
def test_no_isotropic_when_p_is_3_mod_4(p):
    amb = Ambient(p, 2)
    assert sqrt_minus_one(p) is None
    rng = random.Random(p)
    for _ in range(300):
        values = [rng.randrange(p) for _ in range(p)]
        u = amb.vector_at(rng.randrange(1, amb.cells))
        e1, e2, kind = basis_for(u)
        E = GraphPresentation(e1, e2, kind, dict(enumerate(values))).points()
        for d in missing_directions(E):
            assert graph_presentation(E, direction=d.representative).kind == "orthogonal"


@given(st.sampled_from([5, 13, 17]), st.data())
def test_isotropic_presentations_round_trip(p, data):
    amb = Ambient(p, 2)
    i = sqrt_minus_one(p)
    u = amb.vector((1, data.draw(st.sampled_from([i, p - i]))))
    values = data.draw(st.lists(st.integers(0, p - 1), min_size=p, max_size=p))
    e1, e2, kind = basis_for(u)
    assert kind == "isotropic"
    E = GraphPresentation(e1, e2, kind, dict(enumerate(values))).points()
    G = graph_presentation(E, direction=u)
    assert G.kind == "isotropic" and G.values == dict(enumerate(values))
    assert [evaluate_polynomial(G.polynomial(), x, p) for x in range(p)] == values


@pytest.mark.parametrize("p", [3, 5])
def test_graph_fiber_normal_iff_balanced_profile(p):
    amb = Ambient(p, 2)
    for E in enumerate_subsets(amb, size=p):
        missing = {c.representative.coords for c in missing_directions(E)}
        for m in direction_representatives(amb):
            u = normalize_direction(amb.vector((-m.coords[1] % p, m.coords[0])))
            balanced = hyperplane_profile(E, m).counts == (1,) * p
            assert balanced == (u.coords in missing)
            if balanced:
                G = graph_presentation(E, direction=u)
                assert normalize_direction(G.fiber_normal) == m
