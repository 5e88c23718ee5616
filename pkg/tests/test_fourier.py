from __future__ import annotations

import cmath
import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fpf.core import Ambient, PointSet, dot
from fpf.errors import DimensionMismatchError, ZeroFrequencyError
from fpf.fourier import (
    CyclotomicValue,
    evaluate_complex,
    fourier_coefficient,
    hyperplane_profile,
    inversion_check,
    is_zero_coefficient,
    transform_table,
    zero_set,
    convolve_indicator,
)

from conftest import point_sets, vectors

A3 = Ambient(3, 2)
XAXIS = PointSet.from_vectors(A3, [(0, 0), (1, 0), (2, 0)])
YAXIS = PointSet.from_vectors(A3, [(0, 0), (0, 1), (0, 2)])
L3 = PointSet.from_vectors(A3, [(0, 0), (1, 0), (0, 1)])


def naive_transform(E, m) -> complex:
    """sum_{x in E} exp(-2 pi i x.m / p), straight from the definition."""
    p = E.ambient.p
    return sum(cmath.exp(-2j * math.pi * dot(x, m) / p) for x in E)


def m3(*c):
    return A3.vector(c)


# -- cyclotomic arithmetic ---------------------------------------------------------


def cyclo(p):
    return st.lists(st.integers(-50, 50), min_size=p, max_size=p).map(lambda c: CyclotomicValue.from_raw(p, c))


@st.composite
def cyclo_pairs(draw):
    p = draw(st.sampled_from([2, 3, 5, 7, 11, 13]))
    return p, draw(cyclo(p)), draw(cyclo(p)), draw(cyclo(p))


def test_canonical_form_and_zero():
    v = CyclotomicValue.from_raw(3, (1, 1, 1))
    assert v.coeffs == (0, 0, 0) and v.is_zero()
    assert CyclotomicValue.from_raw(3, (3, 1, 1)).coeffs == (2, 0, 0)
    assert CyclotomicValue.from_raw(5, (1, 1, 0, 1, 1)) != CyclotomicValue.zero(5)
    with pytest.raises(ValueError):
        CyclotomicValue(3, (1, 2))


@given(cyclo_pairs())
def test_ring_operations_match_complex_evaluation(args):
    p, a, b, c = args
    ev = evaluate_complex
    tol = 1e-6 * (1 + abs(ev(a)) * abs(ev(b)))
    assert abs(ev(a + b) - (ev(a) + ev(b))) < tol
    assert abs(ev(a - b) - (ev(a) - ev(b))) < tol
    assert abs(ev(a * b) - ev(a) * ev(b)) < tol
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - a).is_zero()
    assert -(-a) == a
    assert a.shift(1) == a * CyclotomicValue.root(p, 1)
    assert a * 3 == a + a + a == 3 * a


def test_mixed_moduli():
    with pytest.raises(DimensionMismatchError):
        CyclotomicValue.zero(3) + CyclotomicValue.zero(5)


def test_evaluate_complex_examples():
    assert abs(evaluate_complex(CyclotomicValue.zero(7))) < 1e-12
    assert abs(evaluate_complex(CyclotomicValue.from_raw(3, (3, 0, 0))) - 3) < 1e-12
    assert abs(evaluate_complex(CyclotomicValue.from_raw(3, (1, 1, 1)))) < 1e-12
    # xi = exp(-2 pi i / p)
    assert abs(evaluate_complex(CyclotomicValue.root(5, 1)) - cmath.exp(-2j * math.pi / 5)) < 1e-12


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_nonzero_values_stay_away_from_zero(p):
    # every nonzero profile of a set with |E| <= 2p: the numeric value is bounded below
    rng = random.Random(p)
    for _ in range(3000):
        raw = [rng.randrange(0, 3) for _ in range(p)]
        v = CyclotomicValue.from_raw(p, raw)
        if v.is_zero():
            assert abs(evaluate_complex(v)) < 1e-9
        else:
            assert abs(evaluate_complex(v)) > 1e-3


# -- profiles and coefficients -----------------------------------------------------


@pytest.mark.parametrize(
    "E,m,profile",
    [(XAXIS, (1, 0), (1, 1, 1)), (XAXIS, (0, 1), (3, 0, 0)), (L3, (1, 2), (1, 1, 1)), (L3, (1, 0), (2, 1, 0))],
)
def test_profile_examples(E, m, profile):
    prof = hyperplane_profile(E, m3(*m))
    assert prof.counts == profile
    assert prof.total == E.size


@pytest.mark.parametrize(
    "E,m,canonical,zero",
    [
        (XAXIS, (0, 1), (3, 0, 0), False),
        (XAXIS, (1, 0), (0, 0, 0), True),
        (PointSet.from_vectors(A3, [(0, 0), (1, 0)]), (1, 0), (1, 1, 0), False),
    ],
)
def test_coefficient_examples(E, m, canonical, zero):
    v = fourier_coefficient(E, m3(*m))
    assert v.coeffs == canonical
    assert v.is_zero() is zero


@pytest.mark.parametrize("E,m,zero", [(XAXIS, (1, 1), True), (L3, (1, 2), True), (L3, (1, 0), False)])
def test_is_zero_examples(E, m, zero):
    assert is_zero_coefficient(E, m3(*m)) is zero


def test_zero_frequency():
    with pytest.raises(ZeroFrequencyError):
        hyperplane_profile(XAXIS, m3(0, 0))
    with pytest.raises(ZeroFrequencyError):
        is_zero_coefficient(XAXIS, m3(0, 0))
    assert fourier_coefficient(XAXIS, m3(0, 0)) == CyclotomicValue.constant(3, 3)


def test_mismatched_frequency():
    with pytest.raises(DimensionMismatchError):
        hyperplane_profile(XAXIS, Ambient(5, 2).vector((1, 0)))


def test_zero_set_examples():
    assert {v.coords for v in zero_set(XAXIS).vectors()} == {(1, 0), (2, 0), (1, 1), (2, 2), (1, 2), (2, 1)}
    assert {v.coords for v in zero_set(L3).vectors()} == {(1, 2), (2, 1)}
    for p in (2, 3, 5, 7):
        amb = Ambient(p, 2)
        assert len(zero_set(PointSet.from_vectors(amb, [(1, 1)]))) == 0


@given(point_sets(primes=(2, 3, 5, 7), dims=(1, 2, 3), max_size=60))
def test_zero_set_equals_brute_force(E):
    Z = zero_set(E, audit=True)
    brute = {m.index for m in E.ambient.nonzero_vectors() if abs(naive_transform(E, m)) < 1e-6}
    assert Z.cells == brute


@given(point_sets(primes=(2, 3, 5, 7, 11, 13), dims=(1, 2, 3), max_size=40), st.data())
def test_profile_permutation_law_and_closure(E, data):
    amb = E.ambient
    p = amb.p
    m = data.draw(vectors(amb, nonzero=True))
    r = data.draw(st.integers(1, p - 1))
    base = hyperplane_profile(E, m).counts
    scaled = hyperplane_profile(E, m.scale(r)).counts
    rinv = pow(r, -1, p)
    assert scaled == tuple(base[rinv * t % p] for t in range(p))
    if is_zero_coefficient(E, m):
        assert is_zero_coefficient(E, m.scale(r))


@given(point_sets(primes=(2, 3, 5, 7, 11, 13), dims=(1, 2, 3), max_size=40), st.data())
def test_exact_and_numeric_agree(E, data):
    m = data.draw(vectors(E.ambient))
    v = fourier_coefficient(E, m)
    assert abs(evaluate_complex(v) - naive_transform(E, m)) < 1e-6
    assert v.is_zero() == (abs(evaluate_complex(v)) < 1e-6)


@given(point_sets(dims=(1, 2, 3)))
def test_coefficient_at_zero_is_cardinality(E):
    assert fourier_coefficient(E, E.ambient.zero()) == CyclotomicValue.constant(E.ambient.p, E.size)


# -- convolution and inversion ----------------------------------------------------


def test_convolution_examples():
    assert convolve_indicator(XAXIS, YAXIS) == [1] * 9
    origin = PointSet.from_vectors(A3, [(0, 0)])
    assert convolve_indicator(origin, L3) == [int(c in L3) for c in range(9)]
    assert convolve_indicator(XAXIS, XAXIS) == [3 if c in XAXIS else 0 for c in range(9)]


@given(point_sets(primes=(2, 3, 5), dims=(1, 2)), st.data())
def test_convolution_matches_numpy(E, data):
    T = data.draw(point_sets(ambient=E.ambient))
    amb = E.ambient
    p, d = amb.p, amb.d
    shape = (p,) * d
    e = np.zeros(shape, dtype=np.int64)
    t = np.zeros(shape, dtype=np.int64)
    for x in E:
        e[tuple(reversed(x.coords))] = 1
    for x in T:
        t[tuple(reversed(x.coords))] = 1
    conv = np.rint(np.real(np.fft.ifftn(np.fft.fftn(e) * np.fft.fftn(t)))).astype(np.int64)
    assert convolve_indicator(E, T) == [int(conv[tuple(reversed(v.coords))]) for v in amb.vectors()]


def test_convolution_theorem_exhaustive_p3():
    """transform(E * T)(m) == E^(m) T^(m) exactly, for all 512 x 512 pairs and all m."""
    amb = A3
    sets = [PointSet.from_mask(amb, mask) for mask in range(512)]
    freqs = list(amb.vectors())
    ind = np.array([[(mask >> c) & 1 for c in range(9)] for mask in range(512)], dtype=np.int64)
    # sumtab[i, j] = cell of vector_at(i) + vector_at(j)
    sumtab = np.array([[(amb.vector_at(i) + amb.vector_at(j)).index for j in range(9)] for i in range(9)])
    conv = np.zeros((512, 512, 9), dtype=np.int64)
    for i in range(9):
        for j in range(9):
            conv[:, :, sumtab[i, j]] += np.outer(ind[:, i], ind[:, j])
    # spot-check the vectorized convolution against the library
    rng = random.Random(0)
    for _ in range(200):
        a, b = rng.randrange(512), rng.randrange(512)
        assert convolve_indicator(sets[a], sets[b]) == conv[a, b].tolist()
    for m in freqs:
        level = np.array([dot(amb.vector_at(c), m) for c in range(9)])
        raw = np.stack([conv[:, :, level == t].sum(axis=2) for t in range(3)], axis=2)
        canon = raw - raw[:, :, 2:3]
        coeff = [fourier_coefficient(E, m) for E in sets]
        keys = {}
        ids = np.zeros(512, dtype=np.int64)
        for k, v in enumerate(coeff):
            ids[k] = keys.setdefault(v.coeffs, len(keys))
        values = list(keys)
        table = np.array(
            [[(CyclotomicValue(3, u) * CyclotomicValue(3, w)).coeffs for w in values] for u in values],
            dtype=np.int64,
        )
        expected = table[ids[:, None], ids[None, :]]
        assert np.array_equal(canon, expected), f"convolution theorem fails at m = {m}"
    # and through transform_table for a sample of pairs
    for _ in range(100):
        a, b = rng.randrange(512), rng.randrange(512)
        m = rng.choice(freqs)
        lhs = transform_table(convolve_indicator(sets[a], sets[b]), amb, m)
        assert lhs == fourier_coefficient(sets[a], m) * fourier_coefficient(sets[b], m)


def test_inversion_examples():
    assert inversion_check(XAXIS)
    assert inversion_check(PointSet.from_vectors(Ambient(2, 2), [(0, 0), (1, 1)]))


def test_inversion_random_p5():
    amb = Ambient(5, 2)
    rng = random.Random(5)
    for _ in range(100):
        assert inversion_check(PointSet.from_mask(amb, rng.getrandbits(25)))


@pytest.mark.parametrize("p,d", [(3, 1), (3, 3), (7, 1), (2, 3)])
def test_inversion_other_dimensions(p, d):
    amb = Ambient(p, d)
    rng = random.Random(p + d)
    for _ in range(10):
        assert inversion_check(PointSet.from_mask(amb, rng.getrandbits(amb.cells)))


def test_transform_table_length():
    with pytest.raises(DimensionMismatchError):
        transform_table([1, 2], A3, m3(1, 0))


def test_zero_set_is_union_of_punctured_lines():
    for mask in range(1, 512):
        E = PointSet.from_mask(A3, mask)
        Z = zero_set(E)
        for c in Z.cells:
            m = A3.vector_at(c)
            assert all(m.scale(r).index in Z.cells for r in (1, 2))
        assert Z.mask == sum(1 << c for c in Z.cells)
        assert {d.index for d in Z.directions()} <= Z.cells
        if mask == XAXIS.mask:
            assert [d.coords for d in Z.directions()] == [(1, 0), (1, 1), (1, 2)]
    assert list(itertools.islice(zero_set(XAXIS).vectors(), 1))[0].coords == (1, 0)
