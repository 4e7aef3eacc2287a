import random
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import sl2_orbit, sl2_orbit_invariant
from tallone.constructions import example_6d
from tallone.errors import InputError
from tallone.painting import (
    ClassificationRecord,
    PaintingData,
    SkeletonMismatch,
    UnsupportedTopology,
    compare_records,
    equivalent,
    painting_invariant,
)
from tallone.pwaffine import AffineCell, PiecewiseAffineFn
from tallone.toricproj import build_projection


@pytest.fixture(scope="module")
def six_d():
    return build_projection(example_6d())


def torus_loop(p, q, skeleton=None):
    return PaintingData.loop(1, (p, q), skeleton)


def random_sl2(rng, length):
    m = [[1, 0], [0, 1]]
    gens = [[[0, -1], [1, 0]], [[1, 1], [0, 1]], [[1, -1], [0, 1]], [[1, 0], [1, 1]]]
    for _ in range(length):
        g = rng.choice(gens)
        m = [[sum(g[i][k] * m[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    return m


# -- invariants -----------------------------------------------------------------


def test_torus_loop_examples():
    assert painting_invariant(torus_loop(2, 4)).value == 2
    assert sl2_orbit_invariant(2, 4) == 2
    assert (2, 0) in sl2_orbit((2, 4), 8)
    assert painting_invariant(torus_loop(0, 0)).value == 0


def test_sphere_loop_is_single_class(six_d):
    a = PaintingData.loop(0, (), six_d.skeleton)
    b = PaintingData.loop(0, (), six_d.skeleton)
    assert painting_invariant(a).kind == "loop-sphere"
    assert painting_invariant(a) == painting_invariant(b)
    assert equivalent(a, b)


def test_skeleton_topology_is_used(six_d):
    p = torus_loop(3, 6, six_d.skeleton)
    assert p.betti() == (1, 1, 0)
    assert painting_invariant(p).value == 3


@pytest.mark.parametrize("p", range(-5, 6))
@pytest.mark.parametrize("q", range(-5, 6))
def test_torus_invariant_matches_orbit_oracle(p, q):
    assert painting_invariant(torus_loop(p, q)).value == sl2_orbit_invariant(p, q) == gcd(p, q)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(0, 10**6))
def test_torus_invariant_is_sl2_invariant(p, q, seed):
    rng = random.Random(seed)
    base = painting_invariant(torus_loop(p, q))
    for _ in range(100 // 20):
        m = random_sl2(rng, rng.randint(0, 6))
        v = (m[0][0] * p + m[0][1] * q, m[1][0] * p + m[1][1] * q)
        assert painting_invariant(torus_loop(*v)) == base


def test_sphere_degree():
    assert painting_invariant(PaintingData.sphere(3)).value == 3
    assert painting_invariant(PaintingData.sphere(-2)).value == -2
    assert painting_invariant(PaintingData.sphere(0, genus=1)).kind == "sphere-positive-genus"


def test_errors():
    with pytest.raises(UnsupportedTopology) as e:
        painting_invariant(PaintingData.loop(2, (1, 0, 0, 0)))
    assert e.value.betti == (1, 1, 0)
    with pytest.raises(UnsupportedTopology) as e:
        painting_invariant(PaintingData(None, 0, topology=(2, 0, 0)))
    assert e.value.betti == (2, 0, 0)
    with pytest.raises(InputError):
        painting_invariant(PaintingData.sphere(None))
    with pytest.raises(InputError):
        painting_invariant(PaintingData(None, 1, ((1, 2),), topology=(1, 1, 0)))


def test_empty_skeleton_single_class():
    p = PaintingData(None, 1, topology=(0, 0, 0))
    assert painting_invariant(p).kind == "empty"


# -- equivalence --------------------------------------------------------------


def test_equivalent_examples():
    assert equivalent(torus_loop(1, 2), torus_loop(2, 1))
    assert not equivalent(torus_loop(1, 0), torus_loop(2, 0))
    assert not equivalent(torus_loop(1, 0), PaintingData.loop(0))


def test_equivalent_needs_same_skeleton(six_d):
    with pytest.raises(SkeletonMismatch):
        equivalent(torus_loop(1, 0, six_d.skeleton), torus_loop(1, 0))


vec = st.tuples(st.integers(-6, 6), st.integers(-6, 6))


@given(vec, vec, vec)
def test_equivalent_is_an_equivalence_relation(a, b, c):
    pa, pb, pc = torus_loop(*a), torus_loop(*b), torus_loop(*c)
    assert equivalent(pa, pa)
    assert equivalent(pa, pb) == equivalent(pb, pa)
    if equivalent(pa, pb) and equivalent(pb, pc):
        assert equivalent(pa, pc)


# -- records --------------------------------------------------------------------


def shifted(f, k):
    return PiecewiseAffineFn(f.ambient_dim, tuple(AffineCell(c.carrier, c.slope, c.constant + k)
                                                  for c in f.cells), f.domain)


def record(b, painting):
    return ClassificationRecord(b.delta, b.rho, painting.genus, painting)


def test_record_against_itself(six_d):
    r = record(six_d, torus_loop(1, 0, six_d.skeleton))
    v = compare_records(r, r)
    assert v.verdict == "IsomorphicData"
    assert v.delta_equal and v.rho_equal and v.genus_equal and v.painting_equal


def test_record_with_shifted_rho(six_d):
    r1 = record(six_d, torus_loop(1, 0, six_d.skeleton))
    r2 = ClassificationRecord(six_d.delta, shifted(six_d.rho, 1), 1, r1.painting)
    v = compare_records(r1, r2)
    assert v.verdict == "NotIsomorphic" and not v.rho_equal and v.delta_equal


def test_records_with_different_paintings(six_d):
    r1 = record(six_d, torus_loop(1, 0, six_d.skeleton))
    r2 = record(six_d, torus_loop(2, 0, six_d.skeleton))
    v = compare_records(r1, r2)
    assert v.verdict == "NotIsomorphic" and v.painting_equal is False
    assert compare_records(r1, record(six_d, torus_loop(3, 5, six_d.skeleton))).verdict == "IsomorphicData"


def test_record_unsupported_is_indeterminate(six_d):
    p = PaintingData.loop(2, (1, 0, 0, 0), six_d.skeleton)
    r = record(six_d, p)
    v = compare_records(r, r)
    assert v.verdict == "Indeterminate" and v.painting_equal is None and v.message


@given(vec, vec, st.integers(0, 2))
def test_compare_is_symmetric(a, b, k):
    b6 = build_projection_cached()
    r1 = record(b6, torus_loop(*a, b6.skeleton))
    r2 = ClassificationRecord(b6.delta, shifted(b6.rho, k), 1, torus_loop(*b, b6.skeleton))
    assert compare_records(r1, r2) == compare_records(r2, r1)
    assert compare_records(r1, r1).verdict == "IsomorphicData"


_cache = {}


def build_projection_cached():
    if "6d" not in _cache:
        _cache["6d"] = build_projection(example_6d())
    return _cache["6d"]
