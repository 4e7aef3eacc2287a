import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sampling import sample_points
from tallone.constructions import random_tall_model
from tallone.exactla import LatticeBasis, dot, solve_pairing_one
from tallone.model import (
    ComplexityOneModel,
    NonFaithfulWeights,
    NonPositiveKappa,
    NonPrimitiveSubtorus,
    NotComplementary,
    NotTall,
    TruncationSpec,
    complementary_circle,
    defining_exponents,
    dh_truncation,
    g_lattices,
    is_center_exceptional,
    is_tall,
    moment_cone,
    sigma_section,
    validate,
)
from tallone.polyhedra import HPolyhedron, is_delzant_cone
from tallone.pwaffine import combine, is_integral_affine_near

F = Fraction
CIRCLE = ComplexityOneModel.build(1, [(1,)], [(1,), (-1,)])
VERTEX_6D = ComplexityOneModel.build(2, [(1, 0), (0, 1)], [(-1, 0), (0, -1), (1, 1)])


# -- validation ---------------------------------------------------------------


def test_validate_examples():
    assert validate(CIRCLE).ok
    with pytest.raises(NonFaithfulWeights):
        validate(ComplexityOneModel.build(1, [(1,)], [(2,), (-2,)]))
    rep = validate(ComplexityOneModel.build(1, [(1,)], [(2,), (-2,)]), strict=False)
    assert rep.weight_invariant_factors == (2,)
    with pytest.raises(NonPrimitiveSubtorus):
        validate(ComplexityOneModel.build(2, [(2, 0)], [(1,), (-1,)]))
    assert validate(ComplexityOneModel.build(2, [(2, 0)], [(1,), (-1,)]), strict=False).subtorus_index == 2


def test_validate_shape():
    from tallone.model import InvalidModel
    with pytest.raises(InvalidModel):
        validate(ComplexityOneModel.build(1, [(1,)], [(1,)]))


# -- tallness and exponents ---------------------------------------------------


def test_tallness_examples():
    assert is_tall(CIRCLE)
    assert not is_tall(ComplexityOneModel.build(1, [(1,)], [(1,), (1,)]))
    assert is_tall(VERTEX_6D)
    with pytest.raises(NotTall):
        defining_exponents(ComplexityOneModel.build(1, [(1,)], [(1,), (1,)]))


def test_defining_exponents_examples():
    assert defining_exponents(CIRCLE) == (1, 1)
    assert defining_exponents(ComplexityOneModel.build(1, [(1,)], [(2,), (-1,)])) == (1, 2)
    assert defining_exponents(VERTEX_6D) == (1, 1, 1)


def test_center_exceptional_examples():
    assert not is_center_exceptional(ComplexityOneModel.build(1, [(1,)], [(1,), (0,)]))
    assert is_center_exceptional(CIRCLE)
    assert not is_center_exceptional(ComplexityOneModel.build(1, [], [()]))


def test_moment_cone_examples():
    assert moment_cone(CIRCLE).same_set(HPolyhedron.whole_space(1))
    half = moment_cone(ComplexityOneModel.build(2, [(1, 0)], [(1,), (0,)]))
    assert half.same_set(HPolyhedron(2, (((1, 0), 0),)))
    assert moment_cone(VERTEX_6D).same_set(HPolyhedron.whole_space(2))
    shifted = moment_cone(ComplexityOneModel.build(2, [(1, 0)], [(1,), (0,)], (3, 5)))
    assert shifted.same_set(HPolyhedron(2, (((1, 0), 3),)))


@given(st.integers(0, 10**6))
def test_exponents_are_primitive_nonnegative_relation(seed):
    m = random_tall_model(random.Random(seed))
    xi = defining_exponents(m)
    assert all(x >= 0 for x in xi) and any(xi)
    from math import gcd
    from functools import reduce
    assert reduce(gcd, xi) == 1
    for i in range(m.h):
        assert sum(x * w[i] for x, w in zip(xi, m.weights)) == 0


@given(st.integers(0, 10**6))
def test_moment_cone_is_delzant(seed):
    m = random_tall_model(random.Random(seed))
    assert is_delzant_cone(moment_cone(m), m.alpha)


@given(st.integers(0, 10**6))
def test_invariance_under_subtorus_basis_change(seed):
    rng = random.Random(seed)
    m = random_tall_model(rng)
    h = m.h
    if h == 0:
        return
    u = [[int(i == k) for k in range(h)] for i in range(h)]
    for _ in range(4):
        i, k = rng.sample(range(h), 2) if h > 1 else (0, 0)
        if i != k:
            f = rng.choice([-1, 1])
            u = [[u[r][c] + (f * u[r][k] if c == i else 0) for c in range(h)] for r in range(h)]
    b = [list(v) for v in m.subtorus.vectors()]
    b2 = [[sum(b[c][r] * u[c][col] for c in range(h)) for r in range(m.rank)] for col in range(h)]
    # a weight is a covector on h, so its coordinates transform by u^T
    w2 = [tuple(sum(u[r][c] * w[r] for r in range(h)) for c in range(h)) for w in m.weights]
    m2 = ComplexityOneModel(m.rank, LatticeBasis.from_vectors(b2, m.rank), tuple(w2), m.base_point)
    validate(m2)
    assert defining_exponents(m2) == defining_exponents(m)
    assert is_tall(m2)
    assert moment_cone(m2).same_set(moment_cone(m))


# -- lattices and circles -------------------------------------------------


def test_g_lattices_circle_model():
    gl = g_lattices(CIRCLE)
    assert gl.xi == (1, 1)
    assert gl.i_t((1,)) == (1, -1)
    vecs = gl.gstar_basis.vectors()
    for i, g in enumerate(gl.g_basis):
        for k, v in enumerate(vecs):
            assert dot(g, v) == int(i == k)
    solve_pairing_one(gl.xi, LatticeBasis.standard(2))


@given(st.integers(0, 10**6))
def test_g_lattices_pairing_and_exactness(seed):
    m = random_tall_model(random.Random(seed))
    gl = g_lattices(m)
    vecs = gl.gstar_basis.vectors()
    for i, g in enumerate(gl.g_basis):
        for k, v in enumerate(vecs):
            assert dot(g, v) == int(i == k)
    # xi annihilates the image of t
    for e in range(m.rank):
        v = [int(i == e) for i in range(m.rank)]
        assert dot(gl.xi, gl.i_t(v)) == 0
    j = complementary_circle(m)
    assert dot(gl.xi, j) == 1


def test_complementary_circle_circle_model():
    assert complementary_circle(CIRCLE) == (1, 0)
    gl = g_lattices(CIRCLE)
    j2 = tuple(a + b for a, b in zip((1, 0), gl.i_t((3,))))
    assert dot(gl.xi, j2) == 1


# -- sigma -------------------------------------------------------------------


def test_sigma_circle_model():
    sig = sigma_section(CIRCLE)
    for b in [F(1), F(5, 2), F(0)]:
        assert sig((b,)) == (b, 0)
    for b in [F(-2), F(-1, 3)]:
        assert sig((b,)) == (0, -b)


def test_sigma_rejects_non_complementary_j():
    with pytest.raises(NotComplementary):
        sigma_section(CIRCLE, (1, 1))


def check_sigma(m, sig, beta):
    gl = sig.lattices
    coords = sig(beta)
    for t in (-1, 0, 2):
        shifted = tuple(c + t * x for c, x in zip(coords, gl.xi))
        assert gl.i_t_star(shifted) == tuple(beta)


def sigma_boundary(m, sig, beta):
    """``sigma(beta) - sigma(alpha)`` moved to the origin lies on the orthant boundary."""
    n = m.rank
    xi = defining_exponents(m)
    base = sigma_section(m.at([0] * n), sig.j)
    pt = sig.lattices.point(base(tuple(b - a for b, a in zip(beta, m.alpha))))
    s = pt[n:]
    assert all(x >= 0 for x in s)
    assert min(s[k] for k in range(len(s)) if xi[k] > 0) == 0


@given(st.integers(0, 10**6))
def test_sigma_properties_random(seed):
    rng = random.Random(seed)
    m = random_tall_model(rng)
    sig = sigma_section(m)
    assert dot(sig(m.alpha), sig.j) == 0
    for cell in sig.cells:
        piece = cell.carrier.intersect(sig.domain)
        for beta in sample_points(piece, rng, 5):
            check_sigma(m, sig, beta)
            sigma_boundary(m, sig, beta)


@given(st.integers(0, 10**6))
def test_sigma_is_continuous(seed):
    m = random_tall_model(random.Random(seed))
    sig = sigma_section(m)
    cells = sig.cells
    for i in range(len(cells)):
        for k in range(i + 1, len(cells)):
            meet = cells[i].carrier.intersect(cells[k].carrier).intersect(sig.domain)
            if meet.is_empty:
                continue
            v = meet.vrep
            for p in v.vertices:
                assert cells[i].value(p) == cells[k].value(p)
            for r in list(v.rays) + list(v.lineality):
                for a, b in zip(cells[i].linear, cells[k].linear):
                    assert dot(a, r) == dot(b, r)


# -- DH truncations ----------------------------------------------------------


def test_truncation_circle_values():
    rho = dh_truncation(CIRCLE, TruncationSpec((1, 0), 1))
    for b, want in [(-2, 1), (-1, 1), (0, 1), (F(1, 2), F(1, 2)), (1, 0)]:
        assert rho((b,)) == want
    assert rho((5,)) == -4  # the formula itself, beyond the truncated image


def test_truncation_difference_of_circles():
    rho = dh_truncation(CIRCLE, TruncationSpec((1, 0), 1))
    rho2 = dh_truncation(CIRCLE, TruncationSpec((0, 1), 1))
    d = combine(rho, rho2, 1, -1)
    germ = is_integral_affine_near(d, (0,))
    assert germ.slope == (-1,) and germ.constant == 0
    for b in [F(-3), F(1, 2), F(2)]:
        assert d((b,)) == -b


def test_truncation_errors():
    with pytest.raises(NonPositiveKappa):
        dh_truncation(CIRCLE, TruncationSpec((1, 0), 0))
    with pytest.raises(NotComplementary):
        dh_truncation(CIRCLE, TruncationSpec((2, 0), 1))
    with pytest.raises(NotTall):
        dh_truncation(ComplexityOneModel.build(1, [(1,)], [(1,), (1,)]), TruncationSpec((1, 0), 1))


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_truncation_value_at_alpha(seed, kappa):
    m = random_tall_model(random.Random(seed))
    rho = dh_truncation(m, TruncationSpec(complementary_circle(m), kappa))
    assert rho(m.alpha) == kappa


@given(st.integers(0, 10**6))
def test_truncation_is_concave(seed):
    rng = random.Random(seed)
    m = random_tall_model(rng)
    rho = dh_truncation(m, TruncationSpec(complementary_circle(m), 1))
    pts = sample_points(rho.domain, rng, 6)
    lam = F(1, 3)
    for b1, b2 in zip(pts, pts[1:]):
        mid = tuple(lam * x + (1 - lam) * y for x, y in zip(b1, b2))
        assert rho(mid) >= lam * rho(b1) + (1 - lam) * rho(b2)


@given(st.integers(0, 10**6))
def test_truncation_differences_are_integral_affine(seed):
    rng = random.Random(seed)
    m = random_tall_model(rng)
    gl = g_lattices(m)
    j = complementary_circle(m)
    v = [rng.randint(-2, 2) for _ in range(m.rank)]
    j2 = tuple(a + b for a, b in zip(j, gl.i_t(v)))
    k1, k2 = rng.choice([1, 2]), rng.choice([1, 2])
    rho = dh_truncation(m, TruncationSpec(j, k1))
    rho2 = dh_truncation(m, TruncationSpec(j2, k2))
    germ = is_integral_affine_near(combine(rho, rho2, 1, -1), m.alpha)
    assert germ.slope == tuple(F(x) for x in v)
    assert germ.value(m.alpha) == k1 - k2
