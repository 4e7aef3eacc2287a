"""Ready-made polytopes, models and random generators used by tests and demos."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .exactla import LatticeBasis, dot, integer_inverse, saturate
from .model import ComplexityOneModel, InvalidModel, is_tall, validate
from .polyhedra import HPolyhedron, is_delzant_polytope, tangent_cone


def cube(n: int, side: int = 1) -> HPolyhedron:
    return HPolyhedron.box([0] * n, [side] * n)


def simplex(n: int, scale: int = 1) -> HPolyhedron:
    ineqs = [(tuple(int(i == k) for k in range(n)), 0) for i in range(n)]
    ineqs.append((tuple([-1] * n), -scale))
    return HPolyhedron(n, tuple(ineqs))


def pyramid_frustum(n_y: int) -> HPolyhedron:
    """``{(x, y_1..y_k, z) in [-3,3] x [-2,2]^k x [1,4] : |x| <= z, |y_i| <= z}``.

    ``n_y = 1`` is the six-dimensional example, larger values the
    ``2k+4``-dimensional family.
    """
    n = n_y + 2
    ineqs = []
    bounds = [(-3, 3)] + [(-2, 2)] * n_y + [(1, 4)]
    for i, (lo, hi) in enumerate(bounds):
        e = [0] * n
        e[i] = 1
        ineqs.append((tuple(e), lo))
        ineqs.append((tuple(-x for x in e), -hi))
    for i in range(n - 1):
        for sign in (1, -1):
            a = [0] * n
            a[i] = -sign
            a[-1] = 1
            ineqs.append((tuple(a), 0))
    return HPolyhedron(n, tuple(ineqs))


def example_6d() -> HPolyhedron:
    return pyramid_frustum(1)


def example_8d(n: int = 2, resolve: bool = True) -> HPolyhedron:
    """The ``2n+4``-dimensional family.

    For ``n >= 2`` the frustum itself is not simple: along the edges where
    two coordinates ``|y_i| = |y_k| = z = 2`` four facets meet.  With
    ``resolve`` those edges are cut off by ``z - s y_i - t y_k >= -3/2``
    (``s, t = +-1``), which keeps the projected image and makes the polytope
    Delzant.
    """
    p = pyramid_frustum(n)
    if not resolve or n < 2:
        return p
    cuts = []
    for i in range(1, n + 1):
        for k in range(i + 1, n + 1):
            for s in (1, -1):
                for t in (1, -1):
                    a = [0] * (n + 2)
                    a[i], a[k], a[-1] = -s, -t, 1
                    cuts.append((tuple(a), Fraction(-3, 2)))
    return p.with_constraints(cuts)


# ---------------------------------------------------------------------------
# random Delzant polytopes


def _random_unimodular(rng: random.Random, k: int, steps: int = 4) -> list[list[int]]:
    m = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(steps):
        if k < 2:
            break
        i, j = rng.sample(range(k), 2)
        c = rng.choice([-1, 1])
        for r in range(k):
            m[r][i] += c * m[r][j]
    if k and rng.random() < 0.5:
        r = rng.randrange(k)
        for c in range(k):
            m[c][r] = -m[c][r]
    return m


def _transform(p: HPolyhedron, a: Sequence[Sequence[int]]) -> HPolyhedron:
    """Image of ``p`` under the unimodular map ``x -> a x``."""
    ainv = integer_inverse(a)
    n = p.dim

    def pull(normal):
        return tuple(sum(normal[r] * ainv[r][c] for r in range(n)) for c in range(n))
    return HPolyhedron(n, tuple((pull(u), b) for u, b in p.inequalities),
                       tuple((pull(u), b) for u, b in p.equalities))


def vertical_shear(rng: random.Random, n: int) -> list[list[int]]:
    """Unimodular map of ``R^n`` preserving the vertical direction and the
    projection structure: ``(x', z) -> (A x', z + c.x')``."""
    a = _random_unimodular(rng, n - 1)
    m = [row + [0] for row in a]
    m.append([rng.randint(-1, 1) for _ in range(n - 1)] + [1])
    return m


def chop_corner(p: HPolyhedron, vertex: Sequence, depth: int = 1) -> HPolyhedron:
    """Cut a Delzant vertex at lattice depth ``depth`` along its edges."""
    n = p.dim
    cone = tangent_cone(p, vertex)
    normals = [a for a, _ in cone.inequalities]
    # the sum of the inward normals pairs to 1 with every primitive edge
    a = tuple(sum(u[c] for u in normals) for c in range(n))
    return p.with_constraints([(a, dot(a, vertex) + depth)])


def random_delzant_3polytope(rng: random.Random, chops: int = 1) -> HPolyhedron:
    """Random Delzant 3-polytope: a box, prism, simplex or pyramid frustum,
    corner-chopped and vertically sheared."""
    kind = rng.choice(["box", "prism", "simplex", "frustum", "frustum"])
    if kind == "frustum":
        # like the six-dimensional example; distinct side bounds keep it simple
        b = rng.randint(2, 3)
        a = rng.randint(b + 1, b + 2)
        c = rng.randint(a + 1, a + 2)
        ineqs = [((1, 0, 0), -a), ((-1, 0, 0), -a), ((0, 1, 0), -b), ((0, -1, 0), -b),
                 ((0, 0, 1), 1), ((0, 0, -1), -c),
                 ((1, 0, 1), 0), ((-1, 0, 1), 0), ((0, 1, 1), 0), ((0, -1, 1), 0)]
        if rng.random() < 0.5:
            ineqs = [(u[:2] + (-u[2],), b_) for u, b_ in ineqs]
        p = HPolyhedron(3, tuple(ineqs))
    elif kind == "box":
        a, b, c = (rng.randint(2, 4) for _ in range(3))
        p = HPolyhedron.box([0, 0, 0], [a, b, c])
    elif kind == "prism":
        k = rng.randint(2, 4)
        h = rng.randint(1, 3)
        tri = [((1, 0, 0), 0), ((0, 1, 0), 0), ((-1, -1, 0), -k)]
        if rng.random() < 0.5:
            # triangle in (x, z), interval in y
            tri = [((1, 0, 0), 0), ((0, 0, 1), 0), ((-1, 0, -1), -k)]
            ext = [((0, 1, 0), 0), ((0, -1, 0), -h)]
        else:
            ext = [((0, 0, 1), 0), ((0, 0, -1), -h)]
        p = HPolyhedron(3, tuple(tri + ext))
    else:
        p = simplex(3, rng.randint(2, 4))
    for _ in range(chops):
        if rng.random() < 0.7:
            v = rng.choice(p.vrep.vertices)
            q = chop_corner(p, v, 1)
            if is_delzant_polytope(q) and len(q.minimize().inequalities) > len(p.minimize().inequalities):
                p = q
    p = _transform(p, vertical_shear(rng, 3))
    return p.minimize()


# ---------------------------------------------------------------------------
# random models


def random_primitive_lattice(rng: random.Random, n: int, h: int, bound: int = 2) -> LatticeBasis | None:
    vecs = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(h)]
    try:
        lat = LatticeBasis.from_vectors(vecs, n)
    except ValueError:
        return None
    return saturate(lat)[0]


def random_tall_model(rng: random.Random, max_rank: int = 4, max_h: int = 3,
                      weight_bound: int = 3, base_bound: int = 3) -> ComplexityOneModel:
    """Rejection-sample a valid tall model with a rational base point."""
    while True:
        n = rng.randint(1, max_rank)
        h = rng.randint(0, min(n, max_h))
        if h == 0 and rng.random() < 0.8:
            continue
        lat = random_primitive_lattice(rng, n, h) if h else LatticeBasis.from_vectors([], n, True)
        if lat is None:
            continue
        weights = [[rng.randint(-weight_bound, weight_bound) for _ in range(h)] for _ in range(h + 1)]
        base = [Fraction(rng.randint(-base_bound * 4, base_bound * 4), rng.randint(1, 4))
                for _ in range(n)]
        m = ComplexityOneModel(n, lat, tuple(tuple(w) for w in weights), tuple(base))
        try:
            validate(m)
        except InvalidModel:
            continue
        if is_tall(m):
            return m
