"""Complexity-one spaces obtained from toric ones by forgetting a circle.

The torus ``T`` is the first ``n-1`` coordinate circles of ``T^n`` and the
moment map is composed with the projection dropping the last coordinate.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import InputError, TalloneError
from .exactla import LatticeBasis, canonical_basis, equation_sublattice, invariant_factors, kernel_basis, solve
from .model import ComplexityOneModel
from .polyhedra import Face, HPolyhedron, face_lattice, is_delzant_polytope, project_drop_last
from .pwaffine import PiecewiseAffineFn
from .skeleton import Incidence, SkeletonCell, SkeletonComplex


class NotDelzant(InputError):
    pass


class DisconnectedStabilizer(TalloneError):
    pass


@dataclass(frozen=True)
class ComplexityOneBundle:
    delta: HPolyhedron
    tall: bool
    skeleton: SkeletonComplex
    rho: PiecewiseAffineFn
    genus: int = 0
    polytope: HPolyhedron | None = None


def _check_lattice(lattice: LatticeBasis | None, n: int) -> None:
    if lattice is not None and (lattice.rank != n or
                                lattice.generators.tolist() != LatticeBasis.standard(n).generators.tolist()):
        raise InputError("only the standard lattice is supported; change coordinates first")


def face_model(p: HPolyhedron, f: Face, lattice: LatticeBasis | None = None) -> ComplexityOneModel:
    """Local model of the ``T``-action at orbits over the relative interior of ``f``.

    ``p`` must be irredundant so that the active inequalities are facets.
    """
    n = p.dim
    _check_lattice(lattice, n)
    normals = [p.inequalities[i][0] for i in sorted(f.active_inequalities)]
    c = len(normals)
    last = [u[-1] for u in normals]
    g = 0
    for x in last:
        g = gcd(g, x)
    if g > 1:
        raise DisconnectedStabilizer(f"stabilizer meets T in {g} components")
    if c == 0:
        return ComplexityOneModel.build(n - 1, [], [[]])
    ker = kernel_basis([last]).vectors() if any(last) else [
        tuple(int(i == k) for k in range(c)) for i in range(c)]
    vecs = [tuple(sum(t[i] * normals[i][r] for i in range(c)) for r in range(n - 1))
            for t in ker]
    basis = canonical_basis(vecs, n - 1)
    h = len(basis)
    umat = [[normals[i][r] for i in range(c)] for r in range(n)]
    coeffs = [solve(umat, list(b) + [0]) for b in basis]
    weights = [[int(coeffs[m][i]) for m in range(h)] for i in range(c)]
    weights += [[0] * h for _ in range(h + 1 - c)]
    return ComplexityOneModel.build(n - 1, basis, weights)


def is_exceptional_face(p: HPolyhedron, f: Face, image: HPolyhedron) -> bool:
    """Orbits over ``relint f`` are exceptional: the projection of ``relint f``
    lies in the interior of the image and ``pi(Z^n meet Tf)`` is a proper
    sublattice of ``Z^(n-1)``."""
    n = p.dim
    if not image.in_interior(f.relint_point[:-1]):
        return False
    rows = [p.inequalities[i][0] for i in sorted(f.active_inequalities)]
    tf = equation_sublattice(rows, LatticeBasis.standard(n)) if rows else LatticeBasis.standard(n)
    proj = [list(v[:-1]) for v in tf.vectors()]
    if len(proj) < n - 1:
        return False if n == 1 else True
    mat = [[v[r] for v in proj] for r in range(n - 1)]
    factors = invariant_factors(mat)
    return not (len(factors) == n - 1 and all(d == 1 for d in factors))


def build_projection(p: HPolyhedron, lattice: LatticeBasis | None = None) -> ComplexityOneBundle:
    """Moment image, tallness, skeleton and DH function of the projection."""
    _check_lattice(lattice, p.dim)
    if not is_delzant_polytope(p):
        raise NotDelzant("the polytope is not Delzant")
    q = p.minimize()
    n = q.dim
    proj = project_drop_last(q)
    image = proj.image
    tall = all(proj.fiber_length(v) > 0 for v in image.vrep.vertices)
    faces = face_lattice(q)
    exc = [k for k, f in enumerate(faces) if f.dim < n and is_exceptional_face(q, f, image)]
    vsets = [frozenset(f.vertices) for f in faces]
    closure = sorted({k for k in range(len(faces)) for e in exc if vsets[k] <= vsets[e]},
                     key=lambda k: (faces[k].dim, faces[k].vertices))
    pi_lin = tuple(tuple(int(r == c) for c in range(n)) for r in range(n - 1))
    zero = tuple(0 for _ in range(n - 1))
    index = {k: i for i, k in enumerate(closure)}
    cells = []
    for k in closure:
        cells.append(SkeletonCell(faces[k].as_polyhedron(q), pi_lin, zero, face_model(q, faces[k])))
    incidences = []
    for k in closure:
        for m in closure:
            if faces[m].dim == faces[k].dim - 1 and vsets[m] < vsets[k]:
                carrier = cells[index[k]].carrier
                rel = faces[m].relint_point
                active = tuple(i for i, (a, b) in enumerate(carrier.inequalities)
                               if sum(x * y for x, y in zip(a, rel)) == b)
                incidences.append(Incidence(index[k], active, index[m]))
    skel = SkeletonComplex(n - 1, tuple(cells), tuple(incidences))
    return ComplexityOneBundle(image, tall, skel, proj.fiber_length, 0, q)
