"""Labelled polyhedral skeletons and the two compatibility checks.

A skeleton is a finite set of closed cells.  Each cell is a bounded
polyhedron in its own coordinates with an affine map ``pi`` into ``R^n`` and
a local model label (stored without base point).  Incidences glue a face of
one cell onto another whole cell.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import InputError
from .exactla import LatticeBasis, dot, rank, solve
from .model import (
    ComplexityOneModel,
    InvalidModel,
    TruncationSpec,
    complementary_circle,
    dh_truncation,
    g_lattices,
    is_center_exceptional,
    is_tall,
    moment_cone,
)
from .model import validate as validate_model
from .polyhedra import (
    DimensionTooLarge,
    HPolyhedron,
    Point,
    as_point,
    cone_equal,
    face_lattice,
    tangent_cone,
)
from .pwaffine import (
    NotAffineNearPoint,
    OutsideDomain,
    PiecewiseAffineFn,
    SlopeNotIntegral,
    checkpoint_points,
    combine,
    is_integral_affine_near,
)


class SkeletonError(InputError):
    pass


class NonInjectivePi(SkeletonError):
    pass


class LabelNotTall(SkeletonError):
    pass


class LabelNotExceptional(SkeletonError):
    pass


class IncidenceMismatch(SkeletonError):
    pass


def parallel_map(fn: Callable, items: Iterable) -> list:
    """Order-preserving map, threaded when ``TALLONE_THREADS`` > 1."""
    items = list(items)
    try:
        threads = int(os.environ.get("TALLONE_THREADS", "1"))
    except ValueError:
        threads = 1
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


@dataclass(frozen=True)
class SkeletonCell:
    carrier: HPolyhedron
    pi_linear: tuple
    pi_offset: tuple
    label: ComplexityOneModel

    def __post_init__(self):
        object.__setattr__(self, "pi_linear", tuple(tuple(int(x) for x in r) for r in self.pi_linear))
        object.__setattr__(self, "pi_offset", as_point(self.pi_offset))

    def pi(self, x: Sequence) -> Point:
        return tuple(dot(r, x) + c for r, c in zip(self.pi_linear, self.pi_offset))

    @cached_property
    def _image(self) -> HPolyhedron:
        return HPolyhedron.from_generators(len(self.pi_offset),
                                           [self.pi(v) for v in self.carrier.vrep.vertices])

    def image(self) -> HPolyhedron:
        return self._image

    @cached_property
    def _chart(self) -> tuple:
        """Base vertex, direction basis and the matrix of ``pi`` on it."""
        verts = self.carrier.vrep.vertices
        v0 = verts[0]
        basis: list = []
        for v in verts[1:]:
            d = [a - b for a, b in zip(v, v0)]
            if rank(basis + [d]) > len(basis):
                basis.append(d)
        mat = [[dot(r, d) for d in basis] for r in self.pi_linear]
        return v0, basis, mat

    def preimage(self, alpha: Sequence) -> Point | None:
        """The point of the carrier over ``alpha`` (pi is injective on it)."""
        alpha = as_point(alpha)
        if not self._image.contains(alpha):
            return None
        v0, basis, mat = self._chart
        rhs = [a - b for a, b in zip(alpha, self.pi(v0))]
        if not basis:
            return v0
        c = solve(mat, rhs)
        x = tuple(x + sum((ci * d[k] for ci, d in zip(c, basis)), Fraction(0))
                  for k, x in enumerate(v0))
        if self.carrier.contains(x):
            return x
        # pi not injective here: fall back to an exact search in the carrier
        eqs = tuple((r, a - o) for r, a, o in zip(self.pi_linear, alpha, self.pi_offset))
        sol = self.carrier.with_constraints(eqs=eqs)
        return None if sol.is_empty else sol.relint_point()

    def face(self, active: Sequence[int]) -> HPolyhedron:
        c = self.carrier
        ineqs = tuple(q for i, q in enumerate(c.inequalities) if i not in set(active))
        eqs = c.equalities + tuple(c.inequalities[i] for i in active)
        return HPolyhedron(c.dim, ineqs, eqs)


@dataclass(frozen=True)
class Incidence:
    """Face ``face`` (carrier inequality indices) of ``cell`` is the cell ``target``."""

    cell: int
    face: tuple
    target: int


@dataclass(frozen=True)
class SkeletonComplex:
    rank: int
    cells: tuple = ()
    incidences: tuple = ()

    def cell_dim(self, i: int) -> int:
        return self.cells[i].carrier.dimension


@dataclass(frozen=True)
class SkeletonReport:
    ok: bool
    problems: tuple = ()


def validate(s: SkeletonComplex, strict: bool = True) -> SkeletonReport:
    """Structural checks on cells, labels and incidences."""
    problems: list[tuple[type, str]] = []
    for idx, c in enumerate(s.cells):
        if len(c.pi_offset) != s.rank or any(len(r) != c.carrier.dim for r in c.pi_linear):
            problems.append((SkeletonError, f"cell {idx}: pi has the wrong shape"))
            continue
        if c.carrier.is_empty or not c.carrier.is_bounded:
            problems.append((SkeletonError, f"cell {idx}: carrier must be nonempty and bounded"))
            continue
        verts = c.carrier.vrep.vertices
        dirs = [[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]
        img = [[dot(r, d) for r in c.pi_linear] for d in dirs]
        if dirs and rank(img) != rank(dirs):
            problems.append((NonInjectivePi, f"cell {idx}: pi is not injective on the carrier"))
        try:
            if c.label.rank != s.rank:
                raise InvalidModel("label rank differs from the skeleton rank")
            validate_model(c.label)
            if not is_tall(c.label):
                problems.append((LabelNotTall, f"cell {idx}: label is not tall"))
            elif not is_center_exceptional(c.label):
                problems.append((LabelNotExceptional, f"cell {idx}: label is not exceptional"))
        except InvalidModel as e:
            problems.append((type(e), f"cell {idx}: {e}"))
    for inc in s.incidences:
        if not (0 <= inc.cell < len(s.cells) and 0 <= inc.target < len(s.cells)):
            problems.append((IncidenceMismatch, f"incidence {inc}: bad cell index"))
            continue
        src, tgt = s.cells[inc.cell], s.cells[inc.target]
        if any(not 0 <= i < len(src.carrier.inequalities) for i in inc.face):
            problems.append((IncidenceMismatch, f"incidence {inc}: bad face index"))
            continue
        face = src.face(inc.face)
        if face.is_empty:
            problems.append((IncidenceMismatch, f"incidence {inc}: face is empty"))
            continue
        fimg = HPolyhedron.from_generators(s.rank, [src.pi(v) for v in face.vrep.vertices])
        if not fimg.same_set(tgt.image()):
            problems.append((IncidenceMismatch, f"incidence {inc}: images differ"))
    if problems and strict:
        kind, msg = problems[0]
        raise kind(msg)
    return SkeletonReport(not problems, tuple(m for _, m in problems))


@dataclass(frozen=True)
class FiberPoint:
    cell: int
    point: Point
    label: ComplexityOneModel


def fiber(s: SkeletonComplex, alpha: Sequence) -> list[FiberPoint]:
    """Points of the skeleton over ``alpha``, one per glued point."""
    alpha = as_point(alpha)
    hits: dict[int, Point] = {}
    for idx, c in enumerate(s.cells):
        x = c.preimage(alpha)
        if x is not None:
            hits[idx] = x
    dropped = set()
    for inc in s.incidences:
        if inc.cell in hits and inc.target in hits:
            a = inc.cell
            if s.cells[a].face(inc.face).contains(hits[a]):
                dropped.add(a)
    return [FiberPoint(i, hits[i], s.cells[i].label) for i in sorted(hits) if i not in dropped]


def image_pieces(s: SkeletonComplex) -> list[HPolyhedron]:
    return [c.image() for c in s.cells]


def _add_points(out: dict, poly: HPolyhedron) -> None:
    if poly.is_empty:
        return
    out.setdefault(poly.relint_point(), None)
    for v in poly.vrep.vertices:
        out.setdefault(v, None)


def checkpoints(s: SkeletonComplex, delta: HPolyhedron, for_rho: bool = False,
                rho: PiecewiseAffineFn | None = None) -> list[Point]:
    """Finite set of points on which the germ conditions are decided.

    For each cell image and each face of ``delta`` the piece where they meet
    contributes its vertices and one relative interior point.  The set for
    the DH check also covers faces of delta, faces of cell images, pairwise
    meetings of cell images and the faces of the cells of ``rho``.
    """
    out: dict = {}
    dfaces = [f.as_polyhedron(delta) for f in face_lattice(delta)]
    images = image_pieces(s)
    for img in images:
        for g in dfaces:
            _add_points(out, img.intersect(g))
    if for_rho:
        for g in dfaces:
            _add_points(out, g)
        for img in images:
            for f in face_lattice(img):
                out.setdefault(f.relint_point, None)
        for i in range(len(images)):
            for j in range(i + 1, len(images)):
                _add_points(out, images[i].intersect(images[j]))
        if rho is not None:
            for p in checkpoint_points(rho):
                out.setdefault(p, None)
        out = {p: None for p in out if delta.contains(p)}
    return sorted(out)


@dataclass(frozen=True)
class CheckRecord:
    point: Point
    cells: tuple
    passed: bool
    detail: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class CompatReport:
    kind: str
    records: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]


def check_delta_compat(s: SkeletonComplex, delta: HPolyhedron) -> CompatReport:
    """Tangent cone of ``delta`` equals the label's moment cone at every
    skeleton point over every checkpoint."""

    def check(alpha):
        pts = fiber(s, alpha)
        tc = tangent_cone(delta, alpha) if delta.contains(alpha) else None
        detail: dict = {}
        ok = True
        for fp in pts:
            mc = moment_cone(fp.label, alpha)
            if tc is None or not cone_equal(tc, mc):
                ok = False
                detail = {"cell": fp.cell, "tangent_cone": tc, "moment_cone": mc}
                break
        return CheckRecord(alpha, tuple(p.cell for p in pts), ok, detail)

    return CompatReport("delta", tuple(parallel_map(check, checkpoints(s, delta))))


def local_dh_sum(s: SkeletonComplex, alpha: Sequence, kappa=1,
                 shift: Sequence[int] | None = None) -> PiecewiseAffineFn | None:
    """Sum of the truncation DH functions of the labels over ``alpha``.

    ``shift`` replaces each complementary circle ``j`` by ``j + i_T(shift)``.
    """
    total = None
    for fp in fiber(s, alpha):
        label = fp.label.at(alpha)
        j = complementary_circle(label)
        if shift is not None:
            j = tuple(a + b for a, b in zip(j, g_lattices(label).i_t(shift)))
        f = dh_truncation(label, TruncationSpec(j, kappa)).near(alpha)
        total = f if total is None else combine(total, f)
    return total


def check_rho_compat(s: SkeletonComplex, delta: HPolyhedron, rho: PiecewiseAffineFn,
                     lattice: LatticeBasis | None = None, kappa=1,
                     shift: Sequence[int] | None = None) -> CompatReport:
    """``rho`` minus the local truncation DH functions is integral affine
    near every checkpoint."""

    def check(alpha):
        local = local_dh_sum(s, alpha, kappa, shift)
        cells = tuple(p.cell for p in fiber(s, alpha))
        near = rho.near(alpha)
        diff = near if local is None else combine(near, local.near(alpha), 1, -1)
        try:
            germ = is_integral_affine_near(diff, alpha, lattice)
        except (NotAffineNearPoint, SlopeNotIntegral, OutsideDomain) as e:
            return CheckRecord(alpha, cells, False, {"error": type(e).__name__, "message": str(e)})
        return CheckRecord(alpha, cells, True, {"slope": germ.slope, "constant": germ.constant})

    pts = checkpoints(s, delta, for_rho=True, rho=rho)
    return CompatReport("rho", tuple(parallel_map(check, pts)))


# ---------------------------------------------------------------------------
# homology


def _rank_mod2(rows: list[list[int]]) -> int:
    rows = [[x % 2 for x in r] for r in rows]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def _endpoints(c: SkeletonCell) -> tuple[Point, Point]:
    v = sorted(c.carrier.vrep.vertices)
    return v[0], v[-1]


def boundary_matrices(s: SkeletonComplex) -> tuple[list, list, list, list[list[int]], list[list[int]]]:
    """Cells by dimension and the oriented boundary maps ``d1`` and ``d2``."""
    dims = [s.cell_dim(i) for i in range(len(s.cells))]
    if any(d > 2 for d in dims):
        raise DimensionTooLarge("homology is implemented for cells of dimension at most 2")
    by_dim = [[i for i, d in enumerate(dims) if d == k] for k in range(3)]
    pos = [{c: r for r, c in enumerate(cs)} for cs in by_dim]
    d1 = [[0] * len(by_dim[1]) for _ in by_dim[0]]
    d2 = [[0] * len(by_dim[2]) for _ in by_dim[1]]
    for inc in s.incidences:
        src, tgt = s.cells[inc.cell], s.cells[inc.target]
        if dims[inc.cell] == 1 and dims[inc.target] == 0:
            lo, hi = _endpoints(src)
            face_pt = src.face(inc.face).relint_point()
            d1[pos[0][inc.target]][pos[1][inc.cell]] += 1 if face_pt == hi else -1
        elif dims[inc.cell] == 2 and dims[inc.target] == 1:
            d2[pos[1][inc.target]][pos[2][inc.cell]] += _edge_sign(src, inc, tgt)
    return by_dim[0], by_dim[1], by_dim[2], d1, d2


def _edge_sign(face_cell: SkeletonCell, inc: Incidence, edge: SkeletonCell) -> int:
    """+1 if the edge orientation runs anticlockwise around the 2-cell."""
    verts = face_cell.carrier.vrep.vertices
    p0 = verts[0]
    dirs = [[a - b for a, b in zip(v, p0)] for v in verts[1:]]
    basis = []
    for d in dirs:
        if rank(basis + [d]) > len(basis):
            basis.append(d)
        if len(basis) == 2:
            break
    cols = [[basis[0][i], basis[1][i]] for i in range(len(p0))]

    def plane(x):
        return solve(cols, [a - b for a, b in zip(x, p0)])

    centre = plane(face_cell.carrier.relint_point())
    lo, hi = _endpoints(edge)
    face = face_cell.face(inc.face)
    fv = face.vrep.vertices
    a = next(v for v in fv if face_cell.pi(v) == edge.pi(lo))
    b = next(v for v in fv if face_cell.pi(v) == edge.pi(hi))
    pa, pb = plane(a), plane(b)
    d = (pb[0] - pa[0], pb[1] - pa[1])
    w = (centre[0] - pa[0], centre[1] - pa[1])
    cross = d[0] * w[1] - d[1] * w[0]
    return 1 if cross > 0 else -1


def betti(s: SkeletonComplex) -> tuple[int, int, int]:
    """``(b0, b1)`` over the rationals and ``b2`` over the two-element field."""
    c0, c1, c2, d1, d2 = boundary_matrices(s)
    r1 = rank(d1) if c0 and c1 else 0
    r2 = rank(d2) if c1 and c2 else 0
    r2_mod2 = _rank_mod2(d2) if c1 and c2 else 0
    return len(c0) - r1, len(c1) - r1 - r2, len(c2) - r2_mod2


def union_equal_1d(pieces: Sequence[HPolyhedron], target: Sequence[HPolyhedron]) -> bool:
    """Set equality of two finite unions of points and segments."""
    return _covered(pieces, target) and _covered(target, pieces)


def _covered(pieces: Sequence[HPolyhedron], target: Sequence[HPolyhedron]) -> bool:
    for p in pieces:
        if p.is_empty:
            continue
        if p.dimension > 1:
            raise DimensionTooLarge("only points and segments are supported")
        v = sorted(p.vrep.vertices)
        if len(v) == 1:
            if not any(t.contains(v[0]) for t in target):
                return False
            continue
        a, b = v[0], v[-1]
        d = [y - x for x, y in zip(a, b)]
        k = next(i for i, x in enumerate(d) if x)
        spans = []
        for t in target:
            q = p.intersect(t)
            if q.is_empty:
                continue
            ts = [(w[k] - a[k]) / d[k] for w in q.vrep.vertices]
            spans.append((min(ts), max(ts)))
        spans.sort()
        reach = Fraction(0)
        for lo, hi in spans:
            if lo > reach:
                return False
            reach = max(reach, hi)
        if reach < 1:
            return False
    return True
