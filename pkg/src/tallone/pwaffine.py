"""Piecewise-affine functions on finite polyhedral complexes."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError, TalloneError
from .exactla import LatticeBasis, dot
from .polyhedra import HPolyhedron, Point, as_point, face_lattice, simplex_volume, triangulate


class OutsideDomain(InputError):
    pass


class EmptyIntersection(InputError):
    pass


class DomainMismatch(InputError):
    pass


class NotAffineNearPoint(TalloneError):
    pass


class SlopeNotIntegral(TalloneError):
    pass


@dataclass(frozen=True)
class AffineCell:
    """``x -> slope . x + constant`` on the polyhedron ``carrier``."""

    carrier: HPolyhedron
    slope: tuple
    constant: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", tuple(Fraction(s) for s in self.slope))
        object.__setattr__(self, "constant", Fraction(self.constant))

    def value(self, x: Sequence) -> Fraction:
        return dot(self.slope, x) + self.constant


@dataclass(frozen=True)
class AffineGerm:
    slope: tuple
    constant: Fraction

    def value(self, x: Sequence) -> Fraction:
        return dot(self.slope, x) + self.constant


@dataclass(frozen=True)
class PiecewiseAffineFn:
    """A function given by affine data on full-dimensional cells.

    Cells cover ``domain`` and may only overlap in lower-dimensional sets.
    Agreement on overlaps is not assumed; :func:`is_continuous` checks it.
    """

    ambient_dim: int
    cells: tuple
    domain: HPolyhedron

    @classmethod
    def affine(cls, domain: HPolyhedron, slope: Sequence, constant) -> PiecewiseAffineFn:
        return cls(domain.dim, (AffineCell(domain, tuple(slope), Fraction(constant)),), domain)

    def cells_at(self, x: Sequence) -> list[AffineCell]:
        x = as_point(x)
        return [c for c in self.cells if c.carrier.contains(x)]

    def __call__(self, x: Sequence) -> Fraction:
        return self.eval(x)

    def eval(self, x: Sequence) -> Fraction:
        """Value at ``x``; on a shared boundary the first containing cell wins."""
        x = as_point(x)
        if not self.domain.contains(x):
            raise OutsideDomain(f"{[str(t) for t in x]} is outside the domain")
        for c in self.cells:
            if c.carrier.contains(x):
                return c.value(x)
        raise OutsideDomain(f"{[str(t) for t in x]} is not covered by any cell")

    def scale(self, k) -> PiecewiseAffineFn:
        k = Fraction(k)
        return PiecewiseAffineFn(self.ambient_dim, tuple(
            AffineCell(c.carrier, tuple(k * s for s in c.slope), k * c.constant)
            for c in self.cells), self.domain)

    def near(self, x: Sequence) -> PiecewiseAffineFn:
        """Only the cells containing ``x``; same germ at ``x``."""
        return PiecewiseAffineFn(self.ambient_dim, tuple(self.cells_at(x)), self.domain)

    def restrict(self, region: HPolyhedron) -> PiecewiseAffineFn:
        cells = []
        for c in self.cells:
            car = c.carrier.intersect(region)
            if car.is_full_dimensional:
                cells.append(AffineCell(car, c.slope, c.constant))
        return PiecewiseAffineFn(self.ambient_dim, tuple(cells), self.domain.intersect(region))


def combine(f: PiecewiseAffineFn, g: PiecewiseAffineFn, cf=1, cg=1) -> PiecewiseAffineFn:
    """``cf*f + cg*g`` on the intersection of the domains (common refinement)."""
    if f.ambient_dim != g.ambient_dim:
        raise ValueError("dimension mismatch")
    cf, cg = Fraction(cf), Fraction(cg)
    domain = f.domain.intersect(g.domain)
    if domain.is_empty:
        raise EmptyIntersection("the domains do not meet")
    cells = []
    for a in f.cells:
        for b in g.cells:
            car = a.carrier.intersect(b.carrier)
            if car.is_full_dimensional:
                slope = tuple(cf * x + cg * y for x, y in zip(a.slope, b.slope))
                cells.append(AffineCell(car, slope, cf * a.constant + cg * b.constant))
    return PiecewiseAffineFn(f.ambient_dim, tuple(cells), domain)


def subtract(f: PiecewiseAffineFn, g: PiecewiseAffineFn) -> PiecewiseAffineFn:
    return combine(f, g, 1, -1)


def is_integral_affine_near(f: PiecewiseAffineFn, alpha: Sequence,
                            lattice: LatticeBasis | None = None) -> AffineGerm:
    """Germ of ``f`` at ``alpha`` if it is affine there with slope in the dual
    of ``lattice``; raises otherwise."""
    alpha = as_point(alpha)
    near = [c for c in f.cells if c.carrier.contains(alpha)]
    if not near:
        raise OutsideDomain(f"{[str(t) for t in alpha]} is not in any cell")
    slope = near[0].slope
    value = near[0].value(alpha)
    for c in near[1:]:
        if c.slope != slope or c.value(alpha) != value:
            raise NotAffineNearPoint("cells at the point carry different affine data")
    if lattice is None:
        lattice = LatticeBasis.standard(f.ambient_dim)
    for v in lattice.vectors():
        if Fraction(dot(slope, v)).denominator != 1:
            raise SlopeNotIntegral("slope does not pair integrally with the lattice")
    return AffineGerm(slope, value - dot(slope, alpha))


def _cell_difference_zero(a: AffineCell, b: AffineCell, car: HPolyhedron) -> bool:
    return all(a.value(v) == b.value(v) for v in car.vrep.vertices) and (
        not car.vrep.rays or a.slope == b.slope)


def ae_equal(f: PiecewiseAffineFn, g: PiecewiseAffineFn) -> bool:
    """Equality almost everywhere on a common domain."""
    if not (f.domain.same_set(g.domain)):
        raise DomainMismatch("functions have different domains")
    for a in f.cells:
        for b in g.cells:
            car = a.carrier.intersect(b.carrier)
            if car.is_full_dimensional and a.slope != b.slope:
                return False
            if car.is_full_dimensional and not _cell_difference_zero(a, b, car):
                return False
    return True


def is_continuous(f: PiecewiseAffineFn) -> bool:
    """Adjacent cells agree on every common point."""
    cells = f.cells
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            meet = cells[i].carrier.intersect(cells[j].carrier)
            if meet.is_empty:
                continue
            v = meet.vrep
            if any(cells[i].value(p) != cells[j].value(p) for p in v.vertices):
                return False
            for r in list(v.rays) + list(v.lineality):
                if dot(cells[i].slope, r) != dot(cells[j].slope, r):
                    return False
    return True


def integrate(f: PiecewiseAffineFn) -> Fraction:
    """Exact Lebesgue integral over bounded cells."""
    total = Fraction(0)
    for c in f.cells:
        for s in triangulate(c.carrier):
            vol = simplex_volume(s)
            if vol:
                total += vol * sum((c.value(v) for v in s), Fraction(0)) / len(s)
    return total


def checkpoint_points(f: PiecewiseAffineFn) -> list[Point]:
    """Relative-interior points of every face of every cell."""
    out = []
    for c in f.cells:
        for face in face_lattice(c.carrier):
            out.append(face.relint_point)
    return list(dict.fromkeys(out))
