"""Homology-level painting invariants and comparison of classification data.

Paintings are recorded by what they do on homology.  For a skeleton
homotopy equivalent to a circle, a painting into a genus-one surface is an
element of ``H_1(T^2) = Z^2`` up to ``SL(2, Z)``, whose invariant is the
gcd of the two entries.  Into a sphere every loop is null-homotopic, so
there is one class.  For a skeleton homotopy equivalent to ``S^2`` and a
sphere target the invariant is the degree.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import InputError, TalloneError
from .polyhedra import HPolyhedron
from .pwaffine import DomainMismatch, PiecewiseAffineFn, ae_equal
from .skeleton import SkeletonComplex, betti


class UnsupportedTopology(TalloneError):
    def __init__(self, message: str, betti_numbers=None):
        super().__init__(message)
        self.betti = betti_numbers


class SkeletonMismatch(InputError):
    pass


LOOP = (1, 1, 0)
SPHERE = (1, 0, 1)


@dataclass(frozen=True)
class PaintingData:
    """Painting of ``skeleton`` into a closed oriented surface of ``genus``.

    ``h1_map`` has ``2*genus`` rows in a symplectic basis and one column per
    generator of ``H_1`` of the skeleton.  ``topology`` overrides the Betti
    numbers when no skeleton is attached.
    """

    skeleton: SkeletonComplex | None
    genus: int
    h1_map: tuple | None = None
    degree: int | None = None
    topology: tuple | None = None

    @classmethod
    def loop(cls, genus: int, image=(), skeleton: SkeletonComplex | None = None) -> PaintingData:
        h1 = tuple((int(x),) for x in image) if image else None
        return cls(skeleton, genus, h1, None, None if skeleton else LOOP)

    @classmethod
    def sphere(cls, degree: int, genus: int = 0,
               skeleton: SkeletonComplex | None = None) -> PaintingData:
        return cls(skeleton, genus, None, degree, None if skeleton else SPHERE)

    def betti(self) -> tuple:
        if self.topology is not None:
            return tuple(self.topology)
        if self.skeleton is None:
            raise InputError("a painting needs a skeleton or explicit topology")
        return betti(self.skeleton)


@dataclass(frozen=True)
class PaintingInvariant:
    """``kind`` names the supported case; ``value`` is its integer invariant
    (``None`` when the case has a single class)."""

    kind: str
    value: int | None = None


def _max_cell_dim(p: PaintingData) -> int:
    if p.skeleton is None:
        return 1 if tuple(p.topology or ()) == LOOP else 2
    return max((p.skeleton.cell_dim(i) for i in range(len(p.skeleton.cells))), default=-1)


def painting_invariant(p: PaintingData) -> PaintingInvariant:
    if p.genus < 0:
        raise InputError("genus must be nonnegative")
    b = p.betti()
    if b == (0, 0, 0):
        return PaintingInvariant("empty")
    if b == LOOP and _max_cell_dim(p) <= 1:
        if p.genus == 0:
            return PaintingInvariant("loop-sphere")
        if p.genus == 1:
            if p.h1_map is None or len(p.h1_map) != 2 or any(len(r) != 1 for r in p.h1_map):
                raise InputError("genus one loop painting needs a 2 x 1 h1_map")
            return PaintingInvariant("loop-torus", gcd(abs(p.h1_map[0][0]), abs(p.h1_map[1][0])))
        raise UnsupportedTopology("loop paintings into genus >= 2 are not supported", b)
    if b == SPHERE:
        if p.genus > 0:
            return PaintingInvariant("sphere-positive-genus")
        if p.degree is None:
            raise InputError("a sphere-like painting into S^2 needs a degree")
        return PaintingInvariant("sphere-degree", int(p.degree))
    raise UnsupportedTopology(f"unsupported skeleton topology {b}", b)


def equivalent(p1: PaintingData, p2: PaintingData) -> bool:
    """Homology-level equivalence of two paintings of the same skeleton."""
    if p1.skeleton != p2.skeleton or (p1.skeleton is None and p1.betti() != p2.betti()):
        raise SkeletonMismatch("paintings are defined on different skeletons")
    if p1.genus != p2.genus:
        return False
    return painting_invariant(p1) == painting_invariant(p2)


@dataclass(frozen=True)
class ClassificationRecord:
    delta: HPolyhedron
    rho: PiecewiseAffineFn
    genus: int
    painting: PaintingData


@dataclass(frozen=True)
class RecordVerdict:
    verdict: str  # IsomorphicData, NotIsomorphic or Indeterminate
    delta_equal: bool
    rho_equal: bool
    genus_equal: bool
    painting_equal: bool | None
    message: str = ""


def compare_records(r1: ClassificationRecord, r2: ClassificationRecord) -> RecordVerdict:
    """Compare moment images, DH functions, genera and paintings."""
    delta_eq = r1.delta.dim == r2.delta.dim and r1.delta.same_set(r2.delta)
    try:
        rho_eq = delta_eq and ae_equal(r1.rho, r2.rho)
    except DomainMismatch:
        rho_eq = False
    genus_eq = r1.genus == r2.genus
    paint: bool | None
    msg = ""
    try:
        paint = genus_eq and equivalent(r1.painting, r2.painting)
    except SkeletonMismatch as e:
        paint, msg = False, str(e)
    except UnsupportedTopology as e:
        paint, msg = None, str(e)
    if not (delta_eq and rho_eq and genus_eq) or paint is False:
        verdict = "NotIsomorphic"
    elif paint is None:
        verdict = "Indeterminate"
    else:
        verdict = "IsomorphicData"
    return RecordVerdict(verdict, delta_eq, rho_eq, genus_eq, paint, msg)
