"""Complexity-one local models ``T x_H C^(h+1) x h^0``.

A model is recorded by the lattice of the connected subtorus ``H`` inside
``Z^n`` (columns of ``B``) and the ``h+1`` isotropy weights of ``H`` on
``C^(h+1)``, written in the chosen basis of ``h_Z``.  The weight matrix ``W``
has the weights as columns.  The torus ``G = T x_H (S^1)^(h+1)`` has dual Lie
algebra ``{(gamma, s) : B^T gamma = W s}`` inside ``R^n x R^(h+1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InputError, TalloneError
from .exactla import (
    IntMatrix,
    LatticeBasis,
    dot,
    dual_basis,
    equation_sublattice,
    inverse,
    invariant_factors,
    kernel_basis,
    saturate,
    solve,
    solve_pairing_one,
)
from .polyhedra import HPolyhedron, as_point
from .pwaffine import AffineCell, PiecewiseAffineFn


class InvalidModel(InputError):
    pass


class NonPrimitiveSubtorus(InvalidModel):
    pass


class NonFaithfulWeights(InvalidModel):
    pass


class NotTall(TalloneError):
    pass


class NonPositiveKappa(InputError):
    pass


class NotComplementary(InputError):
    pass


@dataclass(frozen=True)
class ComplexityOneModel:
    """Subtorus ``H`` of ``T = R^n / Z^n`` with its weights on ``C^(h+1)``.

    ``base_point`` is the image ``alpha`` of the central orbit; ``None`` means
    the origin (skeleton labels are stored this way).
    """

    rank: int
    subtorus: LatticeBasis
    weights: tuple
    base_point: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(tuple(int(x) for x in w) for w in self.weights))
        if self.base_point is not None:
            object.__setattr__(self, "base_point", as_point(self.base_point))

    @classmethod
    def build(cls, rank: int, subtorus: Sequence[Sequence[int]], weights: Sequence[Sequence[int]],
              base_point: Sequence | None = None) -> ComplexityOneModel:
        """``subtorus`` lists the generators of ``h_Z`` as integer vectors."""
        return cls(rank, LatticeBasis.from_vectors(subtorus, rank), tuple(weights), base_point)

    @property
    def h(self) -> int:
        return self.subtorus.rank

    @property
    def alpha(self) -> tuple:
        if self.base_point is None:
            return tuple(Fraction(0) for _ in range(self.rank))
        return self.base_point

    def at(self, alpha: Sequence) -> ComplexityOneModel:
        return ComplexityOneModel(self.rank, self.subtorus, self.weights, as_point(alpha))

    def weight_matrix(self) -> list[list[int]]:
        """``h x (h+1)`` matrix whose columns are the weights."""
        return [[w[i] for w in self.weights] for i in range(self.h)]

    def bt(self) -> list[list[int]]:
        """``B^T``: the restriction map from T-covectors to H-covectors."""
        return [list(v) for v in self.subtorus.vectors()]


@dataclass(frozen=True)
class ValidationReport:
    shape_ok: bool
    subtorus_primitive: bool
    subtorus_index: int
    weights_faithful: bool
    weight_invariant_factors: tuple
    messages: tuple = ()

    @property
    def ok(self) -> bool:
        return self.shape_ok and self.subtorus_primitive and self.weights_faithful


def validate(m: ComplexityOneModel, strict: bool = True) -> ValidationReport:
    """Check that ``H`` is connected and acts faithfully on ``C^(h+1)``.

    With ``strict`` the first failure is raised; otherwise it is reported.
    """
    msgs = []
    h = m.h
    shape_ok = (m.subtorus.ambient_rank == m.rank and len(m.weights) == h + 1
                and all(len(w) == h for w in m.weights)
                and (m.base_point is None or len(m.base_point) == m.rank))
    if not shape_ok:
        msgs.append("expected h+1 weights of length h and a base point of length n")
        if strict:
            raise InvalidModel(msgs[-1])
        return ValidationReport(False, False, 0, False, (), tuple(msgs))
    _, index = saturate(m.subtorus)
    primitive = index == 1
    if not primitive:
        msgs.append(f"subtorus lattice has index {index} in its saturation")
        if strict:
            raise NonPrimitiveSubtorus(msgs[-1])
    if h == 0:
        factors: list[int] = []
        faithful = True
    else:
        factors = invariant_factors(m.weight_matrix())
        faithful = len(factors) == h and all(d == 1 for d in factors)
    if not faithful:
        msgs.append(f"weight matrix has invariant factors {factors}")
        if strict:
            raise NonFaithfulWeights(msgs[-1])
    return ValidationReport(True, primitive, index, faithful, tuple(factors), tuple(msgs))


def _kernel_generator(m: ComplexityOneModel) -> tuple[int, ...]:
    validate(m)
    if m.h == 0:
        return (1,)
    (k,) = kernel_basis(IntMatrix.from_rows(m.weight_matrix(), cols=m.h + 1)).vectors()
    if sum(k) < 0 or (sum(k) == 0 and next(x for x in k if x) < 0):
        k = tuple(-x for x in k)
    return tuple(k)


def is_tall(m: ComplexityOneModel) -> bool:
    """True iff the weights admit a nonzero nonnegative linear relation."""
    return all(x >= 0 for x in _kernel_generator(m))


def defining_exponents(m: ComplexityOneModel) -> tuple[int, ...]:
    """The primitive nonnegative relation ``xi`` with ``sum xi_k eta_k = 0``."""
    k = _kernel_generator(m)
    if any(x < 0 for x in k):
        raise NotTall(f"weight relation {list(k)} has mixed signs")
    return k


def is_center_exceptional(m: ComplexityOneModel) -> bool:
    """True iff H is nontrivial and fixes no coordinate line."""
    validate(m)
    return m.h >= 1 and all(any(w) for w in m.weights)


def moment_cone(m: ComplexityOneModel, alpha: Sequence | None = None) -> HPolyhedron:
    """``alpha + (B^T)^(-1)(cone(eta_0, ..., eta_h))``."""
    validate(m)
    alpha = as_point(alpha) if alpha is not None else m.alpha
    n, h = m.rank, m.h
    if h == 0:
        return HPolyhedron.whole_space(n)
    rays = [w for w in m.weights if any(w)]
    cone = HPolyhedron.from_generators(h, [[0] * h], rays)
    bt = m.bt()
    offset = [-dot(row, alpha) for row in bt]
    return cone.linear_preimage(bt, offset)


@dataclass(frozen=True)
class GLattices:
    """Integral structure of ``g* = {(gamma, s) : B^T gamma = W s}``.

    Elements of ``g*`` are written in ``gstar_basis`` coordinates and elements
    of ``g`` in the dual basis, so the pairing is the dot product.
    """

    gstar_basis: LatticeBasis
    g_basis: tuple
    xi: tuple
    iT: tuple  # rows: gamma-components of the gstar basis vectors

    def coords(self, gamma: Sequence, s: Sequence) -> tuple[Fraction, ...]:
        """``g*`` coordinates of the ambient point ``(gamma, s)``."""
        x = list(gamma) + list(s)
        return tuple(dot(g, x) for g in self.g_basis)

    def point(self, coords: Sequence) -> tuple[Fraction, ...]:
        """Ambient ``(gamma, s)`` vector of ``g*`` coordinates."""
        vecs = self.gstar_basis.vectors()
        n = self.gstar_basis.ambient_rank
        return tuple(sum((Fraction(c) * v[i] for c, v in zip(coords, vecs)), Fraction(0))
                     for i in range(n))

    def i_t(self, v: Sequence) -> tuple:
        """Image in ``g`` of a vector of ``t``."""
        return tuple(dot(row, v) for row in self.iT)

    def i_t_star(self, coords: Sequence) -> tuple:
        """Restriction ``g* -> t*``."""
        n = len(self.iT[0]) if self.iT else 0
        return tuple(sum((Fraction(c) * row[i] for c, row in zip(coords, self.iT)), Fraction(0))
                     for i in range(n))


def g_lattices(m: ComplexityOneModel) -> GLattices:
    xi = defining_exponents(m)
    n, h = m.rank, m.h
    bt = m.bt()
    w = m.weight_matrix()
    rows = [list(bt[i]) + [-x for x in w[i]] for i in range(h)]
    ambient = LatticeBasis.standard(n + h + 1)
    priority = list(range(n, n + h + 1)) + list(range(n))
    gstar = equation_sublattice(rows, ambient, priority) if rows else \
        LatticeBasis.standard(n + 1)
    vecs = gstar.vectors()
    duals = tuple(tuple(g) for g in dual_basis(vecs, n + h + 1))
    xi_c = tuple(dot(g, [0] * n + list(xi)) for g in duals)
    xi_c = tuple(int(c) for c in xi_c)
    it = tuple(tuple(v[:n]) for v in vecs)
    return GLattices(gstar, duals, xi_c, it)


def complementary_circle(m: ComplexityOneModel) -> tuple[int, ...]:
    """Deterministic ``j`` in ``g_Z`` with ``<xi, j> = 1``."""
    gl = g_lattices(m)
    return solve_pairing_one(gl.xi, LatticeBasis.standard(len(gl.xi)))


@dataclass(frozen=True)
class SigmaCell:
    """``sigma(beta) = linear @ beta + offset`` on ``carrier`` (g* coordinates)."""

    index: int
    carrier: HPolyhedron
    linear: tuple
    offset: tuple

    def value(self, beta: Sequence) -> tuple:
        return tuple(dot(row, beta) + c for row, c in zip(self.linear, self.offset))


@dataclass(frozen=True)
class SigmaSection:
    model: ComplexityOneModel
    lattices: GLattices
    j: tuple
    cells: tuple
    domain: HPolyhedron = field(compare=False)

    def __call__(self, beta: Sequence) -> tuple:
        beta = as_point(beta)
        for c in self.cells:
            if c.carrier.contains(beta):
                return c.value(beta)
        raise InputError(f"{[str(b) for b in beta]} is outside the moment cone")


def sigma_section(m: ComplexityOneModel, j: Sequence[int] | None = None) -> SigmaSection:
    """The continuous section of ``i_T^*`` through the boundary of the orthant.

    On the cell where ``s_k = 0`` (one cell for each ``k`` with
    ``xi_k > 0``) it is affine.  The free shift along ``xi`` is fixed so that
    ``<sigma(alpha), j> = 0``.
    """
    gl = g_lattices(m)
    xi = defining_exponents(m)
    if j is None:
        j = solve_pairing_one(gl.xi, LatticeBasis.standard(len(gl.xi)))
    j = tuple(j)
    if dot(gl.xi, j) != 1:
        raise NotComplementary(f"<xi, j> = {dot(gl.xi, j)}, expected 1")
    n, h = m.rank, m.h
    alpha = m.alpha
    bt = m.bt()
    w = m.weight_matrix()
    bt_alpha = [dot(row, alpha) for row in bt]
    s0 = solve(w, bt_alpha) if h else [Fraction(0)]
    s0 = [Fraction(x) for x in s0]
    shift = dot(gl.coords(alpha, s0), j)
    s0 = [x - shift * k for x, k in zip(s0, xi)]
    domain = moment_cone(m)
    cells = []
    for k in range(h + 1):
        if xi[k] == 0:
            continue
        others = [i for i in range(h + 1) if i != k]
        if h:
            sub = [[w[r][c] for c in others] for r in range(h)]
            sinv = inverse(sub)
            lin_s = [[dot(sinv[a], [bt[r][c] for r in range(h)]) for c in range(n)]
                     for a in range(h)]
        else:
            lin_s = []
        # s(beta) = s0 + S_k B^T (beta - alpha); rows of S_k B^T, inserting 0 at k
        full = []
        it = iter(lin_s)
        for i in range(h + 1):
            full.append([Fraction(0)] * n if i == k else next(it))
        carrier_ineqs = tuple((tuple(row), dot(row, alpha)) for row in lin_s)
        carrier = HPolyhedron(n, carrier_ineqs)
        amb_lin = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)] + full
        amb_off = [Fraction(0)] * n + [s0[i] - dot(full[i], alpha) for i in range(h + 1)]
        lin = tuple(tuple(sum((g[r] * amb_lin[r][c] for r in range(n + h + 1)), Fraction(0))
                          for c in range(n)) for g in gl.g_basis)
        off = tuple(dot(g, amb_off) for g in gl.g_basis)
        cells.append(SigmaCell(k, carrier, lin, off))
    return SigmaSection(m, gl, j, tuple(cells), domain)


@dataclass(frozen=True)
class TruncationSpec:
    j: tuple
    kappa: Fraction

    def __post_init__(self):
        object.__setattr__(self, "j", tuple(int(x) for x in self.j))
        object.__setattr__(self, "kappa", Fraction(self.kappa))


def dh_truncation(m: ComplexityOneModel, spec: TruncationSpec) -> PiecewiseAffineFn:
    """DH function ``beta -> kappa - <sigma(beta), j>`` of the truncated model."""
    if spec.kappa <= 0:
        raise NonPositiveKappa(f"kappa must be positive, got {spec.kappa}")
    sig = sigma_section(m, spec.j)
    cells = []
    for c in sig.cells:
        slope = tuple(-sum((Fraction(spec.j[i]) * c.linear[i][col] for i in range(len(spec.j))),
                           Fraction(0)) for col in range(m.rank))
        const = spec.kappa - dot(spec.j, c.offset)
        cells.append(AffineCell(c.carrier, slope, const))
    return PiecewiseAffineFn(m.rank, tuple(cells), sig.domain)
