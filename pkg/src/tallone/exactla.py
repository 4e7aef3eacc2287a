"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`; there is
no floating point anywhere.  Matrices are passed around either as
:class:`IntMatrix` values or as plain lists of rows, and all functions return
fresh objects.

Conventions
-----------
* A lattice is described by the columns of an integer matrix (see
  :class:`LatticeBasis`).
* :func:`hnf` is the *column* Hermite normal form: ``m @ u == h`` with ``u``
  unimodular and ``h`` lower-triangular echelon.
* :func:`snf` returns ``(s, u, v)`` with ``u @ m @ v == s``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from operator import mul
from typing import Iterable, Sequence

from .errors import TalloneError


class VectorsNotInLattice(TalloneError):
    pass


class NotPrimitive(TalloneError):
    pass


# ---------------------------------------------------------------------------
# small helpers


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def content(vec: Iterable[int]) -> int:
    g = 0
    for a in vec:
        g = gcd(g, int(a))
    return g


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = content(vec)
    if g == 0:
        return tuple(int(a) for a in vec)
    return tuple(int(a) // g for a in vec)


def clear_denominators(vec: Sequence) -> tuple[tuple[int, ...], int]:
    """Return ``(w, d)`` with ``w = d * vec`` integral and ``d > 0`` minimal."""
    d = 1
    for a in vec:
        a = Fraction(a)
        d = d * a.denominator // gcd(d, a.denominator)
    return tuple(int(Fraction(a) * d) for a in vec), d


def primitive_rational(vec: Sequence) -> tuple[int, ...]:
    """Smallest positive integer multiple direction of a rational vector."""
    w, _ = clear_denominators(vec)
    return primitive(w)


def dot(a: Sequence, b: Sequence):
    return sum(map(mul, a, b))


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# IntMatrix


@dataclass(frozen=True)
class IntMatrix:
    """Immutable arbitrary-precision integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows * self.cols != len(self.entries):
            raise ValueError("rows * cols must equal the number of entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix")
            for a in r:
                if isinstance(a, Fraction):
                    if a.denominator != 1:
                        raise ValueError(f"non-integer entry {a}")
                    a = a.numerator
                flat.append(int(a))
        return cls(len(rows), cols, tuple(flat))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        columns = [list(c) for c in columns]
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], cols=len(columns))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix.from_rows([list(self.col(j)) for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            return IntMatrix.from_rows(matmul(self.tolist(), other.tolist()), cols=other.cols)
        return tuple(dot(self.row(i), other) for i in range(self.rows))

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return int(det(self.tolist()))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()})"


def _as_rows(m) -> list[list]:
    if isinstance(m, IntMatrix):
        return m.tolist()
    return [list(r) for r in m]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def transpose(a: Sequence[Sequence], cols: int | None = None) -> list[list]:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(c) for c in zip(*a)]


# ---------------------------------------------------------------------------
# rational linear algebra


def rref(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns ``(rows, pivot_columns)``."""
    a = [[Fraction(x) for x in r] for r in m]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    m = _as_rows(m)
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def det(m: Sequence[Sequence]):
    """Exact determinant by fraction Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in _as_rows(m)]
    n = len(a)
    result = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return 0
        if p != k:
            a[k], a[p] = a[p], a[k]
            result = -result
        result *= a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / a[k][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return result.numerator if result.denominator == 1 else result


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the rational right kernel ``{x : m x = 0}``."""
    m = _as_rows(m)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if not m:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    a, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -a[r][f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One exact solution of ``a x = b`` (free variables set to 0), or None."""
    a = _as_rows(a)
    nrows = len(a)
    if nrows == 0:
        return None if any(b) else []
    ncols = len(a[0])
    aug = [list(a[i]) + [b[i]] for i in range(nrows)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        x[p] = red[r][ncols]
    return x


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    m = _as_rows(m)
    n = len(m)
    aug = [list(m[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def integer_inverse(m) -> list[list[int]]:
    """Inverse of a unimodular integer matrix, as integers."""
    inv = inverse(m)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


# ---------------------------------------------------------------------------
# normal forms


def _col_op_combine(a: list[list[int]], u: list[list[int]], i: int, k: int, j: int) -> None:
    """Column operations making ``a[i][j] == 0`` and ``a[i][k] == gcd``."""
    x_k, x_j = a[i][k], a[i][j]
    if x_j == 0:
        return
    if x_k != 0 and x_j % x_k == 0:
        q = x_j // x_k
        for mat in (a, u):
            for row in mat:
                row[j] -= q * row[k]
        return
    g, x, y = egcd(x_k, x_j)
    p, q = -x_j // g, x_k // g
    for mat in (a, u):
        for row in mat:
            ck, cj = row[k], row[j]
            row[k] = x * ck + y * cj
            row[j] = p * ck + q * cj


def hnf(m) -> tuple[IntMatrix, IntMatrix]:
    """Column Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``m @ u == h``.  ``h`` is
    lower-triangular echelon: the pivot of each nonzero column lies strictly
    below the pivot of the previous one, pivots are positive, and the entries
    to the left of a pivot (in its row) lie in ``[0, pivot)``.  Zero columns
    come last.
    """
    rows = _as_rows(m)
    nrows = len(rows)
    ncols = m.cols if isinstance(m, IntMatrix) else (len(rows[0]) if rows else 0)
    a = [[int(x) for x in r] for r in rows]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    k = 0
    for i in range(nrows):
        if k == ncols:
            break
        for j in range(k + 1, ncols):
            _col_op_combine(a, u, i, k, j)
        if a[i][k] == 0:
            nz = next((j for j in range(k + 1, ncols) if a[i][j] != 0), None)
            if nz is None:
                continue
        if a[i][k] < 0:
            for mat in (a, u):
                for row in mat:
                    row[k] = -row[k]
        piv = a[i][k]
        for j in range(k):
            q = a[i][j] // piv
            if q:
                for mat in (a, u):
                    for row in mat:
                        row[j] -= q * row[k]
        k += 1
    return IntMatrix.from_rows(a, cols=ncols), IntMatrix.from_rows(u, cols=ncols)


def snf(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: ``(s, u, v)`` with ``u @ m @ v == s``.

    ``s`` is diagonal with nonnegative entries ``d1 | d2 | ...``.
    """
    rows = _as_rows(m)
    nrows = len(rows)
    ncols = m.cols if isinstance(m, IntMatrix) else (len(rows[0]) if rows else 0)
    a = [[int(x) for x in r] for r in rows]
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)]
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for mat in (a, v):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row dst += f * row src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for mat in (a, v):
            for row in mat:
                row[dst] += f * row[src]

    t = 0
    while t < min(nrows, ncols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nrows) for j in range(t, ncols) if a[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            done = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, nrows) for j in range(t + 1, ncols)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (IntMatrix.from_rows(a, cols=ncols), IntMatrix.from_rows(u, cols=nrows),
            IntMatrix.from_rows(v, cols=ncols))


def invariant_factors(m) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    s, _, _ = snf(m)
    return [s[i, i] for i in range(min(s.rows, s.cols)) if s[i, i] != 0]


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class LatticeBasis:
    """A sublattice of Z^ambient_rank spanned by the columns of ``generators``."""

    ambient_rank: int
    generators: IntMatrix
    primitive: bool = False

    def __post_init__(self):
        if self.generators.rows != self.ambient_rank:
            raise ValueError("generator rows must equal the ambient rank")
        if self.generators.cols and rank(self.generators.tolist()) != self.generators.cols:
            raise ValueError("lattice generators must be linearly independent")

    @classmethod
    def standard(cls, n: int) -> LatticeBasis:
        return cls(n, IntMatrix.identity(n), True)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[int]], ambient_rank: int,
                     primitive: bool = False) -> LatticeBasis:
        return cls(ambient_rank, IntMatrix.from_columns(vectors, ambient_rank), primitive)

    @property
    def rank(self) -> int:
        return self.generators.cols

    def vectors(self) -> list[tuple[int, ...]]:
        return self.generators.columns()

    def coordinates(self, x: Sequence) -> list[Fraction] | None:
        """Rational coordinates of ``x`` in this basis, None if outside the span."""
        return solve(self.generators.tolist(), list(x)) if self.rank else (
            [] if not any(x) else None)

    def contains(self, x: Sequence) -> bool:
        c = self.coordinates(x)
        return c is not None and all(Fraction(t).denominator == 1 for t in c)


def canonical_basis(vectors: Sequence[Sequence[int]], ambient_rank: int,
                    priority: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Canonical basis (column HNF) of the lattice spanned by ``vectors``.

    ``priority`` optionally reorders coordinates before the normal form is
    taken, so that echelon pivots are sought in that order.
    """
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    order = list(priority) if priority is not None else list(range(ambient_rank))
    mat = [[v[i] for v in vectors] for i in order]
    h, _ = hnf(IntMatrix.from_rows(mat, cols=len(vectors)))
    out = []
    for j in range(h.cols):
        c = h.col(j)
        if any(c):
            full = [0] * ambient_rank
            for pos, i in enumerate(order):
                full[i] = c[pos]
            out.append(tuple(full))
    return out


def kernel_basis(m) -> LatticeBasis:
    """Saturated integer kernel ``{x in Z^cols : m x = 0}``."""
    rows = _as_rows(m)
    ncols = m.cols if isinstance(m, IntMatrix) else (len(rows[0]) if rows else 0)
    if not rows:
        return LatticeBasis.standard(ncols)
    h, u = hnf(IntMatrix.from_rows(rows, cols=ncols))
    ker = [u.col(j) for j in range(ncols) if not any(h.col(j))]
    ker = canonical_basis(ker, ncols)
    return LatticeBasis(ncols, IntMatrix.from_columns(ker, ncols), True)


def saturate(b: LatticeBasis) -> tuple[LatticeBasis, int]:
    """Saturation of a lattice and its index over the input lattice."""
    n = b.ambient_rank
    if b.rank == 0:
        return LatticeBasis(n, IntMatrix.zeros(n, 0), True), 1
    s, u, _ = snf(b.generators)
    factors = [s[i, i] for i in range(min(s.rows, s.cols)) if s[i, i] != 0]
    uinv = integer_inverse(u.tolist())
    cols = [[uinv[i][j] for i in range(n)] for j in range(len(factors))]
    index = 1
    for d in factors:
        index *= d
    basis = canonical_basis(cols, n)
    return LatticeBasis(n, IntMatrix.from_columns(basis, n), True), index


def adapted_coordinates(b: LatticeBasis) -> list[list[int]]:
    """Unimodular ``u`` such that ``u @ x`` gives coordinates of ``x`` in a
    basis of Z^n whose first ``b.rank`` vectors span the saturation of ``b``.
    """
    n = b.ambient_rank
    if b.rank == 0:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    _, u, _ = snf(b.generators)
    return u.tolist()


def extends_to_lattice_basis(vectors, lattice: LatticeBasis) -> bool:
    """True iff the columns of ``vectors`` are part of a basis of ``lattice``."""
    if isinstance(vectors, IntMatrix):
        cols = vectors.columns()
    else:
        cols = [tuple(v) for v in vectors]
    if not cols:
        return True
    coords = []
    for v in cols:
        c = lattice.coordinates(v)
        if c is None or any(Fraction(t).denominator != 1 for t in c):
            raise VectorsNotInLattice(f"{list(v)} is not in the lattice")
        coords.append([int(t) for t in c])
    if len(cols) > lattice.rank:
        return False
    mat = [[c[i] for c in coords] for i in range(lattice.rank)]
    factors = invariant_factors(mat)
    return len(factors) == len(cols) and all(d == 1 for d in factors)


def solve_pairing_one(xi: Sequence[int], lattice: LatticeBasis) -> tuple[int, ...]:
    """A lattice vector ``j`` with ``<xi, j> == 1``.

    The choice is deterministic: the first column of the unimodular matrix
    from the column HNF of ``xi`` restricted to the lattice.
    """
    values = [dot(xi, col) for col in lattice.vectors()]
    if not values:
        raise NotPrimitive("the lattice is zero")
    h, u = hnf(IntMatrix.from_rows([values], cols=len(values)))
    if h[0, 0] != 1:
        raise NotPrimitive(f"covector takes values with gcd {h[0, 0]} on the lattice")
    c = u.col(0)
    return tuple(dot(lattice.generators.row(i), c) for i in range(lattice.ambient_rank))


def equation_sublattice(m, ambient: LatticeBasis,
                        priority: Sequence[int] | None = None) -> LatticeBasis:
    """Primitive basis of ``{v in ambient : m v == 0}``."""
    rows = _as_rows(m)
    n = ambient.ambient_rank
    a = ambient.generators.tolist()
    if not rows or all(not any(r) for r in rows):
        vecs = ambient.vectors()
    else:
        ma = matmul(rows, a)
        ker = kernel_basis(IntMatrix.from_rows(ma, cols=ambient.rank))
        vecs = [tuple(dot(a[i], k) for i in range(n)) for k in ker.vectors()]
    vecs = canonical_basis(vecs, n, priority)
    return LatticeBasis(n, IntMatrix.from_columns(vecs, n), True)


def dual_basis(basis: Sequence[Sequence], ambient_rank: int) -> list[list[Fraction]]:
    """Vectors ``g_i`` in the span of ``basis`` with ``<g_i, b_j> == delta_ij``."""
    k = len(basis)
    if k == 0:
        return []
    gram = [[dot(basis[i], basis[j]) for j in range(k)] for i in range(k)]
    ginv = inverse(gram)
    return [[sum(ginv[i][j] * basis[j][c] for j in range(k)) for c in range(ambient_rank)]
            for i in range(k)]
