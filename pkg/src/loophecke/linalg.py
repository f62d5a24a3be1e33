"""Dense exact matrices, incremental spans and trace-form radicals.

Matrices over Q and GF(p) are stored as python-flint ``fmpq_mat`` /
``nmod_mat``; matrices over Q(t) are lists of rows of
:class:`~loophecke.scalars.RationalFunction`.  Vectors are plain lists of
field elements.  "Matrix as vector" always means row-major flattening.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import flint

from .scalars import (
    Field,
    PrimeField,
    PrimeFieldElement,
    RationalField,
    ScalarKindMismatch,
)


class DimensionMismatch(ValueError):
    pass


class EmptyBasis(ValueError):
    pass


class HeuristicResultWarning(UserWarning):
    """A characteristic-zero statement was evaluated over GF(p)."""


# ---------------------------------------------------------------------------
# flint conversion helpers (also used by spanclosure for bulk work)
# ---------------------------------------------------------------------------


def uses_flint(field: Field) -> bool:
    return isinstance(field, (RationalField, PrimeField))


def to_flint_scalar(field: Field, x):
    if isinstance(field, RationalField):
        x = field(x)
        return flint.fmpq(x.numerator, x.denominator)
    return field(x).residue


def from_flint_scalar(field: Field, x):
    if isinstance(field, RationalField):
        return Fraction(int(x.p), int(x.q))
    return PrimeFieldElement(int(x), field.p)


def flint_matrix(field: Field, nrows: int, ncols: int, flat: Sequence):
    """Build a flint matrix from an already-converted flat entry list."""
    if isinstance(field, RationalField):
        return flint.fmpq_mat(nrows, ncols, flat) if flat else flint.fmpq_mat(nrows, ncols)
    if flat:
        return flint.nmod_mat(nrows, ncols, flat, field.p)
    return flint.nmod_mat(nrows, ncols, field.p)


def flint_zero(field: Field):
    return flint.fmpq(0) if isinstance(field, RationalField) else 0


def flint_rref_pivots(m) -> tuple[object, list[int]]:
    """RREF of a flint matrix plus its pivot columns."""
    r, rank = m.rref()
    pivots = []
    col = 0
    ncols = m.ncols()
    for i in range(rank):
        while col < ncols and r[i, col] == 0:
            col += 1
        pivots.append(col)
        col += 1
    return r, pivots


# ---------------------------------------------------------------------------
# Matrix
# ---------------------------------------------------------------------------


class Matrix:
    """Immutable dense matrix over one exact field."""

    __slots__ = ("field", "rows", "cols", "_m")

    def __init__(self, field: Field, entries: Sequence[Sequence]):
        entries = [list(r) for r in entries]
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        if any(len(r) != cols for r in entries):
            raise DimensionMismatch("ragged matrix rows")
        self.field = field
        self.rows = rows
        self.cols = cols
        if uses_flint(field):
            flat = [to_flint_scalar(field, x) for r in entries for x in r]
            self._m = flint_matrix(field, rows, cols, flat)
        else:
            self._m = [[field(x) for x in r] for r in entries]

    @classmethod
    def _wrap(cls, field: Field, m, rows: int, cols: int) -> "Matrix":
        obj = cls.__new__(cls)
        obj.field = field
        obj.rows = rows
        obj.cols = cols
        obj._m = m
        return obj

    @classmethod
    def from_flint(cls, field: Field, m) -> "Matrix":
        return cls._wrap(field, m, m.nrows(), m.ncols())

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        if uses_flint(field):
            return cls._wrap(field, flint_matrix(field, rows, cols, []), rows, cols)
        return cls._wrap(field, [[field.zero] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls.diagonal(field, [1] * n)

    @classmethod
    def diagonal(cls, field: Field, diag: Sequence) -> "Matrix":
        n = len(diag)
        return cls(field, [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_flat(cls, field: Field, rows: int, cols: int, flat: Sequence) -> "Matrix":
        if len(flat) != rows * cols:
            raise DimensionMismatch("flat entry count does not match shape")
        return cls(field, [flat[i * cols:(i + 1) * cols] for i in range(rows)])

    # -- access ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        if uses_flint(self.field):
            return from_flint_scalar(self.field, self._m[i, j])
        return self._m[i][j]

    def tolist(self) -> list[list]:
        if uses_flint(self.field):
            flat = self.flatten()
            return [flat[i * self.cols:(i + 1) * self.cols] for i in range(self.rows)]
        return [list(r) for r in self._m]

    def flatten(self) -> list:
        """Row-major entry list."""
        if uses_flint(self.field):
            if not self.rows or not self.cols:
                return []
            return [from_flint_scalar(self.field, x) for x in self._m.entries()]
        return [x for r in self._m for x in r]

    def flint_entries(self) -> list:
        """Row-major entries in flint's native scalar type (Q / GF(p) only)."""
        if not self.rows or not self.cols:
            return []
        return list(self._m.entries())

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.field != self.field:
            raise ScalarKindMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        if uses_flint(self.field):
            return Matrix._wrap(self.field, self._m + other._m, self.rows, self.cols)
        m = [[a + b for a, b in zip(r, s)] for r, s in zip(self._m, other._m)]
        return Matrix._wrap(self.field, m, self.rows, self.cols)

    def __neg__(self) -> "Matrix":
        if uses_flint(self.field):
            return Matrix._wrap(self.field, -self._m, self.rows, self.cols)
        return Matrix._wrap(self.field, [[-a for a in r] for r in self._m], self.rows, self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        if uses_flint(self.field):
            return Matrix._wrap(self.field, self._m * to_flint_scalar(self.field, c),
                                self.rows, self.cols)
        c = self.field(c)
        return Matrix._wrap(self.field, [[c * a for a in r] for r in self._m], self.rows, self.cols)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            return self @ c
        return self.scale(c)

    __rmul__ = scale

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        if uses_flint(self.field):
            return Matrix._wrap(self.field, self._m * other._m, self.rows, other.cols)
        zero = self.field.zero
        cols_b = list(zip(*other._m)) if other.rows else [()] * other.cols
        out = []
        for r in self._m:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for col in cols_b:
                acc = zero
                for k, a in nz:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix._wrap(self.field, out, self.rows, other.cols)

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse() ** (-k)
        out = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.field != self.field or self.shape != other.shape:
            return False
        return self._m == other._m

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(str, self.flatten()))))

    def is_zero(self) -> bool:
        if uses_flint(self.field):
            return self._m.is_zero() if hasattr(self._m, "is_zero") else all(
                x == 0 for x in self.flint_entries())
        return not any(x for r in self._m for x in r)

    def transpose(self) -> "Matrix":
        if uses_flint(self.field):
            return Matrix._wrap(self.field, self._m.transpose(), self.cols, self.rows)
        return Matrix._wrap(self.field, [list(c) for c in zip(*self._m)], self.cols, self.rows)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def trace(self):
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), self.field.zero)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        full = self.tolist()
        return Matrix(self.field, [[full[i][j] for j in cols] for i in rows])

    def map_entries(self, fn, field: Field | None = None) -> "Matrix":
        field = field or self.field
        return Matrix(field, [[fn(x) for x in r] for r in self.tolist()])

    # -- elimination ---------------------------------------------------------

    def rref(self) -> tuple[list[list], list[int]]:
        """Nonzero rows of the reduced row-echelon form and their pivots."""
        if uses_flint(self.field):
            if not self.rows or not self.cols:
                return [], []
            r, pivots = flint_rref_pivots(self._m)
            flat = Matrix._wrap(self.field, r, self.rows, self.cols).tolist()
            return flat[:len(pivots)], pivots
        return _generic_rref([list(r) for r in self._m], self.field)

    def rank(self) -> int:
        if uses_flint(self.field):
            if not self.rows or not self.cols:
                return 0
            return self._m.rank()
        return len(self.rref()[1])

    def nullspace(self) -> list[list]:
        """Basis of {x : self @ x = 0}, one vector per free column."""
        rows, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in set(pivots)]
        zero, one = self.field.zero, self.field.one
        basis = []
        for f in free:
            v = [zero] * self.cols
            v[f] = one
            for r, p in zip(rows, pivots):
                v[p] = -r[f]
            basis.append(v)
        return basis

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("inverse of a non-square matrix")
        if uses_flint(self.field):
            return Matrix._wrap(self.field, self._m.inv(), self.rows, self.cols)
        n = self.rows
        aug = [list(r) + [self.field.one if i == j else self.field.zero for j in range(n)]
               for i, r in enumerate(self._m)]
        rows, pivots = _generic_rref(aug, self.field)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix._wrap(self.field, [r[n:] for r in rows[:n]], n, n)

    def det(self):
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        if uses_flint(self.field):
            return from_flint_scalar(self.field, self._m.det())
        a = [list(r) for r in self._m]
        n = self.rows
        d = self.field.one
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c]), None)
            if piv is None:
                return self.field.zero
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = -d
            d = d * a[c][c]
            inv = 1 / a[c][c]
            for i in range(c + 1, n):
                f = a[i][c] * inv
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return d

    def eigenvalues(self) -> tuple[set, bool]:
        """Rational eigenvalues of a small Q matrix, and whether the
        characteristic polynomial splits over Q."""
        if not isinstance(self.field, RationalField):
            raise TypeError("eigenvalues() is only provided over QQ")
        cp = self._m.charpoly()
        roots = set()
        degree_found = 0
        for fac, mult in cp.factor()[1]:
            if fac.degree() == 1:
                c = fac.coeffs()
                roots.add(Fraction(-int(c[0].p) * int(c[1].q), int(c[0].q) * int(c[1].p)))
                degree_found += mult
        return roots, degree_found == self.rows

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [self.field.format(x) for x in self.flatten()]}

    @classmethod
    def from_json(cls, data: dict, field: Field) -> "Matrix":
        flat = [field.parse(s) for s in data["entries"]]
        return cls.from_flat(field, data["rows"], data["cols"], flat)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.tolist())
        return f"Matrix[{self.field}]({self.rows}x{self.cols}: {body})"


def _generic_rref(a: list[list], field: Field) -> tuple[list[list], list[int]]:
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a[:r], pivots


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    """(a (x) b)[i*rb + k, j*cb + l] = a[i, j] * b[k, l]."""
    if a.field != b.field:
        raise ScalarKindMismatch(f"{a.field} vs {b.field}")
    al, bl = a.tolist(), b.tolist()
    zero = a.field.zero
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            row = []
            for j in range(a.cols):
                x = al[i][j]
                if x:
                    row.extend(x * y for y in bl[k])
                else:
                    row.extend([zero] * b.cols)
            out.append(row)
    return Matrix(a.field, out)


def direct_sum(*blocks: Matrix) -> Matrix:
    field = blocks[0].field
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    out = [[field.zero] * m for _ in range(n)]
    r = c = 0
    for b in blocks:
        if b.field != field:
            raise ScalarKindMismatch(f"{field} vs {b.field}")
        for i, row in enumerate(b.tolist()):
            out[r + i][c:c + b.cols] = row
        r += b.rows
        c += b.cols
    return Matrix(field, out)


# ---------------------------------------------------------------------------
# SpanBasis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpanBasis:
    """A subspace of field^ambient_dim held as RREF rows with pivots."""

    field: Field
    ambient_dim: int
    rows: tuple = ()
    pivots: tuple = ()

    @classmethod
    def empty(cls, field: Field, ambient_dim: int) -> "SpanBasis":
        return cls(field, ambient_dim)

    @classmethod
    def from_vectors(cls, field: Field, ambient_dim: int, vectors: Iterable[Sequence]) -> "SpanBasis":
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient {ambient_dim}")
        if not vectors:
            return cls.empty(field, ambient_dim)
        rows, pivots = Matrix(field, vectors).rref()
        return cls(field, ambient_dim, tuple(tuple(r) for r in rows), tuple(pivots))

    def dim(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence) -> list:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient {self.ambient_dim}")
        v = [self.field(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def as_matrix(self) -> Matrix:
        if not self.rows:
            return Matrix.zeros(self.field, 0, self.ambient_dim)
        return Matrix(self.field, self.rows)


def span_insert(span: SpanBasis, v: Sequence) -> tuple[SpanBasis, bool]:
    """Add ``v`` to the span; returns the (possibly unchanged) span and
    whether it grew."""
    r = span.reduce(v)
    p = next((j for j, x in enumerate(r) if x), None)
    if p is None:
        return span, False
    inv = 1 / r[p]
    r = tuple(x * inv for x in r)
    rows = []
    for row in span.rows:
        c = row[p]
        rows.append(tuple(x - c * y for x, y in zip(row, r)) if c else row)
    pos = sum(1 for q in span.pivots if q < p)
    rows.insert(pos, r)
    pivots = list(span.pivots)
    pivots.insert(pos, p)
    return SpanBasis(span.field, span.ambient_dim, tuple(rows), tuple(pivots)), True


# ---------------------------------------------------------------------------
# Trace form and products of subspaces
# ---------------------------------------------------------------------------


def kernel_span(gram: Matrix) -> SpanBasis:
    return SpanBasis.from_vectors(gram.field, gram.cols, gram.nullspace())


def trace_form_gram(basis: Sequence[Matrix]) -> Matrix:
    """Gram matrix tr(b_i b_j)."""
    field = basis[0].field
    n = basis[0].rows
    flat = Matrix(field, [b.flatten() for b in basis])
    flat_t = Matrix(field, [b.transpose().flatten() for b in basis])
    if any(b.shape != (n, n) for b in basis):
        raise DimensionMismatch("trace form needs square matrices of one size")
    return flat @ flat_t.transpose()


def trace_form_radical(basis: Sequence[Matrix]) -> SpanBasis:
    """Radical of the trace form on span(basis), in basis coordinates.

    Over a characteristic-zero field this is the Jacobson radical of the
    matrix algebra spanned by ``basis`` (which must be closed and unital).
    """
    if not basis:
        raise EmptyBasis("trace_form_radical needs at least one matrix")
    if basis[0].field.characteristic != 0:
        warnings.warn("trace-form radical over GF(p) is only a heuristic",
                      HeuristicResultWarning, stacklevel=2)
    return kernel_span(trace_form_gram(basis))


def _as_list(x: Union[Matrix, Sequence[Matrix], SpanBasis]) -> list[Matrix]:
    if isinstance(x, Matrix):
        return [x]
    return list(x)


def subspace_product_dim(left, algebra, right) -> int:
    """dim span{ l a r } over spanning sets of the three factors."""
    ls, as_, rs = _as_list(left), _as_list(algebra), _as_list(right)
    field = as_[0].field
    n = as_[0].rows
    for m in ls + rs + as_:
        if m.shape != (n, n):
            raise DimensionMismatch("subspace_product_dim needs square matrices of one size")
    vecs = []
    for l in ls:
        la = [l @ a for a in as_]
        for r in rs:
            vecs.extend((x @ r).flatten() for x in la)
    if not vecs:
        return 0
    return Matrix(field, vecs).rank()
