"""Exact dense linear algebra over prime fields GF(p) and the rationals.

Everything downstream (normal forms, Hom spaces, resolutions) reduces to
row operations on dense matrices.  Over GF(p) the data lives in numpy
int64 arrays with entries in [0, p); products of two entries stay far
below 2**63, so arithmetic is exact.  Over the rationals we fall back to
Fraction lists, which is plenty for the small characteristic-zero demos.

Matrices are immutable by convention: no method mutates ``self`` and the
constructors copy their input.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import UsageError

__all__ = [
    "GF",
    "QQ",
    "PrimeField",
    "RationalField",
    "DenseMatrix",
    "RowSpace",
    "rref",
    "kernel_basis",
    "solve",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """The field GF(p) for a prime p."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise UsageError(f"modulus {p} is not prime")
        self.p = p

    @property
    def characteristic(self) -> int:
        return self.p

    def element(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise UsageError(f"denominator of {x} not invertible mod {self.p}")
            return (x.numerator * self.inv(x.denominator % self.p)) % self.p
        return int(x) % self.p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class RationalField:
    """The field of rational numbers (exact Fractions)."""

    @property
    def characteristic(self) -> int:
        return 0

    def element(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, x):
        return 1 / Fraction(x)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_of_characteristic(char: int):
    return QQ if char == 0 else GF(char)


def _rref_gfp(a: np.ndarray, p: int):
    """In-place rref of an int64 array mod p.  Returns (pivots, rank)."""
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r])) % p
        pivots.append(c)
        r += 1
    return pivots, r


def _rref_qq(rows, n):
    """rref of a list of Fraction lists.  Returns (rows, pivots, rank)."""
    rows = [list(row) for row in rows]
    m = len(rows)
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        pr = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        if inv != 1:
            rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots, r


class DenseMatrix:
    """Immutable dense matrix over GF(p) or QQ."""

    __slots__ = ("field", "nrows", "ncols", "_a")

    def __init__(self, field, data, _internal=False):
        self.field = field
        if _internal:
            self._a = data
        elif isinstance(field, PrimeField):
            arr = np.array(data, dtype=np.int64)
            if arr.ndim != 2:
                raise UsageError("matrix data must be two-dimensional")
            self._a = arr % field.p
        else:
            self._a = [[Fraction(x) for x in row] for row in data]
        if isinstance(field, PrimeField):
            self.nrows, self.ncols = self._a.shape
        else:
            self.nrows = len(self._a)
            self.ncols = len(self._a[0]) if self._a else 0
            if any(len(row) != self.ncols for row in self._a):
                raise UsageError("ragged matrix data")

    # -- constructors ------------------------------------------------

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int) -> "DenseMatrix":
        if isinstance(field, PrimeField):
            return cls(field, np.zeros((nrows, ncols), dtype=np.int64), _internal=True)
        return cls(field, [[Fraction(0)] * ncols for _ in range(nrows)], _internal=True)

    @classmethod
    def identity(cls, field, n: int) -> "DenseMatrix":
        if isinstance(field, PrimeField):
            return cls(field, np.eye(n, dtype=np.int64), _internal=True)
        return cls(
            field,
            [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)],
            _internal=True,
        )

    @classmethod
    def from_rows(cls, field, rows: Iterable[Sequence], ncols: Optional[int] = None) -> "DenseMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            if ncols is None:
                raise UsageError("ncols required for an empty row list")
            return cls.zeros(field, 0, ncols)
        return cls(field, rows)

    @classmethod
    def column(cls, field, entries: Sequence) -> "DenseMatrix":
        return cls(field, [[e] for e in entries])

    # -- raw access --------------------------------------------------

    def numpy(self) -> np.ndarray:
        return self._a.copy()

    def rows(self):
        if isinstance(self.field, PrimeField):
            return [self._a[i].copy() for i in range(self.nrows)]
        return [list(r) for r in self._a]

    def __getitem__(self, ij):
        i, j = ij
        x = self._a[i][j] if not isinstance(self.field, PrimeField) else self._a[i, j]
        return int(x) if isinstance(self.field, PrimeField) else x

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    # -- algebra -----------------------------------------------------

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.field != other.field or self.ncols != other.nrows:
            raise UsageError("matmul shape/field mismatch")
        if isinstance(self.field, PrimeField):
            return DenseMatrix(self.field, (self._a @ other._a) % self.field.p, _internal=True)
        out = [
            [
                sum(self._a[i][k] * other._a[k][j] for k in range(self.ncols))
                for j in range(other.ncols)
            ]
            for i in range(self.nrows)
        ]
        return DenseMatrix(self.field, out, _internal=True)

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.field != other.field or self.shape != other.shape:
            raise UsageError("add shape/field mismatch")
        if isinstance(self.field, PrimeField):
            return DenseMatrix(self.field, (self._a + other._a) % self.field.p, _internal=True)
        return DenseMatrix(
            self.field,
            [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(self._a, other._a)],
            _internal=True,
        )

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "DenseMatrix":
        if isinstance(self.field, PrimeField):
            c = self.field.element(c)
            return DenseMatrix(self.field, (self._a * c) % self.field.p, _internal=True)
        c = Fraction(c)
        return DenseMatrix(self.field, [[c * x for x in row] for row in self._a], _internal=True)

    def transpose(self) -> "DenseMatrix":
        if isinstance(self.field, PrimeField):
            return DenseMatrix(self.field, self._a.T.copy(), _internal=True)
        return DenseMatrix(
            self.field,
            [[self._a[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            _internal=True,
        )

    def hstack(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.nrows != other.nrows:
            raise UsageError("hstack row mismatch")
        if isinstance(self.field, PrimeField):
            return DenseMatrix(self.field, np.hstack([self._a, other._a]), _internal=True)
        return DenseMatrix(
            self.field, [r1 + r2 for r1, r2 in zip(self._a, other._a)], _internal=True
        )

    def vstack(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.ncols != other.ncols:
            raise UsageError("vstack column mismatch")
        if isinstance(self.field, PrimeField):
            return DenseMatrix(self.field, np.vstack([self._a, other._a]), _internal=True)
        return DenseMatrix(self.field, self.rows() + other.rows(), _internal=True)

    def is_zero(self) -> bool:
        if isinstance(self.field, PrimeField):
            return not self._a.any()
        return all(x == 0 for row in self._a for x in row)

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        if isinstance(self.field, PrimeField):
            return bool((self._a == other._a).all())
        return self._a == other._a

    def __hash__(self):
        if isinstance(self.field, PrimeField):
            return hash((self.field, self.shape, self._a.tobytes()))
        return hash((self.field, self.shape, tuple(tuple(r) for r in self._a)))

    def __repr__(self):
        return f"DenseMatrix({self.field}, {self.nrows}x{self.ncols})"

    # -- elimination -------------------------------------------------

    def rref(self):
        """Reduced row-echelon form.

        Returns ``(reduced, pivots, rank)`` where ``reduced`` has the
        same shape as the input (zero rows at the bottom) and
        ``pivots`` lists the pivot column indices.
        """
        if isinstance(self.field, PrimeField):
            a = self._a.copy()
            pivots, rank = _rref_gfp(a, self.field.p)
            return DenseMatrix(self.field, a, _internal=True), tuple(pivots), rank
        rows, pivots, rank = _rref_qq(self.rows(), self.ncols)
        return DenseMatrix(self.field, rows, _internal=True), tuple(pivots), rank

    def rank(self) -> int:
        return self.rref()[2]

    def kernel_basis(self) -> "DenseMatrix":
        """Columns form a basis of the right null space."""
        reduced, pivots, rank = self.rref()
        free = [c for c in range(self.ncols) if c not in set(pivots)]
        cols = []
        for fc in free:
            v = [self.field.element(0)] * self.ncols
            v[fc] = self.field.element(1)
            for r, pc in enumerate(pivots):
                v[pc] = -reduced[r, fc] if self.field == QQ else (-reduced[r, fc]) % self.field.p
            cols.append(v)
        if not cols:
            return DenseMatrix.zeros(self.field, self.ncols, 0)
        return DenseMatrix.from_rows(self.field, cols).transpose()

    def solve(self, rhs: "DenseMatrix") -> Optional["DenseMatrix"]:
        """One solution X of self @ X = rhs, or None if inconsistent."""
        if rhs.nrows != self.nrows:
            raise UsageError("solve: rhs row count mismatch")
        aug = self.hstack(rhs)
        reduced, pivots, rank = aug.rref()
        if any(p >= self.ncols for p in pivots):
            return None
        out = DenseMatrix.zeros(self.field, self.ncols, rhs.ncols)
        if isinstance(self.field, PrimeField):
            a = out._a
            for r, pc in enumerate(pivots):
                a[pc] = reduced._a[r, self.ncols:]
            return DenseMatrix(self.field, a % self.field.p, _internal=True)
        rows = out._a
        for r, pc in enumerate(pivots):
            rows[pc] = list(reduced._a[r][self.ncols:])
        return DenseMatrix(self.field, rows, _internal=True)


def rref(m: DenseMatrix):
    return m.rref()


def kernel_basis(m: DenseMatrix) -> DenseMatrix:
    return m.kernel_basis()


def solve(m: DenseMatrix, rhs: DenseMatrix) -> Optional[DenseMatrix]:
    return m.solve(rhs)


class RowSpace:
    """A subspace of k^n maintained in reduced echelon form.

    Supports incremental span growth, canonical reduction of vectors
    modulo the space, and membership tests.  The workhorse behind
    normal forms, kernel capture and Hom-space quotients.
    """

    def __init__(self, field, ncols: int):
        self.field = field
        self.ncols = ncols
        self._rows = []  # list of (pivot_col, vector) sorted by pivot_col

    @property
    def dim(self) -> int:
        return len(self._rows)

    def copy(self) -> "RowSpace":
        s = RowSpace(self.field, self.ncols)
        s._rows = [(p, v.copy() if isinstance(self.field, PrimeField) else list(v)) for p, v in self._rows]
        return s

    def _as_vec(self, v):
        if isinstance(self.field, PrimeField):
            if isinstance(v, np.ndarray):
                return v.astype(np.int64) % self.field.p
            return np.array([self.field.element(x) for x in v], dtype=np.int64)
        return [Fraction(x) for x in v]

    def reduce(self, v):
        """Canonical residue of v modulo the space."""
        v = self._as_vec(v)
        if isinstance(self.field, PrimeField):
            p = self.field.p
            for pc, row in self._rows:
                c = v[pc]
                if c:
                    v = (v - c * row) % p
            return v
        for pc, row in self._rows:
            c = v[pc]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def contains(self, v) -> bool:
        r = self.reduce(v)
        if isinstance(self.field, PrimeField):
            return not r.any()
        return all(x == 0 for x in r)

    def add(self, v) -> bool:
        """Add one vector; True if it enlarged the space."""
        r = self.reduce(v)
        if isinstance(self.field, PrimeField):
            nz = np.nonzero(r)[0]
            if nz.size == 0:
                return False
            pc = int(nz[0])
            r = (r * pow(int(r[pc]), self.field.p - 2, self.field.p)) % self.field.p
            for i, (qc, row) in enumerate(self._rows):
                c = row[pc]
                if c:
                    self._rows[i] = (qc, (row - c * r) % self.field.p)
        else:
            pc = next((i for i, x in enumerate(r) if x != 0), None)
            if pc is None:
                return False
            inv = 1 / r[pc]
            r = [x * inv for x in r]
            for i, (qc, row) in enumerate(self._rows):
                c = row[pc]
                if c:
                    self._rows[i] = (qc, [x - c * y for x, y in zip(row, r)])
        self._rows.append((pc, r))
        self._rows.sort(key=lambda t: t[0])
        return True

    def add_matrix(self, m: DenseMatrix) -> int:
        added = 0
        for row in m.rows():
            if self.add(row):
                added += 1
        return added

    def basis_matrix(self) -> DenseMatrix:
        if not self._rows:
            return DenseMatrix.zeros(self.field, 0, self.ncols)
        return DenseMatrix.from_rows(self.field, [v for _, v in self._rows], self.ncols)

    def pivots(self):
        return tuple(p for p, _ in self._rows)


def intersect_rowspaces(U: RowSpace, V: RowSpace, field, n: int) -> RowSpace:
    """Intersection of two row spaces inside k^n."""
    out = RowSpace(field, n)
    BU = U.basis_matrix()
    BV = V.basis_matrix()
    if BU.nrows == 0 or BV.nrows == 0:
        return out
    stacked = BU.transpose().hstack(BV.transpose().scale(-1))
    ker = stacked.kernel_basis()
    for col in ker.transpose().rows():
        a = list(col[: BU.nrows])
        x = DenseMatrix.from_rows(field, [a], BU.nrows) @ BU
        out.add(x.rows()[0])
    return out
