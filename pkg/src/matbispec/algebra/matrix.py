"""Dense matrices over Q(i)."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import DimensionMismatch
from .scalars import ONE, ZERO, GaussianRational

__all__ = ["MatC", "mat_add", "mat_mul", "mat_scale", "frobenius_norm_sq"]


class MatC:
    """An ``n_rows x n_cols`` matrix of GaussianRational, stored row-major.

    Values are immutable; every operation returns a fresh matrix.
    """

    __slots__ = ("n_rows", "n_cols", "rows", "_hash")

    def __init__(self, rows: Iterable[Iterable], n_cols: int | None = None):
        data = tuple(tuple(GaussianRational.coerce(v) for v in row) for row in rows)
        if n_cols is None:
            if not data:
                raise ValueError("cannot infer column count of an empty matrix")
            n_cols = len(data[0])
        for row in data:
            if len(row) != n_cols:
                raise DimensionMismatch("ragged matrix rows")
        self.n_rows = len(data)
        self.n_cols = n_cols
        self.rows = data
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, n_rows: int, n_cols: int) -> "MatC":
        obj = object.__new__(cls)
        obj.rows = rows
        obj.n_rows = n_rows
        obj.n_cols = n_cols
        obj._hash = None
        return obj

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int | None = None) -> "MatC":
        n_cols = n_rows if n_cols is None else n_cols
        row = (ZERO,) * n_cols
        return cls._raw((row,) * n_rows, n_rows, n_cols)

    @classmethod
    def identity(cls, n: int) -> "MatC":
        return cls.scalar(n, ONE)

    @classmethod
    def scalar(cls, n: int, value) -> "MatC":
        value = GaussianRational.coerce(value)
        rows = tuple(tuple(value if i == j else ZERO for j in range(n)) for i in range(n))
        return cls._raw(rows, n, n)

    @classmethod
    def diag(cls, values: Sequence) -> "MatC":
        n = len(values)
        vals = [GaussianRational.coerce(v) for v in values]
        rows = tuple(tuple(vals[i] if i == j else ZERO for j in range(n)) for i in range(n))
        return cls._raw(rows, n, n)

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "MatC":
        """Matrix unit E_ij (0-based) of size n."""
        rows = tuple(tuple(ONE if (r, c) == (i, j) else ZERO for c in range(n)) for r in range(n))
        return cls._raw(rows, n, n)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence["MatC"]]) -> "MatC":
        out = []
        for brow in blocks:
            height = brow[0].n_rows
            for b in brow:
                if b.n_rows != height:
                    raise DimensionMismatch("block heights differ within a block row")
            for i in range(height):
                row: list = []
                for b in brow:
                    row.extend(b.rows[i])
                out.append(tuple(row))
        n_cols = len(out[0]) if out else sum(b.n_cols for b in blocks[0])
        return cls._raw(tuple(out), len(out), n_cols)

    # structure ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for row in self.rows:
            yield from row

    def is_zero(self) -> bool:
        return not any(self.entries())

    def __bool__(self):
        return not self.is_zero()

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "MatC":
        rows = tuple(row[c0:c1] for row in self.rows[r0:r1])
        return MatC._raw(rows, r1 - r0, c1 - c0)

    def transpose(self) -> "MatC":
        rows = tuple(zip(*self.rows)) if self.n_rows else ()
        return MatC._raw(rows, self.n_cols, self.n_rows)

    def nonzero_entries(self):
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                if v:
                    yield i, j, v

    # arithmetic -----------------------------------------------------------

    def _check_same(self, other: "MatC"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other: "MatC") -> "MatC":
        if not isinstance(other, MatC):
            return NotImplemented
        self._check_same(other)
        rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return MatC._raw(rows, self.n_rows, self.n_cols)

    def __sub__(self, other: "MatC") -> "MatC":
        if not isinstance(other, MatC):
            return NotImplemented
        self._check_same(other)
        rows = tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return MatC._raw(rows, self.n_rows, self.n_cols)

    def __neg__(self) -> "MatC":
        return MatC._raw(tuple(tuple(-a for a in r) for r in self.rows), self.n_rows, self.n_cols)

    def __matmul__(self, other: "MatC") -> "MatC":
        if not isinstance(other, MatC):
            return NotImplemented
        if self.n_cols != other.n_rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.transpose().rows
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for col in cols:
                acc = ZERO
                for k, a in nz:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return MatC._raw(tuple(out), self.n_rows, other.n_cols)

    def scale(self, c) -> "MatC":
        c = GaussianRational.coerce(c)
        if not c:
            return MatC.zeros(self.n_rows, self.n_cols)
        return MatC._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.n_rows, self.n_cols)

    def __mul__(self, c) -> "MatC":
        if isinstance(c, MatC):
            return self @ c
        return self.scale(c)

    def __rmul__(self, c) -> "MatC":
        return self.scale(c)

    def commutator(self, other: "MatC") -> "MatC":
        return self @ other - other @ self

    def __pow__(self, k: int) -> "MatC":
        if not self.is_square():
            raise DimensionMismatch("power of a non-square matrix")
        result, base = MatC.identity(self.n_rows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def trace(self) -> GaussianRational:
        acc = ZERO
        for i in range(min(self.n_rows, self.n_cols)):
            acc = acc + self.rows[i][i]
        return acc

    def frobenius_norm_sq(self) -> Fraction:
        acc = Fraction(0)
        for v in self.entries():
            if v:
                acc += v.abs2()
        return acc

    # equality -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MatC):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n_rows, self.n_cols, self.rows))
        return self._hash

    def __repr__(self):
        body = "; ".join(", ".join(str(v) for v in r) for r in self.rows)
        return f"MatC[{body}]"

    # elimination ----------------------------------------------------------

    def rref(self) -> tuple["MatC", list[int]]:
        """Reduced row echelon form and the pivot columns."""
        a = [list(r) for r in self.rows]
        pivots: list[int] = []
        r = 0
        for c in range(self.n_cols):
            piv = next((i for i in range(r, self.n_rows) if a[i][c]), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = a[r][c].inverse()
            a[r] = [v * inv for v in a[r]]
            for i in range(self.n_rows):
                if i != r and a[i][c]:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
            if r == self.n_rows:
                break
        return MatC._raw(tuple(tuple(row) for row in a), self.n_rows, self.n_cols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> list["MatC"]:
        """Column vectors spanning the right null space, as (n_cols x 1) matrices."""
        red, pivots = self.rref()
        free = [c for c in range(self.n_cols) if c not in pivots]
        basis = []
        for f in free:
            vec = [ZERO] * self.n_cols
            vec[f] = ONE
            for r, p in enumerate(pivots):
                vec[p] = -red.rows[r][f]
            basis.append(MatC._raw(tuple((v,) for v in vec), self.n_cols, 1))
        return basis

    def solve(self, rhs: "MatC") -> "MatC | None":
        """Some X with ``self @ X == rhs``, or None if the system is inconsistent."""
        if rhs.n_rows != self.n_rows:
            raise DimensionMismatch("right-hand side height differs")
        aug = MatC._raw(
            tuple(a + b for a, b in zip(self.rows, rhs.rows)),
            self.n_rows,
            self.n_cols + rhs.n_cols,
        )
        red, pivots = aug.rref()
        if any(p >= self.n_cols for p in pivots):
            return None
        x = [[ZERO] * rhs.n_cols for _ in range(self.n_cols)]
        for r, p in enumerate(pivots):
            x[p] = list(red.rows[r][self.n_cols:])
        return MatC._raw(tuple(tuple(row) for row in x), self.n_cols, rhs.n_cols)

    def inverse(self) -> "MatC":
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        x = self.solve(MatC.identity(self.n_rows))
        if x is None or self.rank() < self.n_rows:
            raise ZeroDivisionError("matrix is singular")
        return x


def mat_add(a: MatC, b: MatC) -> MatC:
    return a + b


def mat_mul(a: MatC, b: MatC) -> MatC:
    return a @ b


def mat_scale(a: MatC, c) -> MatC:
    return a.scale(c)


def frobenius_norm_sq(m: MatC) -> Fraction:
    """Sum of squared moduli of the entries (exact)."""
    return m.frobenius_norm_sq()
