"""Exact sparse matrices over Q and fraction-free row reduction.

Matrices are immutable sparse maps ``(row, col) -> Fraction`` with no stored
zeros.  Elimination works on integer rows (each row scaled by the lcm of its
denominators) and keeps rows primitive, which bounds entry growth.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Q = Fraction


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass an int, str or Fraction")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Matrix:
    """Immutable sparse rational matrix of shape ``(rows, cols)``."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        self.rows = rows
        self.cols = cols
        data: dict[int, dict[int, Fraction]] = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
                v = as_rational(v)
                if v:
                    data.setdefault(i, {})[j] = v
        self._data = data

    @classmethod
    def _raw(cls, rows, cols, data):
        m = object.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._data = data
        return m

    # constructors
    @classmethod
    def zeros(cls, rows, cols):
        return cls._raw(rows, cols, {})

    @classmethod
    def identity(cls, n):
        one = Fraction(1)
        return cls._raw(n, n, {i: {i: one} for i in range(n)})

    @classmethod
    def scalar(cls, n, c):
        c = as_rational(c)
        if not c:
            return cls.zeros(n, n)
        return cls._raw(n, n, {i: {i: c} for i in range(n)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None):
        rows = list(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = {}
        for i, r in enumerate(rows):
            if len(r) != cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(r):
                entries[(i, j)] = v
        return cls(len(rows), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int):
        entries = {}
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column of wrong length")
            for i, v in enumerate(col):
                entries[(i, j)] = v
        return cls(rows, len(columns), entries)

    @classmethod
    def assemble(cls, row_sizes: Sequence[int], col_sizes: Sequence[int], blocks):
        """Build a block matrix; ``blocks`` maps (block_row, block_col) -> Matrix."""
        roff = [0]
        for s in row_sizes:
            roff.append(roff[-1] + s)
        coff = [0]
        for s in col_sizes:
            coff.append(coff[-1] + s)
        data: dict[int, dict[int, Fraction]] = {}
        for (bi, bj), b in blocks.items():
            if b.rows != row_sizes[bi] or b.cols != col_sizes[bj]:
                raise ValueError(
                    f"block ({bi},{bj}) has shape {b.shape}, "
                    f"expected {(row_sizes[bi], col_sizes[bj])}")
            r0, c0 = roff[bi], coff[bj]
            for i, row in b._data.items():
                tgt = data.setdefault(r0 + i, {})
                for j, v in row.items():
                    w = tgt.get(c0 + j, 0) + v
                    if w:
                        tgt[c0 + j] = w
                    else:
                        tgt.pop(c0 + j, None)
        data = {i: r for i, r in data.items() if r}
        return cls._raw(roff[-1], coff[-1], data)

    @classmethod
    def block_diag(cls, blocks: Sequence["Matrix"]):
        return cls.assemble([b.rows for b in blocks], [b.cols for b in blocks],
                            {(k, k): b for k, b in enumerate(blocks)})

    @classmethod
    def hstack(cls, blocks: Sequence["Matrix"], rows: int | None = None):
        if rows is None:
            rows = blocks[0].rows if blocks else 0
        return cls.assemble([rows], [b.cols for b in blocks],
                            {(0, k): b for k, b in enumerate(blocks)})

    @classmethod
    def vstack(cls, blocks: Sequence["Matrix"], cols: int | None = None):
        if cols is None:
            cols = blocks[0].cols if blocks else 0
        return cls.assemble([b.rows for b in blocks], [cols],
                            {(k, 0): b for k, b in enumerate(blocks)})

    # access
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data.get(i, {}).get(j, Fraction(0))

    def items(self):
        for i in sorted(self._data):
            row = self._data[i]
            for j in sorted(row):
                yield (i, j), row[j]

    def row_dict(self, i):
        return dict(self._data.get(i, {}))

    def to_rows(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i, row in self._data.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def column(self, j):
        return [self._data.get(i, {}).get(j, Fraction(0)) for i in range(self.rows)]

    def columns(self):
        cols = [[Fraction(0)] * self.rows for _ in range(self.cols)]
        for i, row in self._data.items():
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def nnz(self):
        return sum(len(r) for r in self._data.values())

    def is_zero(self):
        return not self._data

    def __bool__(self):
        return bool(self._data)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    __hash__ = None

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.to_rows()!r})"

    # arithmetic
    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        data = {i: dict(r) for i, r in self._data.items()}
        for i, row in other._data.items():
            tgt = data.setdefault(i, {})
            for j, v in row.items():
                w = tgt.get(j, 0) + v
                if w:
                    tgt[j] = w
                else:
                    del tgt[j]
        return Matrix._raw(self.rows, self.cols, {i: r for i, r in data.items() if r})

    def __neg__(self):
        return Matrix._raw(self.rows, self.cols,
                           {i: {j: -v for j, v in r.items()} for i, r in self._data.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_rational(c)
        if not c:
            return Matrix.zeros(self.rows, self.cols)
        if c == 1:
            return self
        return Matrix._raw(self.rows, self.cols,
                           {i: {j: c * v for j, v in r.items()} for i, r in self._data.items()})

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        data = {}
        od = other._data
        for i, row in self._data.items():
            acc: dict[int, Fraction] = {}
            for k, a in row.items():
                orow = od.get(k)
                if not orow:
                    continue
                for j, b in orow.items():
                    acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                data[i] = acc
        return Matrix._raw(self.rows, other.cols, data)

    @property
    def T(self):
        data: dict[int, dict[int, Fraction]] = {}
        for i, row in self._data.items():
            for j, v in row.items():
                data.setdefault(j, {})[i] = v
        return Matrix._raw(self.cols, self.rows, data)

    def kron(self, other):
        """Kronecker product; basis of the result is (i, k) -> i * other.dim + k."""
        data = {}
        for i, row in self._data.items():
            for k, orow in other._data.items():
                r = i * other.rows + k
                tgt = {}
                for j, a in row.items():
                    base = j * other.cols
                    for l, b in orow.items():
                        tgt[base + l] = a * b
                data[r] = tgt
        return Matrix._raw(self.rows * other.rows, self.cols * other.cols, data)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]):
        cpos = {c: k for k, c in enumerate(col_idx)}
        data = {}
        for a, i in enumerate(row_idx):
            row = self._data.get(i)
            if not row:
                continue
            new = {cpos[j]: v for j, v in row.items() if j in cpos}
            if new:
                data[a] = new
        return Matrix._raw(len(row_idx), len(col_idx), data)

    def apply(self, vec: Sequence) -> list:
        out = [Fraction(0)] * self.rows
        for i, row in self._data.items():
            out[i] = sum((v * vec[j] for j, v in row.items()), Fraction(0))
        return out


# ---------------------------------------------------------------- reduction

def _int_row(row: dict) -> dict:
    """Scale a rational row to a primitive integer row."""
    den = 1
    for v in row.values():
        d = v.denominator
        den = den * d // gcd(den, d)
    out = {j: int(v * den) for j, v in row.items()}
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        row = {j: v // g for j, v in row.items()}
    return row


def _combine(r: dict, prow: dict, c: int) -> dict:
    """Return a*r - b*prow with the column c cleared (a = prow[c], b = r[c])."""
    a = prow[c]
    b = r[c]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {j: a * v for j, v in r.items()} if a != 1 else dict(r)
    for j, v in prow.items():
        w = out.get(j, 0) - b * v
        if w:
            out[j] = w
        else:
            out.pop(j, None)
    return _primitive(out)


def _rref(rows: Iterable[dict], key=None, eligible=None):
    """Fraction-free Gauss-Jordan elimination.

    ``rows`` are integer rows.  Pivots are chosen as the column minimising
    ``key`` among eligible columns.  Returns ``(pivots, inconsistent)`` where
    ``pivots`` maps pivot column -> reduced integer row (zero in every other
    pivot column) and ``inconsistent`` lists nonzero rows without an eligible
    column.
    """
    pivots: dict[int, dict] = {}
    bad = []
    for r in rows:
        if not r:
            continue
        for c in [c for c in r if c in pivots]:
            if c in r:
                r = _combine(r, pivots[c], c)
        if not r:
            continue
        cand = [c for c in r if eligible is None or eligible(c)]
        if not cand:
            bad.append(r)
            continue
        c = min(cand, key=key) if key is not None else min(cand)
        if r[c] < 0:
            r = {j: -v for j, v in r.items()}
        for pc, prow in list(pivots.items()):
            if c in prow:
                pivots[pc] = _combine(prow, r, c)
        pivots[c] = r
    return pivots, bad


@dataclass(frozen=True)
class Reduction:
    rank: int
    kernel_basis: tuple      # tuple of column vectors (tuples of Fraction)
    image_basis: tuple       # columns of the input spanning the image
    pivots: tuple            # pivot columns, increasing


def _kernel_from_pivots(pivots: dict, ncols: int, cols=None):
    cols = range(ncols) if cols is None else cols
    pcols = set(pivots)
    free = [j for j in cols if j not in pcols]
    contrib: dict[int, list] = {f: [] for f in free}
    for c, row in pivots.items():
        pv = row[c]
        for j, v in row.items():
            if j != c and j in contrib:
                contrib[j].append((c, Fraction(-v, pv)))
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for c, v in contrib[f]:
            vec[c] = v
        basis.append(tuple(vec))
    return basis


def reduce(m: Matrix, prefer: str = "left") -> Reduction:
    """Rank, kernel basis, image basis and pivot columns of ``m``.

    ``prefer="right"`` picks pivots from the right so that kernel vectors are
    parametrised by the leftmost coordinates.
    """
    key = None if prefer == "left" else (lambda c: -c)
    pivots, _ = _rref((_int_row(m._data[i]) for i in sorted(m._data)), key=key)
    pcols = tuple(sorted(pivots))
    kernel = _kernel_from_pivots(pivots, m.cols)
    if prefer == "right":
        kernel.sort(key=lambda v: next((k for k, x in enumerate(v) if x), 0))
    colmat = m.T
    image = tuple(tuple(colmat.row_dict(j).get(i, Fraction(0)) for i in range(m.rows))
                  for j in pcols)
    return Reduction(len(pivots), tuple(kernel), image, pcols)


def rank(m: Matrix) -> int:
    if m.is_zero():
        return 0
    pivots, _ = _rref(_int_row(r) for r in m._data.values())
    return len(pivots)


def kernel(m: Matrix, prefer: str = "left") -> Matrix:
    """Matrix whose columns form a basis of ker m."""
    red = reduce(m, prefer=prefer)
    return Matrix.from_columns(red.kernel_basis, m.cols)


def column_space(m: Matrix) -> Matrix:
    """Matrix whose columns form a basis of the image of ``m``."""
    red = reduce(m)
    return Matrix.from_columns(red.image_basis, m.rows)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Some X with a @ X == b, or None if no solution exists."""
    if a.rows != b.rows:
        raise ValueError("row mismatch")
    n = a.cols
    aug = Matrix.hstack([a, b], rows=a.rows)
    pivots, bad = _rref((_int_row(aug._data[i]) for i in sorted(aug._data)),
                        eligible=lambda c: c < n)
    if bad:
        return None
    data = {}
    for c, row in pivots.items():
        pv = row[c]
        for j, v in row.items():
            if j >= n:
                data.setdefault(c, {})[j - n] = Fraction(v, pv)
    return Matrix._raw(n, b.cols, data)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("not square")
    x = solve(m, Matrix.identity(m.rows))
    if x is None or rank(m) != m.rows:
        raise ValueError("singular matrix")
    return x


def quotient(n: int, sub: Matrix) -> tuple[Matrix, Matrix]:
    """Projection Q: Q^n -> Q^n / span(sub columns) and a section S.

    The complement is spanned by standard basis vectors, so S is a coordinate
    inclusion.  Q @ sub == 0 and Q @ S == identity.
    """
    if sub.rows != n:
        raise ValueError("subspace generators of wrong length")
    gens = sub.T
    pivots, _ = _rref(_int_row(gens._data[i]) for i in sorted(gens._data))
    free = [j for j in range(n) if j not in pivots]
    fpos = {f: k for k, f in enumerate(free)}
    data: dict[int, dict[int, Fraction]] = {k: {f: Fraction(1)} for k, f in enumerate(free)}
    for c, row in pivots.items():
        pv = row[c]
        for j, v in row.items():
            if j != c:
                data[fpos[j]][c] = Fraction(-v, pv)
    qmat = Matrix._raw(len(free), n, data)
    smat = Matrix._raw(n, len(free), {f: {k: Fraction(1)} for k, f in enumerate(free)})
    return qmat, smat


def independent(vectors: Matrix) -> bool:
    return rank(vectors) == vectors.cols
