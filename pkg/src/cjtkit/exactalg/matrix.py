"""Exact matrices with sparse row storage.

Rows are stored as ``{column: value}`` dicts without zero entries.  Over QQ all
elimination runs on integer rows (fraction-free); over GF(p) it runs on residues.
Nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .fields import QQ, PrimeField, check_same_field


class Matrix:
    """Immutable exact matrix over ``QQ`` or a :class:`PrimeField`."""

    __slots__ = ("nrows", "ncols", "field", "_rows", "_rank")

    def __init__(self, nrows: int, ncols: int, rows=None, field=QQ, *, _trusted=False):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        self._rank = None
        if rows is None:
            self._rows = tuple({} for _ in range(nrows))
            return
        rows = list(rows)
        if len(rows) != nrows:
            raise ValueError(f"expected {nrows} rows, got {len(rows)}")
        if _trusted:
            self._rows = tuple(rows)
            return
        conv = []
        for r in rows:
            d = {}
            for j, v in r.items():
                if not 0 <= j < ncols:
                    raise IndexError(f"column {j} out of range for {ncols} columns")
                v = field(v)
                if v:
                    d[j] = v
            conv.append(d)
        self._rows = tuple(conv)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], field=QQ, ncols: int | None = None) -> "Matrix":
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        rows = [{j: v for j, v in enumerate(r)} for r in data]
        return cls(len(data), ncols, rows, field)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int, field=QQ) -> "Matrix":
        rows = [dict() for _ in range(nrows)]
        for j, c in enumerate(cols):
            if len(c) != nrows:
                raise ValueError("column length does not match nrows")
            for i, v in enumerate(c):
                v = field(v)
                if v:
                    rows[i][j] = v
        return cls(nrows, len(cols), rows, field, _trusted=True)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: dict, field=QQ) -> "Matrix":
        rows = [dict() for _ in range(nrows)]
        for (i, j), v in entries.items():
            rows[i][j] = v
        return cls(nrows, ncols, rows, field)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field=QQ) -> "Matrix":
        return cls(nrows, ncols, None, field)

    @classmethod
    def identity(cls, n: int, field=QQ) -> "Matrix":
        return cls(n, n, [{i: field.one} for i in range(n)], field, _trusted=True)

    # -- access -----------------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(idx)
        return self._rows[i].get(j, self.field.zero)

    def row(self, i: int) -> list:
        z = self.field.zero
        r = self._rows[i]
        return [r.get(j, z) for j in range(self.ncols)]

    def column(self, j: int) -> list:
        z = self.field.zero
        return [r.get(j, z) for r in self._rows]

    def to_list(self) -> list[list]:
        return [self.row(i) for i in range(self.nrows)]

    def sparse_rows(self):
        """The internal rows as read-only views (do not mutate)."""
        return self._rows

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def is_zero(self) -> bool:
        return not any(self._rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.shape == other.shape and self.field == other.field
                and all(a == b for a, b in zip(self._rows, other._rows)))

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(r.items())) for r in self._rows)))

    def __repr__(self):
        if self.nrows * self.ncols <= 64:
            body = "; ".join(" ".join(str(v) for v in self.row(i)) for i in range(self.nrows))
            return f"Matrix({self.nrows}x{self.ncols} over {self.field!r}: [{body}])"
        return f"Matrix({self.nrows}x{self.ncols} over {self.field!r}, nnz={self.nnz()})"

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Matrix"):
        check_same_field(self.field, other.field)

    def _add(self, other: "Matrix", sign: int) -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        p = getattr(self.field, "p", None)
        rows = []
        for a, b in zip(self._rows, other._rows):
            d = dict(a)
            for j, v in b.items():
                w = d.get(j, 0) + sign * v
                if p is not None:
                    w %= p
                if w:
                    d[j] = w
                else:
                    d.pop(j, None)
            rows.append(d)
        return Matrix(self.nrows, self.ncols, rows, self.field, _trusted=True)

    def __add__(self, other):
        return self._add(other, 1)

    def __sub__(self, other):
        return self._add(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        if not c:
            return Matrix.zeros(self.nrows, self.ncols, self.field)
        p = getattr(self.field, "p", None)
        if p is None:
            rows = [{j: v * c for j, v in r.items()} for r in self._rows]
        else:
            rows = [{j: v * c % p for j, v in r.items()} for r in self._rows]
        return Matrix(self.nrows, self.ncols, rows, self.field, _trusted=True)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        p = getattr(self.field, "p", None)
        orows = other._rows
        rows = []
        for r in self._rows:
            acc: dict = {}
            for k, v in r.items():
                for j, w in orows[k].items():
                    acc[j] = acc.get(j, 0) + v * w
            if p is None:
                rows.append({j: v for j, v in acc.items() if v})
            else:
                rows.append({j: v % p for j, v in acc.items() if v % p})
        return Matrix(self.nrows, other.ncols, rows, self.field, _trusted=True)

    def apply(self, vec: Sequence) -> tuple:
        """Matrix-vector product for a dense vector."""
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match column count")
        p = getattr(self.field, "p", None)
        out = []
        for r in self._rows:
            s = sum((v * vec[j] for j, v in r.items()), self.field.zero)
            out.append(s % p if p is not None else s)
        return tuple(out)

    def power(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        result = Matrix.identity(self.nrows, self.field)
        for _ in range(k):
            result = result @ self
        return result

    @property
    def T(self) -> "Matrix":
        rows = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                rows[j][i] = v
        return Matrix(self.ncols, self.nrows, rows, self.field, _trusted=True)

    def transpose(self) -> "Matrix":
        return self.T

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        cmap = {c: k for k, c in enumerate(cols)}
        out = []
        for i in rows:
            out.append({cmap[j]: v for j, v in self._rows[i].items() if j in cmap})
        return Matrix(len(rows), len(cols), out, self.field, _trusted=True)

    def to_field(self, field) -> "Matrix":
        if field == self.field:
            return self
        if self.field != QQ:
            raise ValueError("only QQ matrices can be reduced to another field")
        return Matrix(self.nrows, self.ncols, self._rows, field)

    @staticmethod
    def hstack(mats: Sequence["Matrix"], nrows: int | None = None, field=None) -> "Matrix":
        if not mats:
            return Matrix.zeros(nrows or 0, 0, field or QQ)
        f = mats[0].field
        n = mats[0].nrows
        rows = [dict() for _ in range(n)]
        off = 0
        for m in mats:
            check_same_field(f, m.field)
            if m.nrows != n:
                raise ValueError("hstack row mismatch")
            for i, r in enumerate(m._rows):
                for j, v in r.items():
                    rows[i][j + off] = v
            off += m.ncols
        return Matrix(n, off, rows, f, _trusted=True)

    @staticmethod
    def vstack(mats: Sequence["Matrix"], ncols: int | None = None, field=None) -> "Matrix":
        if not mats:
            return Matrix.zeros(0, ncols or 0, field or QQ)
        f = mats[0].field
        n = mats[0].ncols
        rows = []
        for m in mats:
            check_same_field(f, m.field)
            if m.ncols != n:
                raise ValueError("vstack column mismatch")
            rows.extend(m._rows)
        return Matrix(len(rows), n, rows, f, _trusted=True)

    @staticmethod
    def block(grid: dict, row_sizes: Sequence[int], col_sizes: Sequence[int], field=QQ) -> "Matrix":
        """Assemble from ``{(bi, bj): Matrix}`` blocks; missing blocks are zero."""
        roff = [0]
        for s in row_sizes:
            roff.append(roff[-1] + s)
        coff = [0]
        for s in col_sizes:
            coff.append(coff[-1] + s)
        rows = [dict() for _ in range(roff[-1])]
        for (bi, bj), m in grid.items():
            check_same_field(field, m.field)
            if m.shape != (row_sizes[bi], col_sizes[bj]):
                raise ValueError(f"block ({bi},{bj}) has shape {m.shape}")
            for i, r in enumerate(m._rows):
                target = rows[roff[bi] + i]
                for j, v in r.items():
                    target[coff[bj] + j] = v
        return Matrix(roff[-1], coff[-1], rows, field, _trusted=True)

    @staticmethod
    def block_diag(mats: Sequence["Matrix"], field=QQ) -> "Matrix":
        grid = {(k, k): m for k, m in enumerate(mats)}
        return Matrix.block(grid, [m.nrows for m in mats], [m.ncols for m in mats], field)

    # -- linear algebra ---------------------------------------------------

    def rank(self, method: str = "auto") -> int:
        """Exact rank.  ``method`` is ``auto``, ``bareiss`` or ``sparse``."""
        if method == "auto" and self._rank is not None:
            return self._rank
        if self.nrows == 0 or self.ncols == 0:
            r = 0
        elif isinstance(self.field, PrimeField):
            r = len(_echelon_mod(self._rows, self.field.p))
        else:
            if method == "auto":
                dense = self.nnz() > 0.4 * self.nrows * self.ncols
                method = "bareiss" if dense and self.nrows * self.ncols <= 4096 else "sparse"
            if method == "bareiss":
                r = bareiss_rank(self.to_list())
            elif method == "sparse":
                r = len(_echelon_int([_int_row(r) for r in self._rows if r]))
            else:
                raise ValueError(f"unknown rank method {method!r}")
        self._rank = r
        return r

    def rref(self):
        """Reduced row echelon form as ``(pivot_columns, rows)``; rows are dicts."""
        return _rref(self._rows, self.field)

    def kernel_basis(self) -> list[tuple]:
        """Basis of the right kernel ``{v : A v = 0}`` as dense tuples."""
        pivots, rows = self.rref()
        pivset = set(pivots)
        z, one = self.field.zero, self.field.one
        p = getattr(self.field, "p", None)
        basis = []
        for f in range(self.ncols):
            if f in pivset:
                continue
            v = [z] * self.ncols
            v[f] = one
            for c, r in zip(pivots, rows):
                x = r.get(f)
                if x:
                    v[c] = (-x) % p if p is not None else -x
            basis.append(tuple(v))
        return basis

    def image_basis(self) -> list[tuple]:
        """Echelon basis of the column space, as dense tuples of length ``nrows``."""
        _, rows = _rref(self.T._rows, self.field)
        z = self.field.zero
        return [tuple(r.get(i, z) for i in range(self.nrows)) for r in rows]

    def row_space_basis(self) -> list[tuple]:
        _, rows = self.rref()
        z = self.field.zero
        return [tuple(r.get(i, z) for i in range(self.ncols)) for r in rows]

    def solve(self, rhs: Sequence):
        """One solution ``x`` of ``A x = rhs`` or ``None`` when inconsistent."""
        if len(rhs) != self.nrows:
            raise ValueError("right-hand side length mismatch")
        aug = [dict(r) for r in self._rows]
        for i, b in enumerate(rhs):
            b = self.field(b)
            if b:
                aug[i][self.ncols] = b
        pivots, rows = _rref(aug, self.field)
        if pivots and pivots[-1] == self.ncols:
            return None
        x = [self.field.zero] * self.ncols
        for c, r in zip(pivots, rows):
            x[c] = r.get(self.ncols, self.field.zero)
        return tuple(x)


# -- elimination kernels -------------------------------------------------------


def _int_row(row: dict) -> dict:
    """Scale a rational row to a primitive integer row with the same span."""
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    r = {j: int(v * den) for j, v in row.items()}
    return _primitive(r)


def _primitive(r: dict) -> dict:
    g = gcd(*r.values()) if r else 1
    if g > 1:
        r = {j: v // g for j, v in r.items()}
    return r


def _echelon_int(rows: Iterable[dict]) -> dict:
    """Fraction-free incremental echelon on integer rows: ``{lead_col: row}``."""
    pivots: dict[int, dict] = {}
    for r in rows:
        r = dict(r)
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = r
                break
            a, b = piv[c], r[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            out = {}
            for j, v in r.items():
                out[j] = a * v
            for j, v in piv.items():
                w = out.get(j, 0) - b * v
                if w:
                    out[j] = w
                else:
                    out.pop(j, None)
            r = _primitive(out)
    return pivots


def _echelon_mod(rows: Iterable[dict], p: int) -> dict:
    """Incremental echelon modulo ``p`` with monic pivot rows."""
    pivots: dict[int, dict] = {}
    for r in rows:
        r = dict(r)
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(r[c], -1, p)
                pivots[c] = {j: v * inv % p for j, v in r.items()}
                break
            f = r[c]
            for j, v in piv.items():
                w = (r.get(j, 0) - f * v) % p
                if w:
                    r[j] = w
                else:
                    r.pop(j, None)
    return pivots


def _rref(rows: Sequence[dict], field):
    """Reduced row echelon form; returns sorted pivot columns and monic rows."""
    if isinstance(field, PrimeField):
        p = field.p
        piv = _echelon_mod([r for r in rows if r], p)
        cols = sorted(piv)
        for k in range(len(cols) - 1, -1, -1):
            c = cols[k]
            prow = piv[c]
            for c2 in cols[:k]:
                r = piv[c2]
                f = r.get(c)
                if f:
                    for j, v in prow.items():
                        w = (r.get(j, 0) - f * v) % p
                        if w:
                            r[j] = w
                        else:
                            r.pop(j, None)
        return cols, [piv[c] for c in cols]
    piv = _echelon_int([_int_row(r) for r in rows if r])
    cols = sorted(piv)
    for k in range(len(cols) - 1, -1, -1):
        c = cols[k]
        prow = piv[c]
        a = prow[c]
        for c2 in cols[:k]:
            r = piv[c2]
            b = r.get(c)
            if b:
                g = gcd(a, b)
                x, y = a // g, b // g
                out = {j: x * v for j, v in r.items()}
                for j, v in prow.items():
                    w = out.get(j, 0) - y * v
                    if w:
                        out[j] = w
                    else:
                        out.pop(j, None)
                piv[c2] = _primitive(out)
    result = []
    for c in cols:
        r = piv[c]
        lead = r[c]
        result.append({j: Fraction(v, lead) for j, v in r.items()})
    return cols, result


def bareiss_rank(rows: Sequence[Sequence]) -> int:
    """Rank of a dense rational matrix by Bareiss fraction-free elimination."""
    if not rows or not rows[0]:
        return 0
    # clear denominators row by row; rank is unchanged
    a = []
    for r in rows:
        den = 1
        for v in r:
            den = lcm(den, Fraction(v).denominator)
        a.append([int(Fraction(v) * den) for v in r])
    m, n = len(a), len(a[0])
    prev = 1
    k = 0
    for col in range(n):
        if k == m:
            break
        piv = next((i for i in range(k, m) if a[i][col]), None)
        if piv is None:
            continue
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
        pk = a[k][col]
        for i in range(k + 1, m):
            aic = a[i][col]
            row_i, row_k = a[i], a[k]
            for j in range(col + 1, n):
                row_i[j] = (pk * row_i[j] - aic * row_k[j]) // prev
            row_i[col] = 0
        prev = pk
        k += 1
    return k


def rank(m: Matrix) -> int:
    return m.rank()


def kernel_basis(m: Matrix) -> list[tuple]:
    return m.kernel_basis()
