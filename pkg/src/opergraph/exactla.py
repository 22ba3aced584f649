"""Exact rational linear algebra and finite chain complexes.

Matrices are sparse maps ``(row, col) -> Fraction``.  Ranks are computed by
fraction-free elimination on integer rows (each row is scaled by the lcm of
its denominators first, which does not change the rank).  Small matrices go
through a dense Bareiss elimination instead.

Chain complexes use the homological convention: the differential stored at
degree ``k`` maps degree ``k`` to degree ``k - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, NamedTuple

DENSE_CUTOFF = 64


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class RationalMatrix:
    """Immutable sparse matrix over the rationals."""

    __slots__ = ("rows", "cols", "_entries", "_rank")

    def __init__(self, rows: int, cols: int, entries: Mapping | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be nonnegative")
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            v = _as_fraction(v)
            if v:
                clean[i, j] = v
        self._entries = clean
        self._rank = None

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_dense(cls, data) -> RationalMatrix:
        data = [list(r) for r in data]
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ent = {}
        for i, r in enumerate(data):
            if len(r) != cols:
                raise ValueError("ragged input")
            for j, v in enumerate(r):
                if v:
                    ent[i, j] = v
        return cls(rows, cols, ent)

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Mapping[int, object]]) -> RationalMatrix:
        ent = {}
        ncols = 0
        for j, col in enumerate(columns):
            ncols = j + 1
            for i, v in col.items():
                ent[i, j] = v
        return cls(rows, ncols, ent)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def items(self):
        return self._entries.items()

    def __getitem__(self, key) -> Fraction:
        return self._entries.get(key, Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.shape, frozenset(self._entries.items())))

    def __repr__(self):
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    def is_zero(self) -> bool:
        return not self._entries

    def permute(self, row_perm=None, col_perm=None) -> RationalMatrix:
        """Return the matrix with row ``i`` moved to ``row_perm[i]`` (same for columns)."""
        rp = row_perm if row_perm is not None else range(self.rows)
        cp = col_perm if col_perm is not None else range(self.cols)
        return RationalMatrix(self.rows, self.cols,
                              {(rp[i], cp[j]): v for (i, j), v in self._entries.items()})

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list] = {}
        for (k, j), v in other._entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict[tuple[int, int], Fraction] = {}
        for (i, k), a in self._entries.items():
            for j, b in by_row.get(k, ()):
                out[i, j] = out.get((i, j), 0) + a * b
        return RationalMatrix(self.rows, other.cols, out)

    def integer_rows(self) -> list[dict[int, int]]:
        """Rows scaled to primitive integer vectors (empty rows dropped)."""
        by_row: dict[int, dict[int, Fraction]] = {}
        for (i, j), v in self._entries.items():
            by_row.setdefault(i, {})[j] = v
        return [_primitive(r) for r in by_row.values()]

    def rank(self) -> int:
        if self._rank is None:
            self._rank = rank_rational(self)
        return self._rank


def _primitive(row: Mapping[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    ints = {j: int(v * den) for j, v in row.items() if v}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if g > 1:
        ints = {j: v // g for j, v in ints.items()}
    return ints


def _bareiss_rank(rows: list[list[int]]) -> int:
    a = [r[:] for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    rank = 0
    prev = 1
    for col in range(n):
        piv = next((r for r in range(rank, m) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, m):
            f = a[r][col]
            row_r = a[r]
            row_p = a[rank]
            for c in range(col + 1, n):
                row_r[c] = (p * row_r[c] - f * row_p[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


class SparseEchelon:
    """Incremental row echelon basis over the integers (fraction-free).

    ``add`` reduces a vector against the current pivots and keeps it when a
    nonzero remainder survives; ``rank`` is the number of kept rows.
    """

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[int, int]) -> dict[int, int]:
        row = {j: v for j, v in row.items() if v}
        while row:
            col = min(row)
            prow = self.pivots.get(col)
            if prow is None:
                return row
            a = row[col]
            b = prow[col]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {j: v * fa for j, v in row.items()}
            for j, v in prow.items():
                w = new.get(j, 0) - v * fb
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            g = 0
            for v in new.values():
                g = gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                new = {j: v // g for j, v in new.items()}
            row = new
        return row

    def add(self, row: Mapping[int, int]) -> bool:
        rem = self.reduce(row)
        if not rem:
            return False
        col = min(rem)
        if rem[col] < 0:
            rem = {j: -v for j, v in rem.items()}
        self.pivots[col] = rem
        return True


def rank_rational(m: RationalMatrix) -> int:
    """Exact rank over the rationals."""
    if m.is_zero():
        return 0
    rows = m.integer_rows()
    if m.rows <= DENSE_CUTOFF and m.cols <= DENSE_CUTOFF:
        dense = []
        for r in rows:
            d = [0] * m.cols
            for j, v in r.items():
                d[j] = v
            dense.append(d)
        return _bareiss_rank(dense)
    # eliminate sparsest rows first to limit fill-in
    rows.sort(key=len)
    ech = SparseEchelon()
    limit = min(m.rows, m.cols)
    for r in rows:
        ech.add(r)
        if ech.rank == limit:
            break
    return ech.rank


class ComplexError(ValueError):
    """Raised when a putative chain complex has d o d != 0."""

    def __init__(self, degree: int, column: int):
        super().__init__(f"d o d is nonzero at degree {degree} (column {column})")
        self.degree = degree
        self.column = column


class ComplexCheck(NamedTuple):
    ok: bool
    degree: int | None = None
    column: int | None = None


@dataclass(frozen=True)
class ChainComplex:
    """Finite chain complex of rational vector spaces.

    ``dims[k]`` is the dimension in degree ``k``; ``differentials[k]`` is the
    ``dims[k-1] x dims[k]`` matrix of the map out of degree ``k``.  Missing
    differentials are zero maps.
    """

    dims: dict[int, int]
    differentials: dict[int, RationalMatrix] = field(default_factory=dict)

    def __post_init__(self):
        if self.dims:
            lo, hi = min(self.dims), max(self.dims)
            for k in range(lo, hi + 1):
                self.dims.setdefault(k, 0)
        for k, d in self.differentials.items():
            want = (self.dim(k - 1), self.dim(k))
            if d.shape != want:
                raise ValueError(f"differential at degree {k} has shape {d.shape}, expected {want}")

    @property
    def degrees(self) -> range:
        if not self.dims:
            return range(0)
        return range(min(self.dims), max(self.dims) + 1)

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def differential(self, k: int) -> RationalMatrix:
        d = self.differentials.get(k)
        if d is None:
            return RationalMatrix.zeros(self.dim(k - 1), self.dim(k))
        return d

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in self.dims.items())


def verify_complex(c: ChainComplex) -> ComplexCheck:
    """Check that consecutive differentials compose to zero.

    On failure the witness is the source degree ``k`` of the nonzero
    composite ``d_{k-1} d_k`` and one of its nonzero columns.
    """
    for k in sorted(c.differentials):
        if k - 1 not in c.differentials:
            continue
        comp = c.differentials[k - 1] @ c.differentials[k]
        if not comp.is_zero():
            col = min(j for (_, j), _v in comp.items())
            return ComplexCheck(False, k, col)
    return ComplexCheck(True)


def betti_numbers(c: ChainComplex) -> dict[int, int]:
    """Rational Betti numbers ``dims(k) - rank d_k - rank d_{k+1}``."""
    chk = verify_complex(c)
    if not chk.ok:
        raise ComplexError(chk.degree, chk.column)
    ranks = {k: d.rank() for k, d in c.differentials.items()}
    return {k: c.dim(k) - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in c.degrees}
