"""Exact linear algebra over the two-element field on integer-packed bit rows.

Vectors and matrix rows are Python integers used as bit sets: bit ``i``
holds coordinate ``i``, so the serialized '0'/'1' string form reads
coordinate 0 first.  Arbitrary-precision integers keep row operations
exact at any width, from 2g-coordinate surface classes up to relation
matrices with tens of thousands of columns, and XOR on big ints runs at
C speed.

The low-level helpers (``rref_ints``, ``kernel_ints``, ...) work on plain
lists of ints and are the hot path for the enumerations; ``BitVec`` and
``BitMatrix`` wrap them with validated, hashable values.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Optional


def rref_ints(rows: Iterable[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of packed rows.

    Pivots are chosen at the lowest available column index, rows above and
    below are fully reduced, and zero rows are dropped, so the output is
    the unique canonical basis of the row space.

    Returns:
        (reduced rows in increasing pivot order, pivot column indices).
    """
    reduced: list[int] = []
    pivots: list[int] = []
    for row in rows:
        for p, r in zip(pivots, reduced):
            if (row >> p) & 1:
                row ^= r
        if not row:
            continue
        p = (row & -row).bit_length() - 1
        idx = bisect_left(pivots, p)
        pivots.insert(idx, p)
        reduced.insert(idx, row)
        for i, r in enumerate(reduced):
            if i != idx and (r >> p) & 1:
                reduced[i] = r ^ row
    return reduced, pivots


def kernel_ints(rows: Iterable[int], ncols: int) -> list[int]:
    """Canonical basis of {v : rows . v = 0}, one vector per free column."""
    red, pivots = rref_ints(rows, ncols)
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = 1 << f
        for p, r in zip(pivots, red):
            if (r >> f) & 1:
                v |= 1 << p
        out.append(v)
    canon, _ = rref_ints(out, ncols)
    return canon


def transpose_ints(rows: list[int], ncols: int) -> list[int]:
    cols = []
    for c in range(ncols):
        v = 0
        for i, r in enumerate(rows):
            v |= ((r >> c) & 1) << i
        cols.append(v)
    return cols


def combine_rows(coeffs: int, rows: list[int]) -> int:
    """XOR of the rows selected by the bits of ``coeffs`` (a row-vector product)."""
    acc = 0
    for i, r in enumerate(rows):
        if (coeffs >> i) & 1:
            acc ^= r
    return acc


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class BitVec:
    """A vector over GF(2); bit i of ``bits`` is coordinate i."""

    length: int
    bits: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("coordinates beyond length must be zero")

    @classmethod
    def from01(cls, text: str) -> "BitVec":
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a 0/1 string: {text!r}")
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
        return cls(len(text), bits)

    def to01(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.length))

    def bit(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.length != other.length:
            raise LengthMismatch((self.length, other.length))
        return BitVec(self.length, self.bits ^ other.bits)


@dataclass(frozen=True)
class BitMatrix:
    """A matrix over GF(2) stored as packed rows (top row first)."""

    cols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.cols < 0:
            raise ValueError("negative column count")
        for r in self.rows:
            if r < 0 or r >> self.cols:
                raise ValueError("row has bits beyond the column count")

    @classmethod
    def from_strings(cls, strings: Iterable[str], cols: Optional[int] = None) -> "BitMatrix":
        vecs = [BitVec.from01(s) for s in strings]
        if cols is None:
            if not vecs:
                raise ValueError("column count required for an empty matrix")
            cols = vecs[0].length
        for v in vecs:
            if v.length != cols:
                raise LengthMismatch((v.length, cols))
        return cls(cols, tuple(v.bits for v in vecs))

    def to_strings(self) -> tuple[str, ...]:
        return tuple(BitVec(self.cols, r).to01() for r in self.rows)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, self.rows[i])

    def entry(self, i: int, j: int) -> int:
        if not 0 <= j < self.cols:
            raise IndexError(j)
        return (self.rows[i] >> j) & 1

    def is_rref(self) -> bool:
        prev = -1
        for r in self.rows:
            if not r:
                return False
            p = (r & -r).bit_length() - 1
            if p <= prev:
                return False
            prev = p
        pivots = [(r & -r).bit_length() - 1 for r in self.rows]
        for i, r in enumerate(self.rows):
            for j, p in enumerate(pivots):
                if i != j and (r >> p) & 1:
                    return False
        return True


def rref(m: BitMatrix) -> tuple[BitMatrix, int, tuple[int, ...]]:
    """Canonical reduced row echelon form.

    Returns:
        (rref matrix with zero rows dropped, rank, pivot columns).
    """
    red, piv = rref_ints(m.rows, m.cols)
    return BitMatrix(m.cols, tuple(red)), len(red), tuple(piv)


def kernel(m: BitMatrix) -> BitMatrix:
    """Canonical rref basis of {v : m . v = 0}; always cols - rank rows."""
    return BitMatrix(m.cols, tuple(kernel_ints(m.rows, m.cols)))


def transpose(m: BitMatrix) -> BitMatrix:
    return BitMatrix(m.nrows, tuple(transpose_ints(list(m.rows), m.cols)))


def mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.nrows:
        raise LengthMismatch((a.cols, b.nrows))
    return BitMatrix(b.cols, tuple(combine_rows(r, list(b.rows)) for r in a.rows))


def mat_vec(m: BitMatrix, v: BitVec) -> BitVec:
    """m . v with v as a column vector."""
    if m.cols != v.length:
        raise LengthMismatch((m.cols, v.length))
    bits = 0
    for i, r in enumerate(m.rows):
        bits |= ((r & v.bits).bit_count() & 1) << i
    return BitVec(m.nrows, bits)


def vec_mat(v: BitVec, m: BitMatrix) -> BitVec:
    """v . m with v as a row vector."""
    if v.length != m.nrows:
        raise LengthMismatch((v.length, m.nrows))
    return BitVec(m.cols, combine_rows(v.bits, list(m.rows)))


def row_space_contains(m: BitMatrix, v: BitVec) -> bool:
    if v.length != m.cols:
        raise LengthMismatch((v.length, m.cols))
    red, piv = rref_ints(m.rows, m.cols)
    x = v.bits
    for p, r in zip(piv, red):
        if (x >> p) & 1:
            x ^= r
    return x == 0


def solve_row_combination(m: BitMatrix, v: BitVec) -> Optional[BitVec]:
    """Coefficients c with c . m = v, or None when v is outside the row space."""
    if v.length != m.cols:
        raise LengthMismatch((v.length, m.cols))
    n = m.nrows
    w = m.cols
    aug = [r | (1 << (w + i)) for i, r in enumerate(m.rows)]
    reduced: list[int] = []
    pivots: list[int] = []
    for row in aug:
        for p, r in zip(pivots, reduced):
            if (row >> p) & 1:
                row ^= r
        low = row & ((1 << w) - 1)
        if not low:
            continue
        p = (low & -low).bit_length() - 1
        idx = bisect_left(pivots, p)
        pivots.insert(idx, p)
        reduced.insert(idx, row)
        for i, r in enumerate(reduced):
            if i != idx and (r >> p) & 1:
                reduced[i] = r ^ row
    x = v.bits
    coeffs = 0
    for p, r in zip(pivots, reduced):
        if (x >> p) & 1:
            x ^= r & ((1 << w) - 1)
            coeffs ^= r >> w
    if x:
        return None
    return BitVec(n, coeffs)


def row_spaces_equal(a: BitMatrix, b: BitMatrix) -> bool:
    if a.cols != b.cols:
        raise LengthMismatch((a.cols, b.cols))
    return rref(a)[0] == rref(b)[0]


def symplectic_pairing(u: BitVec, v: BitVec, genus: int) -> int:
    """The standard symplectic form on basis a_1..a_g, b_1..b_g.

    Pairs a_i with b_i; evaluates sum_i u_i v_{g+i} + u_{g+i} v_i mod 2.
    """
    if genus < 0:
        raise ValueError("negative genus")
    if u.length != 2 * genus or v.length != 2 * genus:
        raise LengthMismatch((u.length, v.length, 2 * genus))
    low = (1 << genus) - 1
    x = (u.bits & low) & (v.bits >> genus)
    y = (u.bits >> genus) & (v.bits & low)
    return (x.bit_count() + y.bit_count()) & 1


def pairing_ints(u: int, v: int, genus: int) -> int:
    """``symplectic_pairing`` on raw packed ints (hot path)."""
    low = (1 << genus) - 1
    return (((u & low) & (v >> genus)).bit_count() + ((u >> genus) & (v & low)).bit_count()) & 1


def identity(n: int) -> BitMatrix:
    return BitMatrix(n, tuple(1 << i for i in range(n)))
