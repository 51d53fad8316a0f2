"""The binary symplectic dual polar space.

Points are the Lagrangian (maximal isotropic) subspaces of GF(2)^(2g)
under the standard symplectic form; lines are the triples of Lagrangians
through a common (g-1)-dimensional isotropic axis.  Everything is kept
canonical: a subspace is its unique rref basis, points are ordered
lexicographically on their serialized bases, and line/point indices are
stable across runs.

Enumeration never filters the full Grassmannian.  Each Lagrangian L is
cut out by its projection W to the a-coordinate half together with a
symmetric bilinear form on W, which parametrizes the points bijectively,
so the cost is linear in the number of points (3, 15, 135, 2295, 75735
for genus 1..5).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Optional

import numpy as np

from .gf2 import BitMatrix, kernel_ints, pairing_ints, rref_ints

DEFAULT_POINT_CAP = 1_000_000


class ResourceLimitExceeded(RuntimeError):
    pass


class NotCollinear(ValueError):
    pass


def lagrangian_count(genus: int) -> int:
    """prod_{i<=g} (2^i + 1)."""
    n = 1
    for i in range(1, genus + 1):
        n *= 2**i + 1
    return n


def line_count(genus: int) -> int:
    """Each point lies on 2^g - 1 lines and each line carries 3 points."""
    return lagrangian_count(genus) * (2**genus - 1) // 3


@dataclass(frozen=True)
class Lagrangian:
    """A maximal isotropic subspace, held as its canonical rref basis."""

    genus: int
    basis: BitMatrix

    def __post_init__(self):
        g = self.genus
        if self.basis.cols != 2 * g or self.basis.nrows != g:
            raise ValueError("basis must be g rows of width 2g")
        if not (g == 0 or self.basis.is_rref()):
            raise ValueError("basis must be in rref")
        rows = self.basis.rows
        for i in range(g):
            for j in range(i + 1, g):
                if pairing_ints(rows[i], rows[j], g):
                    raise ValueError("subspace is not isotropic")

    def to_strings(self) -> tuple[str, ...]:
        return self.basis.to_strings()

    def contains(self, bits: int) -> bool:
        x = bits
        for r in self.basis.rows:
            p = r & -r
            if x & p:
                x ^= r
        return x == 0

    def __str__(self) -> str:
        return ",".join(self.to_strings())


@dataclass(frozen=True)
class IsotropicLine:
    """Three collinear points through a common (g-1)-dimensional axis."""

    axis: BitMatrix
    points: tuple[int, int, int]


def _revbits(x: int, n: int) -> int:
    r = 0
    for i in range(n):
        if (x >> i) & 1:
            r |= 1 << (n - 1 - i)
    return r


def _sort_key(rows: Iterable[int], width: int) -> tuple[int, ...]:
    # identical ordering to comparing tuples of serialized row strings
    return tuple(_revbits(r, width) for r in rows)


def _pack(rows: Iterable[int], width: int) -> int:
    key = 1
    for r in rows:
        key = (key << width) | r
    return key


def _subspace_rrefs(n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All rref bases of subspaces of GF(2)^n as (rows, pivot columns)."""
    for k in range(n + 1):
        for pivots in combinations(range(n), k):
            pivset = set(pivots)
            free = [
                (i, j)
                for i in range(k)
                for j in range(pivots[i] + 1, n)
                if j not in pivset
            ]
            base = [1 << p for p in pivots]
            for bits in range(1 << len(free)):
                rows = list(base)
                for t, (i, j) in enumerate(free):
                    if (bits >> t) & 1:
                        rows[i] |= 1 << j
                yield tuple(rows), pivots


def _lagrangian_rows(genus: int) -> list[tuple[int, ...]]:
    """Canonical bases of every Lagrangian, sorted into canonical order.

    Chart construction: pick the projection W of L to the a-half (any
    subspace of GF(2)^g, in rref with pivot set P) and a symmetric k x k
    matrix S over GF(2); the rows w_j | sum_i S[i][j] e_{P_i} plus the
    annihilator of W on the b-half span one Lagrangian each, and every
    Lagrangian arises from exactly one chart.
    """
    g = genus
    out = []
    for wrows, pivots in _subspace_rrefs(g):
        k = len(wrows)
        comp = kernel_ints(wrows, g)
        npairs = k * (k + 1) // 2
        pairs = [(i, j) for i in range(k) for j in range(i, k)]
        for sym_bits in range(1 << npairs):
            bparts = [0] * k
            for t, (i, j) in enumerate(pairs):
                if (sym_bits >> t) & 1:
                    bparts[j] |= 1 << pivots[i]
                    if i != j:
                        bparts[i] |= 1 << pivots[j]
            rows = [wrows[j] | (bparts[j] << g) for j in range(k)]
            rows.extend(u << g for u in comp)
            red, _ = rref_ints(rows, 2 * g)
            out.append(tuple(red))
    out.sort(key=lambda rows: _sort_key(rows, 2 * g))
    return out


def enumerate_lagrangians(genus: int, max_points: Optional[int] = DEFAULT_POINT_CAP) -> tuple[Lagrangian, ...]:
    """All points of the space in canonical order.

    Raises ResourceLimitExceeded when the closed-form count exceeds
    ``max_points`` (pass None to lift the cap).
    """
    if genus < 0:
        raise ValueError("negative genus")
    expected = lagrangian_count(genus)
    if max_points is not None and expected > max_points:
        raise ResourceLimitExceeded(
            f"genus {genus} has {expected} points, above the cap {max_points}"
        )
    pts = tuple(
        Lagrangian(genus, BitMatrix(2 * genus, rows)) for rows in _lagrangian_rows(genus)
    )
    assert len(pts) == expected
    return pts


def _hyperplane_rows(rows: tuple[int, ...], width: int) -> Iterator[list[int]]:
    """Canonical bases of the (g-1)-subspaces of a g-dimensional row space."""
    g = len(rows)
    for phi in range(1, 1 << g):
        j = (phi & -phi).bit_length() - 1
        sub = [rows[i] ^ (rows[j] if (phi >> i) & 1 else 0) for i in range(g) if i != j]
        red, _ = rref_ints(sub, width)
        yield red


def intersect_rows(a: tuple[int, ...], b: tuple[int, ...], width: int) -> list[int]:
    """Zassenhaus intersection of two row spaces (canonical basis).

    Stacks [u | u] over [v | 0] with the sum block in the low columns,
    where elimination pivots first; reduced rows whose low block died
    carry an intersection vector in the high block.
    """
    stack = [r | (r << width) for r in a]
    stack.extend(b)
    red, _ = rref_ints(stack, 2 * width)
    low = (1 << width) - 1
    inter = [r >> width for r in red if (r & low) == 0 and (r >> width)]
    canon, _ = rref_ints(inter, width)
    return canon


def third_point(p: Lagrangian, q: Lagrangian) -> Lagrangian:
    """The third Lagrangian on the line through two collinear points."""
    if p.genus != q.genus:
        raise ValueError("genus mismatch")
    g = p.genus
    axis = intersect_rows(p.basis.rows, q.basis.rows, 2 * g)
    if len(axis) != g - 1:
        raise NotCollinear(
            f"intersection has dimension {len(axis)}, expected {g - 1}"
        )

    def extra(l: Lagrangian) -> int:
        for r in l.basis.rows:
            x = r
            for s in axis:
                piv = s & -s
                if x & piv:
                    x ^= s
            if x:
                return x
        raise AssertionError("point does not exceed the axis")

    rows = list(axis) + [extra(p) ^ extra(q)]
    red, _ = rref_ints(rows, 2 * g)
    return Lagrangian(g, BitMatrix(2 * g, tuple(red)))


class DualPolarSpace:
    """Cached point/line geometry for one genus."""

    def __init__(self, genus: int, max_points: Optional[int] = DEFAULT_POINT_CAP):
        if genus < 0:
            raise ValueError("negative genus")
        self.genus = genus
        self._max_points = max_points
        self._points: Optional[tuple[Lagrangian, ...]] = None
        self._index: Optional[dict[int, int]] = None
        self._line_triples: Optional[np.ndarray] = None
        self._line_axes: Optional[list[tuple[int, ...]]] = None
        self._incidence: Optional[tuple[np.ndarray, np.ndarray]] = None
        self._lines: Optional[tuple[IsotropicLine, ...]] = None

    @property
    def points(self) -> tuple[Lagrangian, ...]:
        if self._points is None:
            self._points = enumerate_lagrangians(self.genus, self._max_points)
        return self._points

    def _point_index(self) -> dict[int, int]:
        if self._index is None:
            w = 2 * self.genus
            self._index = {_pack(p.basis.rows, w): i for i, p in enumerate(self.points)}
        return self._index

    def index_of(self, p: Lagrangian) -> int:
        if p.genus != self.genus:
            raise ValueError("genus mismatch")
        return self._point_index()[_pack(p.basis.rows, 2 * self.genus)]

    def _build_lines(self) -> None:
        g = self.genus
        w = 2 * g
        by_axis: dict[int, list] = {}
        for idx, pt in enumerate(self.points):
            rows = pt.basis.rows
            for axis in _hyperplane_rows(rows, w):
                key = _pack(axis, w)
                rec = by_axis.get(key)
                if rec is None:
                    by_axis[key] = [tuple(axis), idx]
                else:
                    rec.append(idx)
        lines = []
        for rec in by_axis.values():
            axis, members = rec[0], rec[1:]
            assert len(members) == 3, "an axis must lie on exactly three points"
            lines.append((axis, tuple(sorted(members))))
        lines.sort(key=lambda t: _sort_key(t[0], w))
        self._line_axes = [axis for axis, _ in lines]
        self._line_triples = np.array([pts for _, pts in lines], dtype=np.int64).reshape(
            len(lines), 3
        )
        expected = line_count(g)
        assert len(lines) == expected, (len(lines), expected)

    @property
    def line_triples(self) -> np.ndarray:
        """(n_lines, 3) point indices, canonically ordered."""
        if self._line_triples is None:
            self._build_lines()
        return self._line_triples

    @property
    def line_axes(self) -> list[tuple[int, ...]]:
        if self._line_axes is None:
            self._build_lines()
        return self._line_axes

    @property
    def lines(self) -> tuple[IsotropicLine, ...]:
        if self._lines is None:
            w = 2 * self.genus
            self._lines = tuple(
                IsotropicLine(BitMatrix(w, axis), (int(a), int(b), int(c)))
                for axis, (a, b, c) in zip(self.line_axes, self.line_triples)
            )
        return self._lines

    def _line_incidence(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR arrays: for each point, the ids of the lines through it."""
        if self._incidence is None:
            triples = self.line_triples
            npts = len(self.points)
            flat = triples.ravel()
            order = np.argsort(flat, kind="stable")
            line_ids = np.repeat(np.arange(len(triples), dtype=np.int64), 3)[order]
            counts = np.bincount(flat, minlength=npts)
            indptr = np.concatenate(([0], np.cumsum(counts)))
            self._incidence = (indptr, line_ids)
        return self._incidence

    def closure(self, seed: Iterable[int]) -> frozenset[int]:
        """Smallest point set containing the seed and closed under the
        two-of-three line completion rule."""
        npts = len(self.points)
        seed = list(dict.fromkeys(int(s) for s in seed))
        for s in seed:
            if not 0 <= s < npts:
                raise IndexError(f"point index {s} out of range")
        if self.genus == 0 or not seed:
            return frozenset(seed)
        indptr, line_ids = self._line_incidence()
        triples = self.line_triples
        included = np.zeros(npts, dtype=bool)
        hits = np.zeros(len(triples), dtype=np.int8)
        queue = list(seed)
        for s in seed:
            included[s] = True
        qi = 0
        while qi < len(queue):
            p = queue[qi]
            qi += 1
            for lid in line_ids[indptr[p] : indptr[p + 1]]:
                hits[lid] += 1
                if hits[lid] == 2:
                    a, b, c = triples[lid]
                    for m in (a, b, c):
                        if not included[m]:
                            included[m] = True
                            queue.append(int(m))
        return frozenset(int(i) for i in np.nonzero(included)[0])


@lru_cache(maxsize=None)
def space(genus: int) -> DualPolarSpace:
    return DualPolarSpace(genus)


def enumerate_lines(genus: int) -> tuple[IsotropicLine, ...]:
    return space(genus).lines


def geometric_closure(seed: Iterable[int], genus: int) -> frozenset[int]:
    return space(genus).closure(seed)
