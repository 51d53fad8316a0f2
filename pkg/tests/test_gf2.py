from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarspan import gf2
from polarspan.gf2 import BitMatrix, BitVec


def bit_matrices(max_rows=6, max_cols=8):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(
            st.integers(0, (1 << c) - 1), min_size=1, max_size=max_rows
        ).map(lambda rows: BitMatrix(c, tuple(rows)))
    )


def dense(m: BitMatrix) -> np.ndarray:
    return np.array(
        [[m.entry(i, j) for j in range(m.cols)] for i in range(m.nrows)],
        dtype=np.uint8,
    )


def row_space(m: BitMatrix) -> set[int]:
    span = {0}
    for r in m.rows:
        span |= {s ^ r for s in span}
    return span


def test_from01_roundtrip():
    v = BitVec.from01("10110")
    assert v.to01() == "10110"
    assert v.bits == 0b01101  # LSB is the first character
    assert v.weight() == 3


def test_bitvec_xor_length_checked():
    with pytest.raises(gf2.LengthMismatch):
        BitVec(3, 1) ^ BitVec(4, 1)


@given(bit_matrices())
@settings(max_examples=200)
def test_rref_canonical_and_span_preserving(m):
    r, rank, pivots = gf2.rref(m)
    assert r.is_rref()
    assert rank == len(pivots)
    assert row_space(r) == row_space(m)
    assert len(row_space(m)) == 1 << rank


@given(bit_matrices())
@settings(max_examples=200)
def test_kernel_annihilates_and_has_right_dimension(m):
    k = gf2.kernel(m)
    _, rank, _ = gf2.rref(m)
    assert k.nrows == m.cols - rank
    for i in range(k.nrows):
        v = k.row(i)
        assert gf2.mat_vec(m, v).bits == 0
    # kernel rows independent: rref keeps them all
    _, krank, _ = gf2.rref(k)
    assert krank == k.nrows


@given(bit_matrices(max_rows=5, max_cols=5))
@settings(max_examples=100)
def test_mul_matches_dense_matmul(a):
    assert gf2.mul(a, gf2.identity(a.cols)).rows == a.rows
    rows = (a.rows * a.cols)[: a.cols]
    sq = BitMatrix(a.cols, tuple(rows))
    pr = gf2.mul(a, sq)
    want = dense(a) @ dense(sq) % 2
    assert np.array_equal(dense(pr), want)


@given(bit_matrices())
@settings(max_examples=100)
def test_transpose_involution(m):
    assert gf2.transpose(gf2.transpose(m)).rows == m.rows


@given(bit_matrices(), st.integers(0, 255))
@settings(max_examples=150)
def test_row_space_membership_and_solve(m, seed):
    coeffs = seed & ((1 << m.nrows) - 1)
    v = BitVec(m.cols, gf2.combine_rows(coeffs, list(m.rows)))
    assert gf2.row_space_contains(m, v)
    sol = gf2.solve_row_combination(m, v)
    assert sol is not None
    assert gf2.vec_mat(sol, m).bits == v.bits


def test_solve_row_combination_rejects_outsider():
    m = BitMatrix.from_strings(["100", "010"])
    assert gf2.solve_row_combination(m, BitVec.from01("001")) is None
    assert not gf2.row_space_contains(m, BitVec.from01("101"))


def brute_pairing(u: int, v: int, g: int) -> int:
    # a_i is coordinate i, b_i is coordinate g+i
    total = 0
    for i in range(g):
        a1 = (u >> i) & 1
        b1 = (u >> (g + i)) & 1
        a2 = (v >> i) & 1
        b2 = (v >> (g + i)) & 1
        total ^= (a1 & b2) ^ (b1 & a2)
    return total


@given(st.integers(1, 4), st.data())
@settings(max_examples=200)
def test_symplectic_pairing_matches_brute_force(g, data):
    u = data.draw(st.integers(0, (1 << (2 * g)) - 1))
    v = data.draw(st.integers(0, (1 << (2 * g)) - 1))
    assert gf2.pairing_ints(u, v, g) == brute_pairing(u, v, g)
    # alternating and symmetric over GF(2)
    assert gf2.pairing_ints(u, u, g) == 0
    assert gf2.pairing_ints(u, v, g) == gf2.pairing_ints(v, u, g)
    w = BitVec(2 * g, u)
    x = BitVec(2 * g, v)
    assert gf2.symplectic_pairing(w, x, g) == gf2.pairing_ints(u, v, g)


@given(st.integers(1, 4), st.data())
@settings(max_examples=100)
def test_symplectic_pairing_bilinear(g, data):
    top = (1 << (2 * g)) - 1
    u, v, w = (data.draw(st.integers(0, top)) for _ in range(3))
    lhs = gf2.pairing_ints(u ^ v, w, g)
    assert lhs == gf2.pairing_ints(u, w, g) ^ gf2.pairing_ints(v, w, g)


def test_rref_ints_reports_pivots_sorted():
    rows = [0b110, 0b011, 0b101]
    red, pivots = gf2.rref_ints(rows, 3)
    assert pivots == sorted(pivots)
    assert len(red) == len(pivots) == 2
