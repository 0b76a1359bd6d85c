"""Bit-packed GF(2) matrices against the naive unpacked reference."""

from __future__ import annotations

import random

import pytest

from reference import (
    ref_from_binmatrix,
    ref_kernel,
    ref_matvec,
    ref_mul,
    ref_rank,
    ref_solve,
    ref_transpose,
)
from twistbundle import (
    BinMatrix,
    blockdiag,
    gf2_inverse,
    gf2_mul,
    gf2_rank,
    is_monomial,
    kernel_basis,
    matrix_from_text,
    matrix_to_text,
    solve_in_image,
    transpose,
)
from twistbundle.binlin import SpanSolver, iter_bits
from twistbundle.errors import ShapeError, SingularMatrixError, ValidationError


def rand_matrix(rng: random.Random, rows: int, cols: int, density: float = 0.5) -> BinMatrix:
    data = []
    for _ in range(rows):
        row = 0
        for j in range(cols):
            if rng.random() < density:
                row |= 1 << j
        data.append(row)
    return BinMatrix(rows, cols, tuple(data))


def rand_invertible(rng: random.Random, n: int) -> BinMatrix:
    rows = list(BinMatrix.identity(n).data)
    for _ in range(4 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            rows[i] ^= rows[j]
    rng.shuffle(rows)
    return BinMatrix(n, n, tuple(rows))


def test_iter_bits():
    assert list(iter_bits(0)) == []
    assert list(iter_bits(0b101001)) == [0, 3, 5]


def test_binmatrix_validation():
    with pytest.raises(ValidationError):
        BinMatrix(1, 2, (4,))  # bit outside the two columns
    with pytest.raises(ValidationError):
        BinMatrix(1, 2, (-1,))
    with pytest.raises(ValidationError):
        BinMatrix(2, 2, (1,))  # row count mismatch


def test_binmatrix_immutable():
    m = BinMatrix.identity(2)
    with pytest.raises(AttributeError):
        m.rows = 5


def test_binmatrix_accessors():
    m = BinMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
    assert (m.rows, m.cols) == (2, 3)
    assert m.get(0, 2) == 1
    assert m.get(1, 0) == 0
    assert m.row_weights() == [2, 2]
    assert not m.is_zero()
    assert BinMatrix.zeros(3, 4).is_zero()
    assert BinMatrix.identity(3).get(2, 2) == 1


def test_mul_against_reference():
    rng = random.Random(31)
    for _ in range(60):
        n, k, m = rng.randint(1, 16), rng.randint(1, 16), rng.randint(1, 16)
        a, b = rand_matrix(rng, n, k), rand_matrix(rng, k, m)
        got = ref_from_binmatrix(gf2_mul(a, b))
        want = ref_mul(ref_from_binmatrix(a), ref_from_binmatrix(b))
        assert got == want


def test_mul_shape_mismatch():
    with pytest.raises(ShapeError):
        gf2_mul(BinMatrix.zeros(2, 3), BinMatrix.zeros(2, 3))


def test_transpose_against_reference():
    rng = random.Random(37)
    for _ in range(40):
        a = rand_matrix(rng, rng.randint(1, 12), rng.randint(1, 12))
        assert ref_from_binmatrix(transpose(a)) == ref_transpose(ref_from_binmatrix(a))
        assert transpose(transpose(a)) == a


def test_rank_against_reference():
    rng = random.Random(41)
    for _ in range(60):
        a = rand_matrix(rng, rng.randint(1, 20), rng.randint(1, 20))
        assert gf2_rank(a) == ref_rank(ref_from_binmatrix(a))


def test_kernel_properties():
    rng = random.Random(43)
    for _ in range(40):
        a = rand_matrix(rng, rng.randint(1, 14), rng.randint(1, 14))
        basis = kernel_basis(a)
        assert len(basis) == a.cols - gf2_rank(a)
        lists = ref_from_binmatrix(a)
        for v in basis:
            vec = [(v >> j) & 1 for j in range(a.cols)]
            assert ref_matvec(lists, vec) == [0] * a.rows
        if basis:
            stacked = BinMatrix(len(basis), a.cols, tuple(basis))
            assert gf2_rank(stacked) == len(basis)


def test_kernel_matches_reference_span():
    rng = random.Random(47)
    for _ in range(25):
        a = rand_matrix(rng, rng.randint(1, 10), rng.randint(1, 10))
        mine = kernel_basis(a)
        theirs = ref_kernel(ref_from_binmatrix(a))
        assert len(mine) == len(theirs)
        solver = SpanSolver(list(mine), a.cols)
        for vec in theirs:
            packed = sum(bit << j for j, bit in enumerate(vec))
            assert solver.contains(packed)


def test_span_solver():
    vectors = [0b011, 0b110]
    s = SpanSolver(vectors, 3)
    assert s.rank == 2
    assert s.contains(0)
    assert s.contains(0b101)
    assert not s.contains(0b111)
    assert not s.contains(0b001)


def test_solve_in_image():
    rng = random.Random(53)
    for _ in range(40):
        a = rand_matrix(rng, rng.randint(1, 12), rng.randint(1, 12))
        lists = ref_from_binmatrix(a)
        x = [rng.randint(0, 1) for _ in range(a.cols)]
        v = ref_matvec(lists, x)
        packed_v = sum(bit << i for i, bit in enumerate(v))
        assert solve_in_image(a, packed_v)
        probe = [rng.randint(0, 1) for _ in range(a.rows)]
        packed_probe = sum(bit << i for i, bit in enumerate(probe))
        assert solve_in_image(a, packed_probe) == (ref_solve(lists, probe) is not None)


def test_is_monomial():
    assert is_monomial(BinMatrix.identity(4))
    perm = BinMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert is_monomial(perm)
    assert not is_monomial(BinMatrix.zeros(3, 3))
    assert not is_monomial(BinMatrix.from_rows([[1, 1], [0, 1]]))
    assert not is_monomial(BinMatrix.from_rows([[1, 0], [1, 0]]))
    assert not is_monomial(BinMatrix.zeros(2, 3))


def test_inverse():
    rng = random.Random(59)
    for _ in range(25):
        n = rng.randint(1, 16)
        a = rand_invertible(rng, n)
        inv = gf2_inverse(a)
        assert gf2_mul(a, inv) == BinMatrix.identity(n)
        assert gf2_mul(inv, a) == BinMatrix.identity(n)
    with pytest.raises(SingularMatrixError):
        gf2_inverse(BinMatrix.from_rows([[1, 1], [1, 1]]))
    with pytest.raises(ShapeError):
        gf2_inverse(BinMatrix.zeros(2, 3))


def test_blockdiag():
    a = BinMatrix.from_rows([[1, 1]])
    b = BinMatrix.identity(2)
    m = blockdiag([a, b])
    assert (m.rows, m.cols) == (3, 4)
    assert ref_from_binmatrix(m) == [
        [1, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
    ]
    assert blockdiag([]).rows == 0


def test_text_round_trip():
    rng = random.Random(61)
    for _ in range(20):
        a = rand_matrix(rng, rng.randint(1, 10), rng.randint(1, 10))
        assert matrix_from_text(matrix_to_text(a)) == a


def test_text_format():
    m = BinMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
    text = matrix_to_text(m)
    lines = text.splitlines()
    assert lines[0] == "2 3"
    assert lines[1] == "101"
    assert lines[2] == "011"


def test_text_errors():
    with pytest.raises(ValidationError):
        matrix_from_text("")
    with pytest.raises(ValidationError):
        matrix_from_text("2\n10\n01\n")
    with pytest.raises(ValidationError):
        matrix_from_text("1 3\n10\n")
    with pytest.raises(ValidationError):
        matrix_from_text("1 2\n1x\n")
    with pytest.raises(ValidationError):
        matrix_from_text("2 2\n10\n")
