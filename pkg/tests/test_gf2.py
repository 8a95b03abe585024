import numpy as np
import pytest

from floqcliff.gf2 import BitMatrix, BitVector, kernel_basis, mat_mul, mat_vec, rank


def test_rank_identity():
    assert rank(BitMatrix.identity(4)) == 4


def test_rank_zero():
    assert rank(BitMatrix.zeros(3, 5)) == 0


def test_rank_dependent_rows():
    # row2 = row1, hand elimination gives rank 1
    assert rank(BitMatrix.from_dense([[1, 1], [1, 1]])) == 1


def test_rank_does_not_mutate_input():
    m = BitMatrix.from_dense([[1, 1], [1, 0], [0, 1]])
    before = m.payload.copy()
    rank(m)
    kernel_basis(m)
    assert np.array_equal(m.payload, before)


def test_kernel_identity_empty():
    assert kernel_basis(BitMatrix.identity(4)) == []


def test_kernel_zero_full():
    basis = kernel_basis(BitMatrix.zeros(2, 3))
    assert len(basis) == 3


def test_kernel_hand_solved():
    basis = kernel_basis(BitMatrix.from_dense([[1, 1], [0, 0]]))
    assert len(basis) == 1
    assert list(basis[0].to_dense()) == [1, 1]


def test_matmul_identity_and_zero():
    m = BitMatrix.from_dense([[1, 0, 1], [0, 1, 1]])
    assert mat_mul(BitMatrix.identity(2), m) == m
    z = BitMatrix.zeros(3, 2)
    assert mat_mul(m, z) == BitMatrix.zeros(2, 2)


def test_matmul_hand_multiplied():
    a = BitMatrix.from_dense([[1, 1], [0, 1]])
    b = BitMatrix.from_dense([[1, 0], [1, 1]])
    assert mat_mul(a, b) == BitMatrix.from_dense([[0, 1], [1, 1]])


def test_matmul_dimension_mismatch():
    with pytest.raises(ValueError):
        mat_mul(BitMatrix.zeros(2, 3), BitMatrix.zeros(2, 2))


def test_pack_roundtrip_wide():
    rng = np.random.default_rng(7)
    for cols in (1, 63, 64, 65, 130):
        arr = rng.integers(0, 2, size=(5, cols)).astype(np.uint8)
        assert np.array_equal(BitMatrix.from_dense(arr).to_dense(), arr)
    vec = rng.integers(0, 2, size=70).astype(np.uint8)
    assert np.array_equal(BitVector.from_dense(vec).to_dense(), vec)


def test_rank_equals_rank_of_transpose():
    rng = np.random.default_rng(11)
    for _ in range(25):
        r, c = rng.integers(1, 9, size=2)
        m = BitMatrix.from_dense(rng.integers(0, 2, size=(r, c)))
        assert rank(m) == rank(m.transpose())


def test_kernel_vectors_annihilate_and_are_independent():
    rng = np.random.default_rng(13)
    for _ in range(30):
        r, c = rng.integers(1, 10, size=2)
        m = BitMatrix.from_dense(rng.integers(0, 2, size=(r, c)))
        basis = kernel_basis(m)
        assert len(basis) == c - rank(m)
        for v in basis:
            assert not mat_vec(m, v).to_dense().any()
        if basis:
            stacked = BitMatrix.from_rows(basis)
            assert rank(stacked) == len(basis)


def test_wide_matrix_fallback_paths():
    # > 64 rows and columns exercises the word-level elimination fallback
    rng = np.random.default_rng(23)
    n, r = 70, 50
    base = np.zeros((n, n), dtype=np.uint8)
    base[:r, :r] = np.eye(r, dtype=np.uint8)
    rp, cp = rng.permutation(n), rng.permutation(n)
    m = BitMatrix.from_dense(base[rp][:, cp])
    assert rank(m) == r
    basis = kernel_basis(m)
    assert len(basis) == n - r
    for v in basis:
        assert not mat_vec(m, v).to_dense().any()
    stacked = BitMatrix.from_rows(basis)
    assert rank(stacked) == len(basis)


def test_matmul_associative():
    rng = np.random.default_rng(17)
    for _ in range(20):
        n1, n2, n3, n4 = rng.integers(1, 7, size=4)
        a = BitMatrix.from_dense(rng.integers(0, 2, size=(n1, n2)))
        b = BitMatrix.from_dense(rng.integers(0, 2, size=(n2, n3)))
        c = BitMatrix.from_dense(rng.integers(0, 2, size=(n3, n4)))
        assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))
