"""Bit-packed linear algebra over GF(2).

Matrices are stored row-major with 64 columns per machine word, so row
elimination is a handful of word-wide XORs.  Rank and kernel extraction are
the hot operations (entanglement entropy, invariant-group generators); they
always work on an internal copy and never mutate their inputs.
"""

from __future__ import annotations

import numpy as np

_WORD = 64


def _n_words(cols: int) -> int:
    return max(1, (cols + _WORD - 1) // _WORD)


class BitVector:
    """Packed vector over GF(2). Out-of-range bits are kept at zero."""

    __slots__ = ("length", "payload")

    def __init__(self, length: int, payload: np.ndarray | None = None):
        self.length = int(length)
        if payload is None:
            payload = np.zeros(_n_words(self.length), dtype=np.uint64)
        self.payload = payload

    @classmethod
    def from_dense(cls, bits) -> "BitVector":
        bits = np.asarray(bits, dtype=np.uint8) & 1
        v = cls(bits.size)
        idx = np.nonzero(bits)[0]
        for i in idx:
            v.payload[i // _WORD] |= np.uint64(1) << np.uint64(i % _WORD)
        return v

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.uint8)
        for i in range(self.length):
            out[i] = (int(self.payload[i // _WORD]) >> (i % _WORD)) & 1
        return out

    def get(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (int(self.payload[i // _WORD]) >> (i % _WORD)) & 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.length == other.length
            and bool(np.array_equal(self.payload, other.payload))
        )

    def __hash__(self):
        return hash((self.length, self.payload.tobytes()))

    def __repr__(self):
        return f"BitVector({''.join(str(b) for b in self.to_dense())})"


class BitMatrix:
    """Packed row-major matrix over GF(2)."""

    __slots__ = ("rows", "cols", "payload")

    def __init__(self, rows: int, cols: int, payload: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        if payload is None:
            payload = np.zeros((self.rows, _n_words(self.cols)), dtype=np.uint64)
        self.payload = payload

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls(n, n)
        for i in range(n):
            m.payload[i, i // _WORD] |= np.uint64(1) << np.uint64(i % _WORD)
        return m

    @classmethod
    def from_dense(cls, arr) -> "BitMatrix":
        arr = np.atleast_2d(np.asarray(arr, dtype=np.uint8) & 1)
        rows, cols = arr.shape
        m = cls(rows, cols)
        nw = m.payload.shape[1]
        padded = np.zeros((rows, nw * _WORD), dtype=np.uint8)
        padded[:, :cols] = arr
        # pack 64 columns at a time
        weights = (np.uint64(1) << np.arange(_WORD, dtype=np.uint64))
        for w in range(nw):
            block = padded[:, w * _WORD : (w + 1) * _WORD].astype(np.uint64)
            m.payload[:, w] = block @ weights
        return m

    @classmethod
    def from_rows(cls, rows: list[BitVector]) -> "BitMatrix":
        if not rows:
            raise ValueError("need at least one row")
        cols = rows[0].length
        if any(r.length != cols for r in rows):
            raise ValueError("row lengths differ")
        m = cls(len(rows), cols)
        for i, r in enumerate(rows):
            m.payload[i, : r.payload.size] = r.payload
        return m

    # -- views -------------------------------------------------------------

    def to_dense(self) -> np.ndarray:
        nw = self.payload.shape[1]
        out = np.zeros((self.rows, nw * _WORD), dtype=np.uint8)
        for w in range(nw):
            word = self.payload[:, w]
            for b in range(_WORD):
                out[:, w * _WORD + b] = (word >> np.uint64(b)).astype(np.uint8) & 1
        return out[:, : self.cols]

    def get(self, i: int, j: int) -> int:
        return (int(self.payload[i, j // _WORD]) >> (j % _WORD)) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.payload[i].copy())

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.payload.copy())

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and bool(np.array_equal(self.payload, other.payload))
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.payload.tobytes()))

    def __repr__(self):
        lines = ["".join(str(b) for b in row) for row in self.to_dense()]
        return "BitMatrix([" + ", ".join(lines) + "])"


def _eliminate(payload: np.ndarray, rows: int, cols: int):
    """In-place forward elimination; returns pivot column list."""
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        w, b = divmod(c, _WORD)
        colbits = (payload[r:, w] >> np.uint64(b)).astype(np.uint8) & 1
        hits = np.nonzero(colbits)[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            payload[[r, p]] = payload[[p, r]]
        colall = (payload[:, w] >> np.uint64(b)).astype(np.uint8) & 1
        colall[r] = 0
        mask = colall.astype(bool)
        if mask.any():
            payload[mask] ^= payload[r]
        pivots.append(c)
        r += 1
    return pivots


def _row_ints(m: BitMatrix) -> list[int]:
    # cols <= 64: each row fits one word
    return [int(w) for w in m.payload[:, 0]]


def _col_ints(m: BitMatrix) -> list[int]:
    # rows <= 64: pack each column into one integer (bit i = row i)
    weights = np.uint64(1) << np.arange(m.rows, dtype=np.uint64)
    return [int(v) for v in m.to_dense().T.astype(np.uint64) @ weights]


def _reduce_rank(vectors: list[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            low = v & (-v)
            other = pivots.get(low)
            if other is None:
                pivots[low] = v
                break
            v ^= other
    return len(pivots)


def _int_to_bitvector(value: int, length: int) -> BitVector:
    out = BitVector(length)
    for w in range(out.payload.size):
        out.payload[w] = (value >> (64 * w)) & _WORD_MASK
    return out


_WORD_MASK = (1 << 64) - 1


def rank(m: BitMatrix) -> int:
    """Gaussian-elimination rank over GF(2)."""
    if m.cols <= _WORD:
        return _reduce_rank(_row_ints(m))
    if m.rows <= _WORD:
        return _reduce_rank(_col_ints(m))
    work = m.payload.copy()
    return len(_eliminate(work, m.rows, m.cols))


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    """Basis of the right null space {v : m v = 0 over GF(2)}.

    The returned basis has size ``cols - rank(m)`` and leaves ``m`` untouched.
    """
    if m.rows <= _WORD:
        # column reduction with an identity tail: a column whose data part
        # cancels yields a kernel vector in the tail bits
        cols = _col_ints(m)
        data_mask = (1 << m.rows) - 1
        pivots: dict[int, int] = {}
        basis = []
        for j, c in enumerate(cols):
            v = c | (1 << (m.rows + j))
            while True:
                data = v & data_mask
                if data == 0:
                    basis.append(_int_to_bitvector(v >> m.rows, m.cols))
                    break
                low = data & (-data)
                other = pivots.get(low)
                if other is None:
                    pivots[low] = v
                    break
                v ^= other
        return basis
    work = m.payload.copy()
    pivots_list = _eliminate(work, m.rows, m.cols)
    pivot_set = set(pivots_list)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    reduced = BitMatrix(m.rows, m.cols, work)
    basis = []
    for f in free_cols:
        dense = np.zeros(m.cols, dtype=np.uint8)
        dense[f] = 1
        for r_idx, p_col in enumerate(pivots_list):
            dense[p_col] = reduced.get(r_idx, f)
        basis.append(BitVector.from_dense(dense))
    return basis


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Product over GF(2); requires a.cols == b.rows."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.cols} != {b.rows}")
    sel = a.to_dense().astype(bool)  # (a.rows, a.cols)
    out = np.zeros((a.rows, b.payload.shape[1]), dtype=np.uint64)
    # out[i] = XOR of b rows k where a[i, k] == 1
    masked = np.where(sel[:, :, None], b.payload[None, :, :], np.uint64(0))
    np.bitwise_xor.reduce(masked, axis=1, out=out)
    return BitMatrix(a.rows, b.cols, out)


def mat_vec(m: BitMatrix, v: BitVector) -> BitVector:
    if m.cols != v.length:
        raise ValueError(f"dimension mismatch: {m.cols} != {v.length}")
    # parity of (row AND v) per row, word-wise popcount
    anded = m.payload & v.payload[None, : m.payload.shape[1]]
    counts = np.zeros(m.rows, dtype=np.int64)
    for w in range(anded.shape[1]):
        counts += np.bitwise_count(anded[:, w]).astype(np.int64)
    return BitVector.from_dense((counts & 1).astype(np.uint8))
