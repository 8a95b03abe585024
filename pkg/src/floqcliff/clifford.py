"""n-qubit Clifford unitaries as symplectic tableaus with exact sign data.

A gate stores, for each of the 2n Pauli generators X_0..X_{n-1}, Z_0..Z_{n-1},
the (x|z) coordinates of its image (columns of a 2n x 2n symplectic matrix
over GF(2)) together with an i-exponent that fixes the image phase exactly.
Conjugation of an arbitrary Pauli then reduces to one GF(2) matrix-vector
product plus a quadratic form for the phase, which is what makes composing
hundreds of thousands of gates per run affordable.

Coordinate convention: vectors are (x_0..x_{n-1} | z_0..z_{n-1}); the image of
a Pauli with coordinates v has coordinates S @ v.  Phases are tracked against
the canonical ordered product P(v) = prod X_i^{x_i} * prod Z_i^{z_i}; the
Hermitian representative is H(v) = i^{y(v)} P(v) with y(v) the number of
sites where both bits are set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitMatrix, BitVector
from .pauli import PauliOperator

__all__ = [
    "CliffordGate",
    "CliffordEnsembleSpec",
    "conjugate",
    "compose",
    "inverse",
    "identity_gate",
    "from_pauli_images",
    "sample_uniform",
    "random_clifford",
    "symplectic_form",
]


def symplectic_form(n: int) -> np.ndarray:
    J = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    J[:n, n:] = np.eye(n, dtype=np.uint8)
    J[n:, :n] = np.eye(n, dtype=np.uint8)
    return J


def _is_symplectic(S: np.ndarray, n: int) -> bool:
    J = symplectic_form(n)
    return np.array_equal((S.T.astype(np.int64) @ J @ S) % 2, J)


def _y_count(V: np.ndarray, n: int) -> np.ndarray:
    """Number of Y letters per row of a (m, 2n) coordinate array."""
    V = np.atleast_2d(V)
    return (V[:, :n].astype(np.int64) * V[:, n:]).sum(axis=1)


class CliffordGate:
    """Clifford unitary acting on ``n`` qubits, up to global phase."""

    __slots__ = ("n", "_s", "_e", "_m", "_bitmatrix")

    def __init__(self, s, phase_exp, validate: bool = True):
        s = np.asarray(s, dtype=np.uint8) % 2
        e = np.asarray(phase_exp, dtype=np.uint8) % 4
        n2 = s.shape[0]
        if s.shape != (n2, n2) or n2 % 2 or e.shape != (n2,):
            raise ValueError("need a 2n x 2n matrix and 2n phase exponents")
        self.n = n2 // 2
        self._s = s
        self._e = e
        self._m = None
        self._bitmatrix = None
        if validate:
            if not _is_symplectic(s, self.n):
                raise ValueError("matrix is not symplectic: images break commutation relations")
            ys = _y_count(s.T, self.n) % 2
            if np.any((e % 2) != ys):
                raise ValueError("non-Hermitian generator image")

    # -- spec-facing views ---------------------------------------------------

    @property
    def s(self) -> BitMatrix:
        if self._bitmatrix is None:
            self._bitmatrix = BitMatrix.from_dense(self._s)
        return self._bitmatrix

    @property
    def r(self) -> BitVector:
        """Sign bit per generator image: 0 for +H(v), 1 for -H(v)."""
        ys = _y_count(self._s.T, self.n)
        return BitVector.from_dense(((self._e.astype(np.int64) - ys) // 2) % 2)

    @property
    def s_dense(self) -> np.ndarray:
        return self._s

    @property
    def phase_exponents(self) -> np.ndarray:
        return self._e

    # -- phase quadratic form --------------------------------------------------

    @property
    def _cross(self) -> np.ndarray:
        # M[k, j] = <z-part of image k, x-part of image j> mod 2, k < j
        if self._m is None:
            n = self.n
            cross = (self._s[n:, :].T.astype(np.int64) @ self._s[:n, :]) % 2
            self._m = np.triu(cross, 1)
        return self._m

    def phase_exponent_of(self, V: np.ndarray) -> np.ndarray:
        """i-exponent phi(v) with U P(v) U^dag = i^phi(v) P(S v), per row of V."""
        V = np.atleast_2d(V).astype(np.int64)
        lin = V @ self._e.astype(np.int64)
        quad = ((V @ self._cross) * V).sum(axis=1) % 2
        return (lin + 2 * quad) % 4

    def image_coords(self, V: np.ndarray) -> np.ndarray:
        V = np.atleast_2d(V)
        return (V.astype(np.uint8) @ self._s.T) % 2

    def conjugate_rows(self, V: np.ndarray, signs: np.ndarray):
        """Conjugate Hermitian Paulis given as coordinate rows plus sign bits."""
        V = np.atleast_2d(V)
        out = self.image_coords(V)
        delta = (
            self.phase_exponent_of(V) + _y_count(V, self.n) - _y_count(out, self.n)
        ) % 4
        if np.any(delta % 2):
            raise AssertionError("Hermitian Pauli conjugated to non-Hermitian image")
        return out, (np.asarray(signs, dtype=np.uint8) + (delta // 2)) % 2

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CliffordGate)
            and self.n == other.n
            and np.array_equal(self._s, other._s)
            and np.array_equal(self._e, other._e)
        )

    def __hash__(self):
        return hash((self.n, self._s.tobytes(), self._e.tobytes()))

    def __repr__(self):
        return f"CliffordGate(n={self.n})"

    def render_fixture(self) -> str:
        """Gate fixture format: n, then the 2n generator images in text form."""
        sites = [(i,) for i in range(self.n)]
        lines = [str(self.n)]
        for j in range(2 * self.n):
            v = self._s[:, j]
            y = int(_y_count(v[None, :], self.n)[0])
            p = PauliOperator.from_coords(sites, v, (int(self._e[j]) - y) % 4)
            lines.append(p.render())
        return "\n".join(lines)


def identity_gate(n: int) -> CliffordGate:
    return CliffordGate(np.eye(2 * n, dtype=np.uint8), np.zeros(2 * n, dtype=np.uint8), validate=False)


def parse_fixture(text: str) -> CliffordGate:
    """Inverse of :meth:`CliffordGate.render_fixture` (validates on build)."""
    from .pauli import parse as parse_pauli

    lines = [ln for ln in text.splitlines() if ln.strip()]
    n = int(lines[0])
    if len(lines) != 2 * n + 1:
        raise ValueError(f"expected {2 * n} generator images, got {len(lines) - 1}")
    images = [
        (parse_pauli(lines[1 + j]), parse_pauli(lines[1 + n + j])) for j in range(n)
    ]
    return from_pauli_images(images)


def conjugate(g: CliffordGate, p: PauliOperator, sites=None) -> PauliOperator:
    """g p g^dag for a Pauli supported on the gate's qubits.

    ``sites`` gives the lattice labels of the gate's qubits in order; it
    defaults to (0,), (1,), ... so gate-local operators work out of the box.
    """
    if sites is None:
        sites = [(i,) for i in range(g.n)]
    v = p.coords_on(sites)
    out = g.image_coords(v)[0]
    phi = int(g.phase_exponent_of(v)[0])
    y_in = int(_y_count(v[None, :], g.n)[0])
    y_out = int(_y_count(out[None, :], g.n)[0])
    return PauliOperator.from_coords(sites, out, (p.phase_exp + y_in + phi - y_out) % 4)


def compose(g2: CliffordGate, g1: CliffordGate) -> CliffordGate:
    """Gate implementing g2 after g1 (conjugation g2 g1 p g1^dag g2^dag)."""
    if g1.n != g2.n:
        raise ValueError("size mismatch")
    s = (g2._s.astype(np.uint8) @ g1._s) % 2
    e = (g1._e.astype(np.int64) + g2.phase_exponent_of(g1._s.T)) % 4
    return CliffordGate(s, e, validate=False)


def inverse(g: CliffordGate) -> CliffordGate:
    J = symplectic_form(g.n)
    s_inv = (J @ g._s.T @ J) % 2
    e_inv = (-g.phase_exponent_of(s_inv.T)) % 4
    return CliffordGate(s_inv, e_inv, validate=False)


def from_pauli_images(images) -> CliffordGate:
    """Build a gate from the images of the 2n generators.

    ``images`` is a list of n pairs (image of X_i, image of Z_i), each a
    Hermitian PauliOperator on sites (0,)..(n-1,).  Raises if any image is
    non-Hermitian or the set violates the commutation relations.
    """
    n = len(images)
    sites = [(i,) for i in range(n)]
    ordered = [pair[0] for pair in images] + [pair[1] for pair in images]
    cols = []
    exps = []
    for p in ordered:
        if not p.is_hermitian():
            raise ValueError(f"non-Hermitian image: {p.render()}")
        cols.append(p.coords_on(sites))
        exps.append((p.phase_exp + p.y_count()) % 4)
    s = np.stack(cols, axis=1)
    return CliffordGate(s, np.array(exps), validate=True)


# ---------------------------------------------------------------------------
# Uniform sampling (Koenig-Smolin symplectic construction + random sign bits).
# Vectors are packed into Python ints with interleaved (x, z) bit pairs.
# ---------------------------------------------------------------------------


def _inner_packed(v: int, w: int, even_mask: int) -> int:
    a = v & (w >> 1) & even_mask
    b = (v >> 1) & w & even_mask
    return (a.bit_count() + b.bit_count()) & 1


def _transvect(k: int, v: int, even_mask: int) -> int:
    return v ^ k if _inner_packed(k, v, even_mask) else v


def _swap_pair(w: int) -> int:
    return ((w & 1) << 1) | ((w >> 1) & 1)


def _find_transvection(x: int, y: int, m: int, even_mask: int):
    # h1, h2 with Z_h1 Z_h2 x = y (Lemma 2 of the Koenig-Smolin construction)
    if x == y:
        return 0, 0
    if _inner_packed(x, y, even_mask):
        return (x ^ y), 0
    # look for a qubit pair where both vectors are nonzero
    z = 0
    for i in range(m):
        xx = (x >> (2 * i)) & 3
        yy = (y >> (2 * i)) & 3
        if xx and yy:
            zz = xx ^ yy
            if zz == 0:
                zz = 2 if xx == 3 else 3
            z = zz << (2 * i)
            return (x ^ z), (y ^ z)
    # otherwise pick one pair where only x lives and one where only y lives
    for i in range(m):
        xx = (x >> (2 * i)) & 3
        if xx and not ((y >> (2 * i)) & 3):
            z |= (2 if xx == 3 else _swap_pair(xx)) << (2 * i)
            break
    for i in range(m):
        yy = (y >> (2 * i)) & 3
        if yy and not ((x >> (2 * i)) & 3):
            z |= (2 if yy == 3 else _swap_pair(yy)) << (2 * i)
            break
    return (x ^ z), (y ^ z)


def _symplectic_rows(n: int, ks, bs) -> list[int]:
    """Koenig-Smolin construction from per-level draws k_m, b_m (m = n..1)."""
    rows: list[int] = []
    for m in range(1, n + 1):
        k, bits = ks[n - m], bs[n - m]
        even_mask = sum(1 << (2 * i) for i in range(m))
        t1, t2 = _find_transvection(1, k, m, even_mask)
        eprime = 1 | ((bits >> 1) << 2)  # bits b_3..b_2m fill coordinates 2..2m-1
        h0 = _transvect(t1, eprime, even_mask)
        h0 = _transvect(t2, h0, even_mask)
        f1 = 0 if bits & 1 else k
        rows = [1, 2] + [r << 2 for r in rows]
        for t in (t1, t2, h0, f1):
            if not t:
                continue
            # <t, v> = popcount(swapped(t) & v) mod 2
            ts = ((t & even_mask) << 1) | ((t >> 1) & even_mask)
            rows = [v ^ t if (ts & v).bit_count() & 1 else v for v in rows]
    return rows


def _random_symplectic_packed(n: int, rng) -> list[int]:
    """Uniform element of Sp(2n, 2) as a list of 2n row-ints (interleaved pairs)."""
    if n <= 15:
        # one rng call for all levels: k_m in [1, 4^m - 1], b_m in [0, 2^(2m-1))
        _, _, lows, highs = _block_cache(n)
        draws = rng.integers(lows, highs, dtype=np.int64)
        ks = [int(v) for v in draws[:n]]
        bs = [int(v) for v in draws[n:]]
    else:
        ks = [int(rng.integers(1, 1 << (2 * m))) for m in range(n, 0, -1)]
        bs = [int(rng.integers(0, 1 << (2 * m - 1))) for m in range(n, 0, -1)]
    return _symplectic_rows(n, ks, bs)


_BLOCK_CACHE: dict = {}


def _block_cache(n: int):
    cached = _BLOCK_CACHE.get(n)
    if cached is None:
        shifts = np.arange(2 * n, dtype=np.uint64)
        perm = np.array([2 * i for i in range(n)] + [2 * i + 1 for i in range(n)])
        lows = np.array([1] * n + [0] * n, dtype=np.int64)
        highs = np.array(
            [1 << (2 * m) for m in range(n, 0, -1)]
            + [1 << (2 * m - 1) for m in range(n, 0, -1)],
            dtype=np.int64,
        )
        cached = (shifts, perm, lows, highs)
        _BLOCK_CACHE[n] = cached
    return cached


def _packed_rows_to_block(rows: list[int], n: int) -> np.ndarray:
    """Reindex interleaved row-ints into the (x|z) block column convention."""
    shifts, perm, _, _ = _block_cache(n)
    arr = np.array(rows, dtype=np.uint64)
    D = ((arr[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    # rows of D act on row vectors; transpose to the column-action convention
    return D.T[perm][:, perm]


@dataclass(frozen=True)
class CliffordEnsembleSpec:
    """Reproducible uniform ensemble: same seed, same gate sequence."""

    n: int
    seed: int
    sampler: str = "koenig-smolin"


def random_clifford(n: int, rng) -> CliffordGate:
    """Uniform n-qubit Clifford modulo global phase."""
    S = _packed_rows_to_block(_random_symplectic_packed(n, rng), n)
    signs = rng.integers(0, 2, size=2 * n)
    ys = (S[:n, :] * S[n:, :]).sum(axis=0)  # Y letters per image column
    return CliffordGate(S, (ys + 2 * signs) % 4, validate=False)


def clifford_from_stream(n: int, stream) -> CliffordGate:
    """Uniform Clifford drawn from a seeding.WordStream (registry fast path)."""
    ks = [stream.nonzero_bits(2 * m) for m in range(n, 0, -1)]
    bs = [stream.bits(2 * m - 1) for m in range(n, 0, -1)]
    S = _packed_rows_to_block(_symplectic_rows(n, ks, bs), n)
    sign_word = stream.bits(2 * n)
    signs = (sign_word >> np.arange(2 * n)) & 1
    ys = (S[:n, :] * S[n:, :]).sum(axis=0)
    return CliffordGate(S, (ys + 2 * signs) % 4, validate=False)


def sample_uniform(spec: CliffordEnsembleSpec, count: int = 1):
    """Deterministic stream of uniform gates for a given ensemble spec."""
    if spec.n < 1:
        raise ValueError("need n >= 1")
    if spec.sampler != "koenig-smolin":
        raise ValueError(f"unknown sampler {spec.sampler!r}")
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    gates = [random_clifford(spec.n, rng) for _ in range(count)]
    return gates[0] if count == 1 else gates
