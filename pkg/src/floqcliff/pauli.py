"""Signed Pauli strings over arbitrary integer lattices.

Storage is sparse: only non-identity letters are kept, so operators living on
an unbounded lattice need no global system size.  The scalar prefactor is an
exponent of i (mod 4) multiplying the tensor product of sigma letters, which
keeps all intermediate products exact; Hermitian operators carry exponent
0 or 2 (phase +1 or -1).

Letter encoding per site: (1,0) = X, (0,1) = Z, (1,1) = Y.  Internally the
algebra runs in the X^x Z^z canonical form (Y = i XZ), converting back to the
sigma-letter phase at the end.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

Site = tuple
# one coordinate in 1D, two in 2D; total order is lexicographic

_LETTER_TO_BITS = {"X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}
_PHASE_TOKENS = {0: "+1", 1: "+i", 2: "-1", 3: "-i"}
_TOKEN_PHASES = {v: k for k, v in _PHASE_TOKENS.items()}

# dense 2x2 matrices, used by tests and the small dense oracles
SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliOperator:
    """Sparse signed Pauli string: ``i**phase_exp * tensor(sigma letters)``."""

    __slots__ = ("_letters", "_phase_exp", "_hash")

    def __init__(self, letters: Mapping[Site, tuple] | None = None, phase_exp: int = 0):
        clean = {}
        for site, bits in (letters or {}).items():
            x, z = int(bits[0]) & 1, int(bits[1]) & 1
            if (x, z) == (0, 0):
                continue
            clean[tuple(site)] = (x, z)
        self._letters = clean
        self._phase_exp = int(phase_exp) % 4
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls) -> "PauliOperator":
        return cls()

    @classmethod
    def single(cls, site: Site, letter: str, phase_exp: int = 0) -> "PauliOperator":
        return cls({tuple(site): _LETTER_TO_BITS[letter]}, phase_exp)

    # -- accessors ----------------------------------------------------------

    @property
    def letters(self) -> dict:
        return dict(self._letters)

    @property
    def phase_exp(self) -> int:
        return self._phase_exp

    @property
    def phase(self) -> complex:
        return 1j ** self._phase_exp

    def letter_at(self, site: Site) -> str:
        bits = self._letters.get(tuple(site))
        return "I" if bits is None else _BITS_TO_LETTER[bits]

    def is_identity(self) -> bool:
        return not self._letters

    def is_hermitian(self) -> bool:
        return self._phase_exp % 2 == 0

    def y_count(self) -> int:
        return sum(1 for b in self._letters.values() if b == (1, 1))

    def with_phase_exp(self, phase_exp: int) -> "PauliOperator":
        return PauliOperator(self._letters, phase_exp)

    def times_i(self, k: int = 1) -> "PauliOperator":
        return PauliOperator(self._letters, self._phase_exp + k)

    # -- coordinate form (used by the Clifford machinery) -------------------

    def coords_on(self, sites: Iterable[Site]) -> np.ndarray:
        """(x|z) bit vector of length 2m on the given ordered sites.

        Raises if the support is not contained in ``sites``.
        """
        sites = [tuple(s) for s in sites]
        index = {s: i for i, s in enumerate(sites)}
        missing = set(self._letters) - set(index)
        if missing:
            raise ValueError(f"support outside the given sites: {sorted(missing)}")
        m = len(sites)
        v = np.zeros(2 * m, dtype=np.uint8)
        for site, (x, z) in self._letters.items():
            i = index[site]
            v[i] = x
            v[m + i] = z
        return v

    @classmethod
    def from_coords(cls, sites, v, phase_exp: int = 0) -> "PauliOperator":
        sites = [tuple(s) for s in sites]
        m = len(sites)
        v = np.asarray(v, dtype=np.uint8) & 1
        letters = {}
        for i, site in enumerate(sites):
            bits = (int(v[i]), int(v[m + i]))
            if bits != (0, 0):
                letters[site] = bits
        return cls(letters, phase_exp)

    # -- algebra -------------------------------------------------------------

    def _xz_exp(self) -> int:
        # operator = i^xz_exp * prod_sites X^x Z^z  (per-site canonical order)
        return (self._phase_exp + self.y_count()) % 4

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if not isinstance(other, PauliOperator):
            return NotImplemented
        exp = self._xz_exp() + other._xz_exp()
        letters = dict(self._letters)
        for site, (x2, z2) in other._letters.items():
            x1, z1 = letters.get(site, (0, 0))
            # Z^z1 X^x2 reorder on this site
            exp += 2 * (z1 * x2)
            bits = (x1 ^ x2, z1 ^ z2)
            if bits == (0, 0):
                letters.pop(site, None)
            else:
                letters[site] = bits
        y_res = sum(1 for b in letters.values() if b == (1, 1))
        return PauliOperator(letters, exp - y_res)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliOperator)
            and self._phase_exp == other._phase_exp
            and self._letters == other._letters
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._phase_exp, frozenset(self._letters.items())))
        return self._hash

    # -- dense form (small operators only; test oracles) ---------------------

    def to_dense(self, sites: Iterable[Site]) -> np.ndarray:
        out = np.array([[1.0 + 0j]])
        for site in sites:
            out = np.kron(out, SIGMA[self.letter_at(site)])
        return self.phase * out

    # -- text form -------------------------------------------------------------

    def render(self) -> str:
        parts = [_PHASE_TOKENS[self._phase_exp]]
        for site in sorted(self._letters):
            coords = ",".join(str(c) for c in site)
            parts.append(f"({coords}):{_BITS_TO_LETTER[self._letters[site]]}")
        return " ".join(parts)

    def __repr__(self):
        return f"PauliOperator<{self.render()}>"


def support(p: PauliOperator) -> set:
    """Sites carrying a non-identity letter."""
    return set(p._letters)


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Group product with exact phase."""
    return p * q


def commutes(p: PauliOperator, q: PauliOperator) -> int:
    """0 if pq = qp, 1 if pq = -qp (symplectic inner product on shared sites)."""
    acc = 0
    a, b = p._letters, q._letters
    if len(b) < len(a):
        a, b = b, a
    for site, (x1, z1) in a.items():
        x2, z2 = b.get(site, (0, 0))
        acc ^= (x1 & z2) ^ (z1 & x2)
    return acc


def parse(text: str) -> PauliOperator:
    """Inverse of :meth:`PauliOperator.render`."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty Pauli text")
    phase_exp = _TOKEN_PHASES.get(tokens[0])
    if phase_exp is None:
        raise ValueError(f"bad phase token {tokens[0]!r}")
    letters = {}
    for tok in tokens[1:]:
        site_part, _, letter = tok.partition(":")
        if not (site_part.startswith("(") and site_part.endswith(")") and letter in _LETTER_TO_BITS):
            raise ValueError(f"bad letter token {tok!r}")
        site = tuple(int(c) for c in site_part[1:-1].split(","))
        if site in letters:
            raise ValueError(f"duplicate site {site}")
        letters[site] = _LETTER_TO_BITS[letter]
    return PauliOperator(letters, phase_exp)
