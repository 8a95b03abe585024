"""Floquet circuit geometries with a quenched-disorder gate registry.

One period is two half-steps: layer A (1D bonds (2i, 2i+1); 2D plaquettes
anchored at even-even sites) acts first, then layer B (odd bonds / odd-odd
anchors).  Heisenberg evolution conjugates p -> U_per p U_per^dag with
U_per = (prod of B gates)(prod of A gates); the power/apply_period cross-check
in the tests locks this convention.

Gates are sampled on first use and cached per (layer, anchor); the draw is
keyed by (seed, layer, anchor) alone, so any query order and any mix of the
sparse and grid evolution paths see the identical realization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import clifford
from .clifford import CliffordGate, compose, identity_gate
from .gf2 import BitMatrix, BitVector
from .pauli import PauliOperator
from .seeding import WordStream, derive_key, zigzag

LAYER_A = 0
LAYER_B = 1


@dataclass(frozen=True)
class Geometry:
    """Lattice geometry: 1 or 2 dimensions, unbounded or periodic-finite."""

    dimension: int
    extent: tuple | None = None  # None = unbounded; else (L,) or (Lx, Ly), periodic

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        if self.extent is not None:
            if len(self.extent) != self.dimension:
                raise ValueError("extent rank must match dimension")
            if any(L < 2 or L % 2 for L in self.extent):
                raise ValueError("finite extents must be even (two-layer structure)")

    @classmethod
    def line(cls) -> "Geometry":
        return cls(1, None)

    @classmethod
    def plane(cls) -> "Geometry":
        return cls(2, None)

    @classmethod
    def chain(cls, L: int) -> "Geometry":
        return cls(1, (L,))

    @classmethod
    def torus(cls, Lx: int, Ly: int) -> "Geometry":
        return cls(2, (Lx, Ly))

    @classmethod
    def patch(cls, n_qubits: int) -> "Geometry":
        """Near-square even-sided 2D patch with n_qubits sites in total."""
        best = None
        for lx in range(2, int(np.sqrt(n_qubits)) + 1, 2):
            if n_qubits % lx == 0 and (n_qubits // lx) % 2 == 0:
                best = (lx, n_qubits // lx)
        if best is None:
            raise ValueError(f"no even-sided patch with {n_qubits} qubits")
        return cls(2, best)

    @property
    def is_finite(self) -> bool:
        return self.extent is not None

    @property
    def n_qubits(self) -> int:
        if not self.is_finite:
            raise ValueError("unbounded geometry has no qubit count")
        return int(np.prod(self.extent))

    def wrap(self, site):
        if not self.is_finite:
            return tuple(site)
        return tuple(int(c) % L for c, L in zip(site, self.extent))

    def site_index(self, site) -> int:
        site = self.wrap(site)
        if self.dimension == 1:
            return site[0]
        return site[0] * self.extent[1] + site[1]

    def all_sites(self):
        if self.dimension == 1:
            return [(x,) for x in range(self.extent[0])]
        return [(x, y) for x in range(self.extent[0]) for y in range(self.extent[1])]


class StabilizerState:
    """L commuting Pauli rows as an L x 2L (x|z) tableau plus sign bits."""

    __slots__ = ("L", "tableau_bits", "signs")

    def __init__(self, L: int, tableau_bits: np.ndarray, signs: np.ndarray, validate=True):
        self.L = L
        self.tableau_bits = np.asarray(tableau_bits, dtype=np.uint8) % 2
        self.signs = np.asarray(signs, dtype=np.uint8) % 2
        if self.tableau_bits.shape != (L, 2 * L) or self.signs.shape != (L,):
            raise ValueError("tableau must be L x 2L with L sign bits")
        if validate and not self.is_valid():
            raise ValueError("rows must commute pairwise and be independent")

    @classmethod
    def all_up(cls, L: int) -> "StabilizerState":
        bits = np.zeros((L, 2 * L), dtype=np.uint8)
        bits[:, L:] = np.eye(L, dtype=np.uint8)
        return cls(L, bits, np.zeros(L, dtype=np.uint8), validate=False)

    @property
    def tableau(self) -> BitMatrix:
        return BitMatrix.from_dense(self.tableau_bits)

    @property
    def sign_bits(self) -> BitVector:
        return BitVector.from_dense(self.signs)

    def copy(self) -> "StabilizerState":
        return StabilizerState(self.L, self.tableau_bits.copy(), self.signs.copy(), validate=False)

    def is_valid(self) -> bool:
        from .gf2 import rank

        L = self.L
        x, z = self.tableau_bits[:, :L].astype(np.int64), self.tableau_bits[:, L:].astype(np.int64)
        sympl = (x @ z.T + z @ x.T) % 2
        if sympl.any():
            return False
        return rank(self.tableau) == L


class FloquetCircuit:
    """Quenched random circuit: one Clifford per anchor, reused every period."""

    def __init__(
        self,
        geometry: Geometry,
        seed: int,
        quenched: bool = True,
        constant_gate: CliffordGate | None = None,
    ):
        # constant_gate is a test hook: every anchor returns that gate
        self.geometry = geometry
        self.seed = int(seed)
        self.quenched = quenched
        self.constant_gate = constant_gate
        self._registry: dict = {}
        self._period_gate: CliffordGate | None = None

    # -- layer geometry -----------------------------------------------------

    @property
    def gate_size(self) -> int:
        return 2 if self.geometry.dimension == 1 else 4

    def anchor_of(self, layer: int, site) -> tuple:
        """Anchor of the gate covering ``site`` in the given layer."""
        off = 0 if layer == LAYER_A else 1
        anchor = tuple(c - ((c - off) % 2) for c in site)
        return self.geometry.wrap(anchor) if self.geometry.is_finite else anchor

    def gate_sites(self, anchor) -> list:
        """Ordered qubits of the gate at ``anchor`` (wrapped in finite mode)."""
        g = self.geometry
        if g.dimension == 1:
            sites = [(anchor[0],), (anchor[0] + 1,)]
        else:
            x, y = anchor
            sites = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)]
        return [g.wrap(s) for s in sites] if g.is_finite else sites

    def layer_anchors(self, layer: int) -> list:
        """All anchors of a layer (finite geometry only)."""
        g = self.geometry
        if not g.is_finite:
            raise ValueError("unbounded geometry has infinitely many anchors")
        off = 0 if layer == LAYER_A else 1
        if g.dimension == 1:
            return [(x,) for x in range(off, g.extent[0], 2)]
        return [
            (x, y)
            for x in range(off, g.extent[0], 2)
            for y in range(off, g.extent[1], 2)
        ]

    # -- gate registry ------------------------------------------------------

    def gate_at(self, layer: int, anchor, period: int = 0) -> CliffordGate:
        if self.constant_gate is not None:
            return self.constant_gate
        anchor = self.geometry.wrap(anchor) if self.geometry.is_finite else tuple(anchor)
        key = (layer, anchor) if self.quenched else (layer, anchor, period)
        gate = self._registry.get(key)
        if gate is None:
            parts = [self.seed, layer] + [zigzag(c) for c in anchor]
            if not self.quenched:
                parts.append(period + 2)
            gate = clifford.clifford_from_stream(self.gate_size, WordStream(derive_key(*parts)))
            self._registry[key] = gate
        return gate

    # -- Heisenberg evolution of sparse Paulis --------------------------------

    def apply_half_step(self, p: PauliOperator, layer: int, period: int = 0) -> PauliOperator:
        """Conjugate p by every gate of the layer that intersects its support."""
        letters = p.letters
        anchors = sorted({self.anchor_of(layer, s) for s in letters})
        phase = p.phase_exp
        m = self.gate_size
        for anchor in anchors:
            sites = self.gate_sites(anchor)
            v = np.zeros(2 * m, dtype=np.uint8)
            for i, s in enumerate(sites):
                bits = letters.get(s)
                if bits is not None:
                    v[i], v[m + i] = bits
            g = self.gate_at(layer, anchor, period)
            out = g.image_coords(v)[0]
            phi = int(g.phase_exponent_of(v)[0])
            y_in = int((v[:m] & v[m:]).sum())
            y_out = int((out[:m] & out[m:]).sum())
            phase += y_in + phi - y_out
            for i, s in enumerate(sites):
                bits = (int(out[i]), int(out[m + i]))
                if bits == (0, 0):
                    letters.pop(s, None)
                else:
                    letters[s] = bits
        return PauliOperator(letters, phase)

    def apply_period(self, p: PauliOperator, period: int = 0) -> PauliOperator:
        return self.apply_half_step(self.apply_half_step(p, LAYER_A, period), LAYER_B, period)

    # -- stabilizer-state evolution -------------------------------------------

    def _apply_gate_to_tableau(self, state: StabilizerState, layer, anchor, period):
        g = self.gate_at(layer, anchor, period)
        geo = self.geometry
        idx = [geo.site_index(s) for s in self.gate_sites(anchor)]
        cols = idx + [geo.n_qubits + i for i in idx]
        V = state.tableau_bits[:, cols]
        out, signs = g.conjugate_rows(V, state.signs)
        state.tableau_bits[:, cols] = out
        state.signs = signs

    def evolve_state(self, state: StabilizerState, t: int) -> StabilizerState:
        if not self.geometry.is_finite:
            raise ValueError("state evolution needs a finite geometry")
        if state.L != self.geometry.n_qubits:
            raise ValueError("state size does not match geometry")
        out = state.copy()
        for period in range(t):
            for layer in (LAYER_A, LAYER_B):
                for anchor in self.layer_anchors(layer):
                    self._apply_gate_to_tableau(out, layer, anchor, period)
        return out

    # -- global gate ------------------------------------------------------------

    def period_gate(self, period: int = 0) -> CliffordGate:
        """U_per as one Clifford on all L qubits (finite geometry)."""
        if not self.geometry.is_finite:
            raise ValueError("global gate needs a finite geometry")
        if self.quenched and self._period_gate is not None:
            return self._period_gate
        geo = self.geometry
        L = geo.n_qubits
        G = identity_gate(L)
        s = G.s_dense.copy()
        e = G.phase_exponents.astype(np.int64).copy()
        for layer in (LAYER_A, LAYER_B):
            for anchor in self.layer_anchors(layer):
                g = self.gate_at(layer, anchor, period)
                idx = [geo.site_index(site) for site in self.gate_sites(anchor)]
                rows = idx + [L + i for i in idx]
                V = s[rows, :].T  # current image columns, restricted to the gate
                e = (e + g.phase_exponent_of(V)) % 4
                s[rows, :] = (g.s_dense @ s[rows, :]) % 2
        gate = CliffordGate(s, e % 4, validate=False)
        if self.quenched:
            self._period_gate = gate
        return gate

    def power(self, t: int) -> CliffordGate:
        """The global Clifford implementing t periods."""
        if t < 0:
            raise ValueError("t must be >= 0")
        L = self.geometry.n_qubits
        out = identity_gate(L)
        if t == 0:
            return out
        if self.quenched:
            base = self.period_gate()
            for _ in range(t):
                out = compose(base, out)
            return out
        for period in range(t):
            out = compose(self.period_gate(period), out)
        return out


def circuit_spec(circuit: FloquetCircuit, include_registry: bool = False) -> dict:
    """JSON-able description: geometry, seed, and optionally the sampled gates.

    The registry dump allows exact replay even if the sampling procedure ever
    changes; by default the (geometry, seed) pair is enough to rebuild.
    """
    spec = {
        "dimension": circuit.geometry.dimension,
        "extent": list(circuit.geometry.extent) if circuit.geometry.is_finite else None,
        "seed": circuit.seed,
        "quenched": circuit.quenched,
    }
    if include_registry:
        spec["registry"] = {
            json.dumps(key): gate.render_fixture()
            for key, gate in sorted(circuit._registry.items(), key=lambda kv: str(kv[0]))
        }
    return spec


def circuit_from_spec(spec: dict) -> FloquetCircuit:
    extent = spec["extent"]
    geometry = Geometry(spec["dimension"], tuple(extent) if extent else None)
    circuit = FloquetCircuit(geometry, spec["seed"], quenched=spec.get("quenched", True))
    for key, text in spec.get("registry", {}).items():
        layer, anchor = json.loads(key)
        circuit._registry[(layer, tuple(anchor))] = clifford.parse_fixture(text)
    return circuit


class GridEvolver:
    """Dense-window support evolution for operator-spreading statistics.

    Tracks only the (x, z) bit fields of a single evolving Pauli string; the
    scalar phase is irrelevant for rho and light-cone observables.  All gates
    of a layer are applied in one batched GF(2) contraction.  Gates come from
    the same registry as the sparse path, so both see the same realization.
    """

    def __init__(self, circuit: FloquetCircuit, t_max: int):
        self.circuit = circuit
        geo = circuit.geometry
        self.dim = geo.dimension
        if geo.is_finite:
            self.lo = 0
            shape = geo.extent
        else:
            K = 2 * t_max
            self.lo = -(K + 4)
            shape = tuple([2 * K + 8] * geo.dimension)
        self.shape = shape
        self.gx = np.zeros(shape, dtype=np.uint8)
        self.gz = np.zeros(shape, dtype=np.uint8)
        self._layer_mats: dict = {}

    # -- support I/O -----------------------------------------------------------

    def place(self, p: PauliOperator):
        self.gx[:] = 0
        self.gz[:] = 0
        for site, (x, z) in p.letters.items():
            idx = tuple(c - self.lo for c in site)
            self.gx[idx] = x
            self.gz[idx] = z

    def support_mask(self) -> np.ndarray:
        return (self.gx | self.gz).astype(bool)

    def extract(self) -> PauliOperator:
        """Support-only Pauli (phase dropped) for cross-checks and fixtures."""
        letters = {}
        for idx in np.argwhere(self.gx | self.gz):
            site = tuple(int(c) + self.lo for c in idx)
            letters[site] = (int(self.gx[tuple(idx)]), int(self.gz[tuple(idx)]))
        return PauliOperator(letters)

    # -- batched gate application -----------------------------------------------

    def _mats_for(self, layer: int, period: int) -> np.ndarray:
        key = (layer, period if not self.circuit.quenched else 0)
        mats = self._layer_mats.get(key)
        if mats is None:
            anchors = self._layer_anchor_grid(layer)
            stack = np.empty((len(anchors), 2 * self.circuit.gate_size,
                              2 * self.circuit.gate_size), dtype=np.uint8)
            for i, anchor in enumerate(anchors):
                stack[i] = self.circuit.gate_at(layer, anchor, period).s_dense
            mats = stack
            self._layer_mats[key] = mats
        return mats

    def _layer_anchor_grid(self, layer: int) -> list:
        """Anchors in the exact block order produced by the gather reshape."""
        off = 0 if layer == LAYER_A else 1
        if self.circuit.geometry.is_finite:
            ranges = [range(off, n, 2) for n in self.shape]
        else:
            lo = self.lo  # even, so layer A blocks start at lo, layer B at lo + 1
            ranges = [range(lo + off, lo + n - off, 2) for n in self.shape]
        if self.dim == 1:
            return [(x,) for x in ranges[0]]
        return [(x, y) for x in ranges[0] for y in ranges[1]]

    def _gather(self, layer: int):
        """Stack per-gate local coordinate vectors: (n_gates, 2 * gate_size)."""
        if layer == LAYER_A:
            vx, vz = self.gx, self.gz
        elif self.circuit.geometry.is_finite:
            vx, vz = np.roll(self.gx, -1, axis=tuple(range(self.dim))), np.roll(
                self.gz, -1, axis=tuple(range(self.dim))
            )
        else:
            vx = self.gx[(slice(1, -1),) * self.dim]
            vz = self.gz[(slice(1, -1),) * self.dim]
        if self.dim == 1:
            X = vx.reshape(-1, 2)
            Z = vz.reshape(-1, 2)
        else:
            wx, wy = vx.shape
            X = vx.reshape(wx // 2, 2, wy // 2, 2).transpose(0, 2, 3, 1).reshape(-1, 4)
            Z = vz.reshape(wx // 2, 2, wy // 2, 2).transpose(0, 2, 3, 1).reshape(-1, 4)
        return np.concatenate([X, Z], axis=1)

    def _scatter(self, layer: int, V: np.ndarray):
        m = self.circuit.gate_size
        X, Z = V[:, :m], V[:, m:]
        if self.dim == 1:
            nx = X.reshape(-1)
            nz = Z.reshape(-1)
            if layer == LAYER_A:
                self.gx, self.gz = nx, nz
            elif self.circuit.geometry.is_finite:
                self.gx, self.gz = np.roll(nx, 1), np.roll(nz, 1)
            else:
                self.gx[1:-1], self.gz[1:-1] = nx, nz
        else:
            if layer == LAYER_A:
                wx, wy = self.shape
            elif self.circuit.geometry.is_finite:
                wx, wy = self.shape
            else:
                wx, wy = self.shape[0] - 2, self.shape[1] - 2
            nx = X.reshape(wx // 2, wy // 2, 2, 2).transpose(0, 3, 1, 2).reshape(wx, wy)
            nz = Z.reshape(wx // 2, wy // 2, 2, 2).transpose(0, 3, 1, 2).reshape(wx, wy)
            if layer == LAYER_A:
                self.gx, self.gz = nx, nz
            elif self.circuit.geometry.is_finite:
                self.gx = np.roll(nx, (1, 1), axis=(0, 1))
                self.gz = np.roll(nz, (1, 1), axis=(0, 1))
            else:
                self.gx[1:-1, 1:-1], self.gz[1:-1, 1:-1] = nx, nz

    def step_half(self, layer: int, period: int = 0):
        V = self._gather(layer)
        mats = self._mats_for(layer, period)
        out = np.einsum("gij,gj->gi", mats, V, dtype=np.uint8, casting="unsafe") % 2
        self._scatter(layer, out)

    def step_period(self, period: int = 0):
        self.step_half(LAYER_A, period)
        self.step_half(LAYER_B, period)


def light_cone_box(dim: int, half_steps: int):
    """Bounding box [lo, hi] (inclusive) per axis of the cone from the origin.

    Origin at (0,) or (0, 0): after k half-steps the support can reach
    [-(k-1), k] along every axis, a square of side 2k = 4t.
    """
    k = half_steps
    if k == 0:
        return (0, 0)
    return (-(k - 1), k)


def boundary_sites(dim: int, half_steps: int):
    """The outer ring (2D) or endpoints (1D) of the light cone after k half-steps."""
    lo, hi = light_cone_box(dim, half_steps)
    if dim == 1:
        if half_steps == 0:
            return [(0,)]
        return [(lo,), (hi,)]
    if half_steps == 0:
        return [(0, 0)]
    ring = []
    for x in range(lo, hi + 1):
        ring.append((x, lo))
        ring.append((x, hi))
    for y in range(lo + 1, hi):
        ring.append((lo, y))
        ring.append((hi, y))
    return ring
