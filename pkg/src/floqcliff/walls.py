"""Blocking walls of the 1D brickwork dynamics.

A right-blocking wall with penetration 1 sits between two consecutive bond
gates g0 (bond (x, x+1)) and g1 (bond (x+1, x+2)) exactly when both block
products C1 C0 and C1 D0 A1 C0 vanish over GF(2), where each gate's
symplectic part is written in site-major blocks

    ((A, B), (C, D)),   C mapping site-0 coordinates to site-1 coordinates.

With this convention the wall probability over uniform gate pairs is exactly
0.12 (62208 / 518400 over all symplectic pairs) and the conditional absence
P(no wall at 1 | no wall at 0) is 0.926989, both checked against exhaustive
enumeration of the 720 two-qubit symplectic matrices.  Walls at distance >= 2
form a Markov chain because the condition at position l shares only gate l+1
with the condition at position l+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np

from .circuit import LAYER_A, LAYER_B, FloquetCircuit
from .clifford import CliffordGate, random_clifford
from .mc import accumulate
from .observables import fit_localization_length
from .pauli import PauliOperator
from .seeding import derive_key

__all__ = [
    "WallHistogram",
    "site_blocks",
    "wall_predicate",
    "wall_between",
    "wall_histogram",
    "detect_walls_dynamical",
]

_SITE_PERM = np.array([0, 2, 1, 3])  # (x0, x1, z0, z1) -> (x0, z0, x1, z1)


def site_blocks(gate: CliffordGate):
    """(A, B, C, D) 2x2 blocks of a two-qubit gate in site-major order."""
    if gate.n != 2:
        raise ValueError("site blocks are defined for 2-qubit gates")
    s = gate.s_dense[_SITE_PERM][:, _SITE_PERM]
    return s[:2, :2], s[:2, 2:], s[2:, :2], s[2:, 2:]


def wall_predicate(blocks0, blocks1, side: str = "right") -> bool:
    """Penetration-1 blocking wall between two stacked gates.

    ``blocks0`` and ``blocks1`` are the (A, B, C, D) tuples of the first and
    second gate along the propagation direction.  For left walls the roles of
    the B and C blocks swap (site mirror) and the gate order reverses.
    """
    if side == "right":
        A0, B0, C0, D0 = blocks0
        A1, B1, C1, D1 = blocks1
        t0, m0, t1, m1 = C0, D0, C1, A1
    elif side == "left":
        # mirror: swap the site roles of each gate and traverse in reverse
        A0, B0, C0, D0 = blocks1
        A1, B1, C1, D1 = blocks0
        t0, m0, t1, m1 = B0, A0, B1, D1
    else:
        raise ValueError("side must be 'right' or 'left'")
    if ((t1 @ t0) % 2).any():
        return False
    return not ((t1 @ m0 @ m1 @ t0) % 2).any()


def wall_between(g0: CliffordGate, g1: CliffordGate, side: str = "right") -> bool:
    return wall_predicate(site_blocks(g0), site_blocks(g1), side=side)


@dataclass
class WallHistogram:
    """First-wall-distance distribution plus derived localization numbers."""

    P0: float
    tail: dict  # l >= 1 -> probability
    samples: int
    censored: int  # runs with no wall within l_max
    l_max: int
    prob_wall: float  # unconditional wall probability at one position
    cond_absent: float  # P(no wall at l+1 | no wall at l)
    c: float
    mu: float
    mean_l: float

    def normalization_gap(self) -> float:
        return 1.0 - (self.P0 + sum(self.tail.values()) + self.censored / self.samples)


def _wall_chain_worker(l_max, index, seed):
    rng = np.random.default_rng(np.random.SeedSequence(derive_key(seed, 0x3A11)))
    prev_blocks = site_blocks(random_clifford(2, rng))
    first = None
    absent_pairs = 0
    absent_then_absent = 0
    prev_wall = None
    for l in range(l_max + 1):
        cur_blocks = site_blocks(random_clifford(2, rng))
        wall = wall_predicate(prev_blocks, cur_blocks)
        if prev_wall is False:  # consecutive-position pair with no wall first
            absent_pairs += 1
            absent_then_absent += not wall
        prev_wall = wall
        prev_blocks = cur_blocks
        if wall:
            first = l
            break
    hist = np.zeros(l_max + 2, dtype=np.int64)
    hist[first if first is not None else l_max + 1] = 1
    return {
        "hist": hist,
        "absent_pairs": absent_pairs,
        "absent_then_absent": absent_then_absent,
        "count": 1,
    }


def wall_histogram(samples: int, l_max: int, seed: int, processes=1,
                   fit_window=None) -> WallHistogram:
    """Distribution of the first right-wall distance under iid uniform gates.

    Each sample walks a fresh gate chain until its first wall.  The tail is
    fitted with a log-linear law c exp(-l / mu) over bins with enough counts;
    mean_l includes the l = 0 mass (which contributes nothing to the sum).
    """
    if samples < 1:
        raise ValueError("samples >= 1")
    acc = accumulate(partial(_wall_chain_worker, l_max), samples, seed, processes=processes)
    n = acc["count"]
    hist = acc["hist"]
    censored = int(hist[l_max + 1])
    P0 = hist[0] / n
    tail = {l: hist[l] / n for l in range(1, l_max + 1)}
    ls = np.arange(0, l_max + 1)
    mean_l = float((ls * hist[: l_max + 1]).sum() / n)
    if fit_window is None:
        counts = hist[1 : l_max + 1]
        good = np.nonzero(counts >= 25)[0]
        fit_window = (1, int(good[-1]) + 1) if good.size >= 5 else (1, min(5, l_max))
    probs = hist[: l_max + 1] / n
    fit = fit_localization_length(probs, fit_window)
    return WallHistogram(
        P0=float(P0),
        tail=tail,
        samples=n,
        censored=censored,
        l_max=l_max,
        prob_wall=float(P0),
        cond_absent=float(acc["absent_then_absent"] / max(acc["absent_pairs"], 1)),
        c=fit.c,
        mu=fit.mu,
        mean_l=mean_l,
    )


def bond_gate(circuit: FloquetCircuit, bond: int) -> CliffordGate:
    """Gate acting on sites (bond, bond + 1) of a 1D circuit."""
    layer = LAYER_A if bond % 2 == 0 else LAYER_B
    return circuit.gate_at(layer, (bond,))


def predicted_right_walls(circuit: FloquetCircuit, x_range) -> list:
    """Positions x in x_range where the block condition puts a right wall."""
    out = []
    for x in x_range:
        if wall_between(bond_gate(circuit, x), bond_gate(circuit, x + 1)):
            out.append(x)
    return out


def detect_walls_dynamical(circuit: FloquetCircuit, x_range, t_probe: int = 64,
                           penetration: int = 1, probe_window: int = 2) -> list:
    """Right-wall positions found by direct evolution.

    x is reported as a wall when no single-site Pauli started within
    ``probe_window`` sites left of (and including) x ever gains support beyond
    x + penetration within t_probe periods.
    """
    if circuit.geometry.dimension != 1:
        raise ValueError("wall detection is a 1D analysis")
    walls = []
    for x in x_range:
        blocked = True
        for start in range(x - probe_window + 1, x + 1):
            for letter in ("X", "Y", "Z"):
                p = PauliOperator.single((start,), letter)
                for period in range(t_probe):
                    p = circuit.apply_period(p, period)
                    if max(s[0] for s in p.letters) > x + penetration:
                        blocked = False
                        break
                if not blocked:
                    break
            if not blocked:
                break
        if blocked:
            walls.append(x)
    return walls
