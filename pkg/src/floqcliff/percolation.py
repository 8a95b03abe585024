"""Random directed graphs for the light-cone boundary and their dual walls.

The lower quadrant of the boundary-growth graph is a triangular digraph:
level k holds k vertices and vertex (k, i) has candidate arrows to (k+1, i)
and (k+1, i+1).  Arrow statistics come from conjugating a non-identity Pauli
through a uniform 4-qubit Clifford: each support pattern has weight 3^(number
of occupied legs) / 255, with the all-identity pattern excluded.  Any pair of
legs of any of those tables marginalizes to the same two-leg law, which is
what makes per-vertex quadrant sampling exact for every vertex, the apex
included.

Wall counting note: count_walls enumerates, exhaustively, all simple paths in
the planar dual from the left side to the right side.  This is the literal
reading of a d-wall, and for d = 2, 3 it gives 1 and 2.  The published table
continues 3, 6, 18 for d = 4, 5, 6, which this enumeration does not reproduce
(it finds 4, 10, 24: for example the dual path entering at level 2, dipping
through the face below, and exiting at level 2 is a fourth valid 4-wall).
The closed-form bound helper uses the published table, so both numbers stay
available side by side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.stats

from .clifford import random_clifford
from .seeding import derive_key

__all__ = [
    "ArrowDistribution",
    "QuadrantGraph",
    "DualGraph",
    "BoundReport",
    "vertex_distribution",
    "verify_distribution_vs_clifford",
    "decouple_q",
    "sample_quadrant",
    "longest_path",
    "survival_probability",
    "survival_curve",
    "count_walls",
    "analytic_bound",
    "dual_of",
    "wall_blocks_path_check",
    "PAPER_WALL_TABLE",
]

# exact d-wall counts quoted in the source analysis (see module docstring)
PAPER_WALL_TABLE = {2: 1, 3: 2, 4: 3, 5: 6, 6: 18}


@dataclass(frozen=True)
class ArrowDistribution:
    """Joint law of the outgoing-arrow indicators of one vertex."""

    arity: int
    table: dict  # pattern tuple -> Fraction, sums to 1

    def probability(self, pattern) -> Fraction:
        return self.table[tuple(pattern)]

    def marginal_pair(self) -> "ArrowDistribution":
        """Exact marginal onto any two legs (identical for every leg pair)."""
        out = {}
        for pattern, p in self.table.items():
            key = pattern[:2]
            out[key] = out.get(key, Fraction(0)) + p
        return ArrowDistribution(2, out)


def vertex_distribution(arity: int) -> ArrowDistribution:
    """Exact rational arrow tables with denominator 4^4 - 1 = 255."""
    if arity not in (2, 3, 4):
        raise ValueError("arity must be 2, 3 or 4")
    table = {}
    if arity == 4:
        for bits in np.ndindex(*(2,) * 4):
            w = sum(bits)
            table[bits] = Fraction(0 if w == 0 else 3**w, 255)
    elif arity == 3:
        for bits in np.ndindex(*(2,) * 3):
            w = sum(bits)
            table[bits] = Fraction(3 if w == 0 else 4 * 3**w, 255)
    else:
        for bits in np.ndindex(*(2,) * 2):
            w = sum(bits)
            table[bits] = Fraction(15 if w == 0 else 16 * 3**w, 255)
    assert sum(table.values()) == 1
    return ArrowDistribution(arity, table)


@dataclass
class ChiSquareReport:
    samples: int
    counts: np.ndarray
    expected: np.ndarray
    statistic: float
    p_value: float
    zero_pattern_hits: int
    marginal_absent: np.ndarray  # empirical P(x_i = 0) per leg


def verify_distribution_vs_clifford(samples: int, seed: int) -> ChiSquareReport:
    """Support patterns of conjugated Paulis vs the exact arity-4 table.

    Conjugates a fixed single-site Pauli through `samples` uniform 4-qubit
    Cliffords and chi-square-tests the 15 non-identity patterns against
    3^w / 255; the all-identity pattern must never occur.
    """
    if samples < 10**4:
        raise ValueError("need at least 10^4 samples for a meaningful test")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    counts = np.zeros(16, dtype=np.int64)
    marg = np.zeros(4, dtype=np.int64)
    for _ in range(samples):
        g = random_clifford(4, rng)
        col = g.s_dense[:, 0]  # image coordinates of X on the first qubit
        occupied = col[:4] | col[4:]
        key = occupied[0] | (occupied[1] << 1) | (occupied[2] << 2) | (occupied[3] << 3)
        counts[key] += 1
        marg += 1 - occupied
    dist = vertex_distribution(4)
    expected = np.array(
        [float(dist.table[tuple((k >> j) & 1 for j in range(4))]) for k in range(16)]
    )
    stat, p = scipy.stats.chisquare(counts[1:], f_exp=samples * expected[1:])
    return ChiSquareReport(
        samples=samples,
        counts=counts,
        expected=samples * expected,
        statistic=float(stat),
        p_value=float(p),
        zero_pattern_hits=int(counts[0]),
        marginal_absent=marg / samples,
    )


def decouple_q():
    """Decoupling constants of the independent-arrow comparison.

    epsilon is the smallest positive shift making the two-leg table a product
    law; q is the resulting per-arrow absence probability.  Returns floats
    accurate to full double precision (>= 12 digits).
    """
    epsilon = (43.0 - np.sqrt(1785.0)) / 170.0
    q = 0.5 - 0.5 * np.sqrt(21.0 / 85.0)
    # cross-check the two closed forms against each other
    assert abs((1.0 / 17.0 + epsilon + 16.0 / 85.0) - q) < 1e-14
    shifted = np.array(
        [[1.0 / 17.0 + epsilon, 16.0 / 85.0], [16.0 / 85.0, 48.0 / 85.0 - epsilon]]
    )
    assert abs(np.linalg.det(shifted)) < 1e-15
    assert np.allclose(
        shifted, [[q * q, q * (1 - q)], [q * (1 - q), (1 - q) ** 2]], atol=1e-14
    )
    return epsilon, q


@dataclass
class QuadrantGraph:
    """Arrow-presence bits of the triangular quadrant digraph.

    ``a0[k-1]`` and ``a1[k-1]`` are length-k arrays for the arrows leaving
    level k (1-indexed levels; depth arrow layers in total).
    """

    depth: int
    a0: list
    a1: list

    def arrow_count(self) -> int:
        return int(sum(int(a.sum()) + int(b.sum()) for a, b in zip(self.a0, self.a1)))

    def candidate_count(self) -> int:
        return self.depth * (self.depth + 1)


@dataclass
class DualGraph:
    """Edge bits on the lattice dual to a QuadrantGraph (present = arrow absent)."""

    depth: int
    e0: list
    e1: list

    def edge_count(self) -> int:
        return int(sum(int(a.sum()) + int(b.sum()) for a, b in zip(self.e0, self.e1)))


_PAIR_LAW = vertex_distribution(2)
_PAIR_CUM = np.cumsum(
    [float(_PAIR_LAW.table[p]) for p in ((0, 0), (0, 1), (1, 0), (1, 1))]
)


def sample_quadrant(depth: int, mode: str, seed: int, q: float | None = None) -> QuadrantGraph:
    """One realization of the quadrant with joint or independent arrows.

    Joint mode draws each vertex's out-pair from the exact two-leg marginal of
    the Clifford tables; independent mode removes each arrow with probability
    q (the decoupling value by default; q is exposed as a test hook).
    """
    if depth < 1:
        raise ValueError("depth >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(derive_key(seed, 0x51AD)))
    a0, a1 = [], []
    for k in range(1, depth + 1):
        if mode == "joint":
            u = rng.random(k)
            idx = np.searchsorted(_PAIR_CUM, u, side="right")
            a0.append((idx >> 1).astype(np.uint8))
            a1.append((idx & 1).astype(np.uint8))
        elif mode == "independent":
            qq = decouple_q()[1] if q is None else q
            a0.append((rng.random(k) >= qq).astype(np.uint8))
            a1.append((rng.random(k) >= qq).astype(np.uint8))
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return QuadrantGraph(depth, a0, a1)


def longest_path(g: QuadrantGraph) -> int:
    """Longest run of consecutive arrows from the apex (level-by-level reach)."""
    reach = np.array([True])
    best = 0
    for k in range(1, g.depth + 1):
        nxt = np.zeros(k + 1, dtype=bool)
        go0 = reach & (g.a0[k - 1] != 0)
        go1 = reach & (g.a1[k - 1] != 0)
        nxt[:-1] |= go0
        nxt[1:] |= go1
        if not nxt.any():
            return best
        best = k
        reach = nxt
    return best


def survival_curve(depth: int, mode: str, samples: int, seed: int, q: float | None = None):
    """Per-depth survival fractions from one coupled batch of realizations.

    Arrows are sampled level by level from a single stream, so the depth-d
    entry is the survival of the same realizations truncated at d: the curve
    is monotone nonincreasing sample by sample.
    """
    if samples < 1:
        raise ValueError("samples >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(derive_key(seed, 0x5CA1E)))
    if mode == "independent" and q is None:
        q = decouple_q()[1]
    reach = np.ones((samples, 1), dtype=bool)
    alive = np.ones(samples, dtype=bool)
    curve = np.empty(depth)
    for k in range(1, depth + 1):
        if mode == "joint":
            u = rng.random((samples, k))
            idx = np.searchsorted(_PAIR_CUM, u.ravel(), side="right").reshape(samples, k)
            a0 = (idx >> 1).astype(bool)
            a1 = (idx & 1).astype(bool)
        elif mode == "independent":
            a0 = rng.random((samples, k)) >= q
            a1 = rng.random((samples, k)) >= q
        else:
            raise ValueError(f"unknown mode {mode!r}")
        nxt = np.zeros((samples, k + 1), dtype=bool)
        nxt[:, :-1] = reach & a0
        nxt[:, 1:] |= reach & a1
        alive &= nxt.any(axis=1)
        curve[k - 1] = alive.mean()
        reach = nxt
        reach[~alive] = False
    return curve


def survival_probability(depth: int, mode: str, samples: int, seed: int, q: float | None = None):
    """Fraction of realizations whose longest path reaches full depth."""
    curve = survival_curve(depth, mode, samples, seed, q=q)
    p = curve[-1]
    return p, float(np.sqrt(max(p * (1 - p), 0.0) / samples))


# -- dual walls ---------------------------------------------------------------


def _dual_neighbors(k: int, i: int):
    """Neighbors of interior dual face (k, i) with the crossed arrow."""
    out = []
    if 0 <= i - 1 < k - 1:
        out.append(((k - 1, i - 1), ("a0", k, i)))
    if i <= k - 2:
        out.append(((k - 1, i), ("a1", k, i)))
    out.append(((k + 1, i), ("a1", k + 1, i)))
    out.append(((k + 1, i + 1), ("a0", k + 1, i + 1)))
    return out


def count_walls(d: int) -> int:
    """Exact number of d-walls by exhaustive simple-path enumeration.

    A d-wall is a set of d consecutive dual edges connecting the left side to
    the right side: a simple path entering through a left-boundary arrow
    a0[s, 0], crossing d - 2 interior arrows, and leaving through a
    right-boundary arrow a1[e, e-1].
    """
    if not 2 <= d <= 12:
        raise ValueError("d must be between 2 and 12")
    total = 0
    for s in range(1, d):
        stack = [((s, 0), frozenset([(s, 0)]), 1)]
        while stack:
            face, visited, edges = stack.pop()
            k, i = face
            if i == k - 1 and edges + 1 == d:
                total += 1
            if edges + 1 >= d:
                continue
            for nb, _arrow in _dual_neighbors(k, i):
                if nb not in visited:
                    stack.append((nb, visited | {nb}, edges + 1))
    return total


def enumerate_walls(d: int):
    """The d-walls themselves, as frozensets of crossed arrows."""
    if not 2 <= d <= 12:
        raise ValueError("d must be between 2 and 12")
    walls = []
    for s in range(1, d):
        stack = [((s, 0), frozenset([(s, 0)]), (("a0", s, 0),))]
        while stack:
            face, visited, crossed = stack.pop()
            k, i = face
            if i == k - 1 and len(crossed) + 1 == d:
                walls.append((frozenset(crossed + (("a1", k, k - 1),)), s, k))
            if len(crossed) + 1 >= d:
                continue
            for nb, arrow in _dual_neighbors(k, i):
                if nb not in visited:
                    stack.append((nb, visited | {nb}, crossed + (arrow,)))
    return walls


def wall_bound(d: int) -> int:
    """Combinatorial upper bound (d - 3) 3^(d-2) + 2 on the number of d-walls."""
    return (d - 3) * 3 ** (d - 2) + 2


def dual_of(g: QuadrantGraph) -> DualGraph:
    """Exact complementation: a dual edge is present iff its arrow is absent."""
    e0 = [(1 - a).astype(np.uint8) for a in g.a0]
    e1 = [(1 - a).astype(np.uint8) for a in g.a1]
    return DualGraph(g.depth, e0, e1)


def shortest_wall_length(g: QuadrantGraph):
    """Edge count of the shortest left-right dual path through absent arrows.

    Returns None when no wall exists inside the truncation depth.  Any such
    path with d edges confines every directed path to length < d, so it
    certifies blocking for all l >= d.
    """
    import heapq

    dual = dual_of(g)

    def edge_present(arrow) -> bool:
        kind, k, i = arrow
        if k > g.depth:
            return False
        return bool((dual.e0 if kind == "a0" else dual.e1)[k - 1][i])

    # Dijkstra-like BFS from all left stubs at cost 1 per crossed arrow
    heap = []
    dist = {}
    for s in range(1, g.depth):
        if edge_present(("a0", s, 0)):
            face = (s, 0)
            if dist.get(face, 1 << 30) > 1:
                dist[face] = 1
                heapq.heappush(heap, (1, face))
    best = None
    while heap:
        cost, face = heapq.heappop(heap)
        if cost > dist.get(face, 1 << 30):
            continue
        k, i = face
        if i == k - 1 and edge_present(("a1", k, k - 1)):
            best = cost + 1 if best is None else min(best, cost + 1)
        for nb, arrow in _dual_neighbors(k, i):
            if nb[0] > g.depth - 1 or not edge_present(arrow):
                continue
            if dist.get(nb, 1 << 30) > cost + 1:
                dist[nb] = cost + 1
                heapq.heappush(heap, (cost + 1, nb))
    return best


def wall_blocks_path_check(g: QuadrantGraph) -> bool:
    """Lemma consistency: whenever a d-wall exists, no path reaches length d."""
    d = shortest_wall_length(g)
    if d is None:
        return True
    return longest_path(g) < d


# -- full boundary graph (used to check the quadrant reduction ordering) ------


def _anchor_of(layer_parity: int, site):
    return tuple(c - ((c - layer_parity) % 2) for c in site)


def _ring(k: int):
    if k == 0:
        return [(0, 0)]
    lo, hi = -(k - 1), k
    ring = []
    for x in range(lo, hi + 1):
        ring.append((x, lo))
        ring.append((x, hi))
    for y in range(lo + 1, hi):
        ring.append((lo, y))
        ring.append((hi, y))
    return ring


@dataclass
class BoundaryGraph:
    """Level-by-level gate/qubit structure of the 2D light-cone boundary.

    levels[k] holds the gate anchors of half-step k+1; arrows[k][v] lists
    (target_vertex_index, is_lower_side) for each boundary qubit of gate v;
    lower[k] marks the gates forming the lower quadrant, ordered by x.
    """

    depth: int
    levels: list
    arrows: list
    lower: list


def full_boundary_graph(depth: int) -> BoundaryGraph:
    levels = []
    arrows = []
    lower = []
    for k in range(1, depth + 2):
        parity = 1 if k % 2 == 0 else 0  # half-step k: layer A odd steps, B even
        anchors = sorted({_anchor_of(parity, s) for s in _ring(k - 1)})
        levels.append(anchors)
    for k in range(1, depth + 1):
        parity_next = 1 if (k + 1) % 2 == 0 else 0
        index_next = {a: j for j, a in enumerate(levels[k])}
        ring_k = set(_ring(k))
        y_low = min(y for _, y in ring_k)
        level_arrows = []
        for ax, ay in levels[k - 1]:
            outs = []
            for site in ((ax, ay), (ax + 1, ay), (ax, ay + 1), (ax + 1, ay + 1)):
                if site in ring_k:
                    outs.append((index_next[_anchor_of(parity_next, site)], site[1] == y_low))
            level_arrows.append(outs)
        arrows.append(level_arrows)
    for k in range(1, depth + 2):
        anchors = levels[k - 1]
        y_min = min(a[1] for a in anchors)
        lower.append([j for j, a in enumerate(anchors) if a[1] == y_min])
    return BoundaryGraph(depth, levels, arrows, lower)


def coupled_full_vs_quadrant_survival(depth: int, samples: int, seed: int):
    """Per-sample survival of the full boundary graph and its lower quadrant.

    Both indicators come from the same per-vertex arrow patterns, so quadrant
    survival must imply full survival realization by realization.
    """
    graph = full_boundary_graph(depth)
    rng = np.random.default_rng(np.random.SeedSequence(derive_key(seed, 0xF011)))
    law = {a: vertex_distribution(a) for a in (2, 3, 4)}
    cums = {a: np.cumsum([float(p) for p in law[a].table.values()]) for a in (2, 3, 4)}
    patterns = {a: list(law[a].table.keys()) for a in (2, 3, 4)}
    full_alive = np.zeros(samples, dtype=bool)
    quad_alive = np.zeros(samples, dtype=bool)
    for n in range(samples):
        reach = np.ones(1, dtype=bool)
        reach_q = np.ones(1, dtype=bool)
        full_depth = 0
        quad_depth = 0
        for k in range(1, depth + 1):
            nxt = np.zeros(len(graph.levels[k]), dtype=bool)
            nxt_q = np.zeros(len(graph.lower[k]), dtype=bool)
            quad_prev = {v: qi for qi, v in enumerate(graph.lower[k - 1])}
            quad_next = {v: qi for qi, v in enumerate(graph.lower[k])}
            draws = rng.random(len(graph.arrows[k - 1]))
            for v, outs in enumerate(graph.arrows[k - 1]):
                bits = patterns[len(outs)][
                    int(np.searchsorted(cums[len(outs)], draws[v], side="right"))
                ]
                if reach[v]:
                    for (tgt, _low), b in zip(outs, bits):
                        if b:
                            nxt[tgt] = True
                qi = quad_prev.get(v)
                if qi is not None and reach_q[qi]:
                    for (tgt, low), b in zip(outs, bits):
                        if low and b:
                            nxt_q[quad_next[tgt]] = True
            if nxt.any():
                full_depth = k
            if nxt_q.any():
                quad_depth = k
            reach, reach_q = nxt, nxt_q
            if not reach.any():
                break
        full_alive[n] = full_depth == depth
        quad_alive[n] = quad_depth == depth
    return full_alive, quad_alive


@dataclass
class BoundReport:
    """Closed-form evaluation of the no-path bound and its complement."""

    q: float
    epsilon: float
    wall_table: dict
    per_d_terms: dict
    finite_sum: float
    tail_sum: float
    no_path_bound: float
    path_lower_bound: float
    table_source: str = "published table"


def analytic_bound(q: float | None = None, wall_table: dict | None = None) -> BoundReport:
    """Sum N_d q^d over the published small-d wall table plus the bound tail.

    The tail sums ((d-3) 3^(d-2) + 2) q^d for d >= 7 in closed form, which
    converges only for 3q < 1.  Pass a different wall_table (e.g. from
    count_walls) to evaluate the same expression over other counts.
    """
    epsilon, q_exact = decouple_q()
    if q is None:
        q = q_exact
    table = PAPER_WALL_TABLE if wall_table is None else dict(wall_table)
    source = "published table" if wall_table is None else "caller-supplied"
    if 3 * q >= 1:
        raise ValueError("tail series diverges: need 3q < 1")
    per_d = {d: n * q**d for d, n in sorted(table.items())}
    finite = float(sum(per_d.values()))
    d0 = max(table) + 1
    # sum_{d>=d0} (d-3) 3^(d-2) q^d  +  2 sum_{d>=d0} q^d
    r = 3 * q
    a0 = d0 - 3
    geom = r**d0 / 9.0 * (a0 / (1 - r) + r / (1 - r) ** 2)
    tail = float(geom + 2 * q**d0 / (1 - q))
    no_path = finite + tail
    return BoundReport(
        q=float(q),
        epsilon=float(epsilon),
        wall_table=table,
        per_d_terms=per_d,
        finite_sum=finite,
        tail_sum=tail,
        no_path_bound=no_path,
        path_lower_bound=1.0 - no_path,
        table_source=source,
    )
