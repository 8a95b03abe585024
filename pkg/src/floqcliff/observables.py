"""Operator-spreading density, light-cone statistics, and entanglement.

Spreading runs evolve a single-site X from the origin on a dense window and
record the non-identity indicator rho per site; the scalar phase plays no
role in any observable here.  Averages accumulate integer counts, so results
are bit-identical for any sample scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np

from .circuit import (
    LAYER_A,
    LAYER_B,
    FloquetCircuit,
    Geometry,
    GridEvolver,
    StabilizerState,
    boundary_sites,
)
from .gf2 import BitMatrix, rank
from .mc import accumulate, bernoulli_stats, mean_stats
from .pauli import PauliOperator, support

__all__ = [
    "SpreadProfile",
    "LocalizationFit",
    "LightSpeedEstimate",
    "EntropyCurve",
    "rho",
    "average_spread",
    "fit_localization_length",
    "boundary_support",
    "lightspeed_fraction",
    "entanglement_entropy",
    "entanglement_curve",
]


def rho(p: PauliOperator) -> dict:
    """Indicator of non-identity letters: site -> 1 (absent sites are 0)."""
    return {site: 1 for site in support(p)}


@dataclass
class SpreadProfile:
    """Circuit-averaged occupation rho(x, t) on a window around the origin."""

    dim: int
    times: list
    lo: int  # window offset: array index 0 is lattice coordinate lo
    counts: dict  # t -> integer hit counts, shape (W,) or (W, W)
    samples: int
    seed: int

    def mean(self, t: int) -> np.ndarray:
        return self.counts[t] / self.samples

    def stderr(self, t: int) -> np.ndarray:
        p = self.mean(t)
        return np.sqrt(np.maximum(p * (1.0 - p), 0.0) / self.samples)

    def site_mean(self, t: int, site) -> float:
        idx = tuple(int(c) - self.lo for c in site)
        return float(self.counts[t][idx]) / self.samples


def _spread_worker(dim, t_max, times, index, seed):
    geometry = Geometry.line() if dim == 1 else Geometry.plane()
    circuit = FloquetCircuit(geometry, seed=seed)
    grid = GridEvolver(circuit, t_max)
    grid.place(PauliOperator.single((0,) * dim, "X"))
    wanted = set(times)
    out = {}
    if 0 in wanted:
        out[("rho", 0)] = grid.support_mask().astype(np.int64)
    for t in range(1, t_max + 1):
        grid.step_period()
        if t in wanted:
            out[("rho", t)] = grid.support_mask().astype(np.int64)
    out["count"] = 1
    return out


def average_spread(dim: int, t_max: int, samples: int, seed: int, times=None, processes=1) -> SpreadProfile:
    """Mean of rho over independent realizations, initial X at the origin."""
    if samples < 1:
        raise ValueError("samples >= 1")
    if times is None:
        times = list(range(t_max + 1))
    worker = partial(_spread_worker, dim, t_max, list(times))
    acc = accumulate(worker, samples, seed, processes=processes)
    lo = -(2 * t_max + 4)
    counts = {t: acc[("rho", t)] for t in times}
    return SpreadProfile(dim=dim, times=list(times), lo=lo, counts=counts,
                         samples=acc["count"], seed=seed)


@dataclass
class LocalizationFit:
    mu: float
    c: float
    window: tuple
    residual: float
    n_points: int


def fit_localization_length(values, window) -> LocalizationFit:
    """Least-squares line on log values; mu = -1 / slope.

    ``values[x]`` is the profile as a function of non-negative distance x.
    All values inside the window must be positive and the window must hold at
    least 5 points.
    """
    x_lo, x_hi = window
    xs = np.arange(x_lo, x_hi + 1)
    if xs.size < 5:
        raise ValueError("window too small: need >= 5 points")
    ys = np.asarray(values, dtype=float)[xs]
    if np.any(ys <= 0):
        raise ValueError("non-positive values in fit window")
    logs = np.log(ys)
    slope, intercept = np.polyfit(xs, logs, 1)
    if slope >= 0:
        raise ValueError("profile does not decay over the window")
    resid = float(np.sqrt(np.mean((logs - (slope * xs + intercept)) ** 2)))
    return LocalizationFit(
        mu=-1.0 / slope, c=float(np.exp(intercept)), window=(int(x_lo), int(x_hi)),
        residual=resid, n_points=int(xs.size),
    )


def profile_vs_distance(profile: SpreadProfile, t: int) -> np.ndarray:
    """1D profile folded about the origin: mean of rho(x) and rho(-x)."""
    if profile.dim != 1:
        raise ValueError("distance profile is defined for 1D spreads")
    mean = profile.mean(t)
    origin = -profile.lo
    n = min(origin, mean.size - origin)
    folded = 0.5 * (mean[origin : origin + n] + mean[origin::-1][:n])
    return folded


def boundary_support(p: PauliOperator, half_steps: int, origin=None) -> bool:
    """True iff the operator touches the light-cone boundary ring.

    The ring is the outer square of side 2k after k half-steps for an
    even-coordinate origin (the spreading runs start at the origin proper).
    """
    if p.is_identity():
        return False
    dim = len(next(iter(support(p))))
    origin = origin or (0,) * dim
    letters = p.letters
    for site in boundary_sites(dim, half_steps):
        shifted = tuple(o + c for o, c in zip(origin, site))
        if shifted in letters:
            return True
    return False


@dataclass
class LightSpeedEstimate:
    t_max: int
    fraction: float
    stderr: float
    samples: int
    alive_per_half_step: np.ndarray  # fraction with boundary support at every k' <= k


def boundary_alive_curve(circuit: FloquetCircuit, t_max: int) -> np.ndarray:
    """Per-half-step indicator: boundary support held at every step so far."""
    grid = GridEvolver(circuit, t_max)
    grid.place(PauliOperator.single((0, 0), "X"))
    k_steps = 2 * t_max
    alive = np.zeros(k_steps, dtype=np.int64)
    lo = grid.lo
    for k in range(1, k_steps + 1):
        grid.step_half(LAYER_A if k % 2 else LAYER_B)
        ring = boundary_sites(2, k)
        occ = grid.gx | grid.gz
        if not any(occ[site[0] - lo, site[1] - lo] for site in ring):
            break
        alive[k - 1] = 1
    return alive


def _lightspeed_worker(t_max, index, seed):
    circuit = FloquetCircuit(Geometry.plane(), seed=seed)
    return {"alive": boundary_alive_curve(circuit, t_max), "count": 1}


def lightspeed_fraction(t_max: int, samples: int, seed: int, processes=1) -> LightSpeedEstimate:
    """Probability of non-trivial boundary support at every half-step."""
    if samples < 1:
        raise ValueError("samples >= 1")
    if t_max == 0:
        return LightSpeedEstimate(0, 1.0, 0.0, samples, np.ones(0))
    acc = accumulate(partial(_lightspeed_worker, t_max), samples, seed, processes=processes)
    n = acc["count"]
    curve = acc["alive"] / n
    frac, err = bernoulli_stats(int(acc["alive"][-1]), n)
    return LightSpeedEstimate(t_max, float(frac), float(err), n, curve)


def entanglement_entropy(state: StabilizerState, region) -> int:
    """Entropy in bits of a qubit-index region of a pure stabilizer state."""
    region = sorted(set(int(i) for i in region))
    if region and not (0 <= region[0] and region[-1] < state.L):
        raise ValueError("region outside the system")
    if not region:
        return 0
    cols = region + [state.L + i for i in region]
    sub = BitMatrix.from_dense(state.tableau_bits[:, cols])
    s = rank(sub) - len(region)
    assert 0 <= s <= min(len(region), state.L - len(region))
    return int(s)


@dataclass
class EntropyCurve:
    times: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    samples: int
    L: int
    geometry: Geometry
    region_size: int


def half_system_region(geometry: Geometry):
    """Indices of the half-system cut: first half of the (longer) axis."""
    if geometry.dimension == 1:
        cut = geometry.extent[0] // 2
        return [geometry.site_index((x,)) for x in range(cut)]
    lx, ly = geometry.extent
    if ly >= lx:
        return [geometry.site_index((x, y)) for x in range(lx) for y in range(ly // 2)]
    return [geometry.site_index((x, y)) for x in range(lx // 2) for y in range(ly)]


def entanglement_curve(geometry: Geometry, t_max: int, samples: int, seed: int,
                       record_times=None, processes=1) -> EntropyCurve:
    """Circuit-averaged half-system entropy from the all-up product state."""
    if not geometry.is_finite:
        raise ValueError("entropy curves need a finite geometry")
    if record_times is None:
        record_times = list(range(t_max + 1))
    worker = partial(_entropy_curve_worker, geometry, t_max, list(record_times))
    acc = accumulate(worker, samples, seed, processes=processes)
    n = acc["count"]
    means, errs = [], []
    for s, sq in zip(acc["s"], acc["ssq"]):
        m, e = mean_stats(s, sq, n)
        means.append(m)
        errs.append(e)
    return EntropyCurve(
        times=np.array(record_times),
        mean=np.array(means),
        stderr=np.array(errs),
        samples=n,
        L=geometry.n_qubits,
        geometry=geometry,
        region_size=len(half_system_region(geometry)),
    )


def _entropy_curve_worker(geometry, t_max, record_times, index, seed):
    circuit = FloquetCircuit(geometry, seed=seed)
    state = StabilizerState.all_up(geometry.n_qubits)
    region = half_system_region(geometry)
    wanted = set(record_times)
    svals = {0: 0}
    for t in range(1, t_max + 1):
        state = circuit.evolve_state(state, 1)
        if t in wanted:
            svals[t] = entanglement_entropy(state, region)
    s = [svals.get(t, 0) for t in record_times]
    return {"s": s, "ssq": [v * v for v in s], "count": 1}
