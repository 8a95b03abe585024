import numpy as np
import pytest

from floqcliff.circuit import FloquetCircuit, Geometry, StabilizerState
from floqcliff.clifford import identity_gate
from floqcliff.observables import (
    average_spread,
    boundary_support,
    entanglement_curve,
    entanglement_entropy,
    fit_localization_length,
    half_system_region,
    lightspeed_fraction,
    rho,
)
from floqcliff.pauli import PauliOperator

def test_rho_basics():
    assert rho(PauliOperator.single((0, 0), "X")) == {(0, 0): 1}
    assert rho(PauliOperator.identity()) == {}
    p = PauliOperator({(0,): (1, 0), (2,): (1, 1)})
    r = rho(p)
    assert r == {(0,): 1, (2,): 1}
    assert (1,) not in r


def test_average_spread_t0_is_delta():
    prof = average_spread(dim=1, t_max=2, samples=7, seed=1, times=[0, 1])
    m0 = prof.mean(0)
    assert prof.site_mean(0, (0,)) == 1.0
    assert m0.sum() == 1.0


def test_average_spread_deterministic_and_parallel():
    a = average_spread(dim=1, t_max=3, samples=10, seed=2, processes=1)
    b = average_spread(dim=1, t_max=3, samples=10, seed=2, processes=2)
    for t in a.times:
        assert np.array_equal(a.counts[t], b.counts[t])


def test_spread_zero_outside_light_cone():
    prof = average_spread(dim=2, t_max=3, samples=25, seed=3, times=[1, 2, 3])
    for t in (1, 2, 3):
        m = prof.mean(t)
        o = -prof.lo
        lo, hi = -(2 * t - 1), 2 * t
        cone = m[o + lo : o + hi + 1, o + lo : o + hi + 1]
        assert m.sum() == pytest.approx(cone.sum())  # nothing outside, exactly


def test_fit_localization_exact_exponentials():
    xs = np.arange(0, 60)
    fit = fit_localization_length(np.exp(-xs / 7.0), (5, 40))
    assert abs(fit.mu - 7.0) < 1e-6
    fit2 = fit_localization_length(0.5 * np.exp(-xs / 12.0), (5, 40))
    assert abs(fit2.mu - 12.0) < 1e-9
    assert abs(fit2.c - 0.5) < 1e-9


def test_fit_localization_rejects_bad_windows():
    xs = np.arange(0, 30)
    vals = np.exp(-xs / 5.0)
    with pytest.raises(ValueError):
        fit_localization_length(vals, (0, 3))  # too few points
    vals2 = vals.copy()
    vals2[10] = 0.0
    with pytest.raises(ValueError):
        fit_localization_length(vals2, (5, 15))
    with pytest.raises(ValueError):
        fit_localization_length(np.ones(30), (5, 15) )  # no decay


def test_boundary_support_cases():
    assert boundary_support(PauliOperator.single((0, 0), "X"), 0)
    assert not boundary_support(PauliOperator.identity(), 0)
    # support on the t = 1 ring (half_steps = 2): corner site (2, 2)
    p = PauliOperator({(2, 2): (1, 0), (0, 0): (0, 1)})
    assert boundary_support(p, 2)
    # strictly interior support does not touch the ring
    q = PauliOperator({(0, 0): (1, 0)})
    assert not boundary_support(q, 2)


def test_lightspeed_identity_circuit_zero():
    from floqcliff.observables import boundary_alive_curve

    est = lightspeed_fraction(t_max=0, samples=5, seed=4)
    assert est.fraction == 1.0
    # frozen dynamics: support never grows, so the operator misses the
    # boundary from the second half-step on and the fraction is 0
    circuit = FloquetCircuit(Geometry.plane(), seed=0, constant_gate=identity_gate(4))
    alive = boundary_alive_curve(circuit, t_max=3)
    assert alive[0] == 1  # the origin still sits on the first tiny ring
    assert not alive[1:].any()


def test_lightspeed_monotone_and_high():
    est = lightspeed_fraction(t_max=4, samples=60, seed=5)
    curve = est.alive_per_half_step
    assert all(curve[i] >= curve[i + 1] for i in range(len(curve) - 1))
    assert est.fraction >= 0.9  # virtually all realizations keep growing
    assert est.fraction == curve[-1]


def test_entropy_product_state_zero():
    st = StabilizerState.all_up(6)
    for region in ([], [0], [0, 1, 2], list(range(6))):
        assert entanglement_entropy(st, region) == 0


def test_entropy_bell_pair():
    # stabilizers XX, ZZ
    bits = np.array([[1, 1, 0, 0], [0, 0, 1, 1]], dtype=np.uint8)
    st = StabilizerState(2, bits, np.zeros(2, dtype=np.uint8))
    assert entanglement_entropy(st, [0]) == 1
    assert entanglement_entropy(st, [1]) == 1


def test_entropy_ghz_half_cut_matches_dense_oracle():
    # GHZ on 4 qubits: XXXX, ZZII, IZZI, IIZZ
    bits = np.zeros((4, 8), dtype=np.uint8)
    bits[0, :4] = 1
    bits[1, 4] = bits[1, 5] = 1
    bits[2, 5] = bits[2, 6] = 1
    bits[3, 6] = bits[3, 7] = 1
    st = StabilizerState(4, bits, np.zeros(4, dtype=np.uint8))
    assert entanglement_entropy(st, [0, 1]) == 1
    # dense oracle: reduced density matrix of |GHZ>
    psi = np.zeros(16)
    psi[0] = psi[15] = 1 / np.sqrt(2)
    rho_full = np.outer(psi, psi)
    rho_a = rho_full.reshape(4, 4, 4, 4).trace(axis1=1, axis2=3)
    evals = np.linalg.eigvalsh(rho_a)
    evals = evals[evals > 1e-12]
    s_dense = float(-(evals * np.log2(evals)).sum())
    assert abs(s_dense - 1.0) < 1e-9


def test_entropy_complement_symmetry():
    c = FloquetCircuit(Geometry.chain(8), seed=6)
    st = c.evolve_state(StabilizerState.all_up(8), 5)
    rng = np.random.default_rng(0)
    for _ in range(10):
        size = int(rng.integers(1, 8))
        region = list(rng.choice(8, size=size, replace=False))
        comp = [i for i in range(8) if i not in region]
        sa = entanglement_entropy(st, region)
        sb = entanglement_entropy(st, comp)
        assert sa == sb
        assert 0 <= sa <= min(len(region), 8 - len(region))


def test_entropy_region_validation():
    st = StabilizerState.all_up(4)
    with pytest.raises(ValueError):
        entanglement_entropy(st, [7])


def test_half_system_region_shapes():
    assert half_system_region(Geometry.chain(8)) == [0, 1, 2, 3]
    region = half_system_region(Geometry.patch(16))
    assert len(region) == 8


def test_entanglement_curve_t0_and_growth():
    curve = entanglement_curve(Geometry.chain(8), t_max=6, samples=12, seed=7)
    assert curve.mean[0] == 0.0
    assert curve.mean[-1] > 0.0
    assert all(curve.mean <= 4.0)


def test_entanglement_curve_identity_circuit_flat():
    geo = Geometry.chain(8)
    circuit = FloquetCircuit(geo, seed=0, constant_gate=identity_gate(2))
    st = circuit.evolve_state(StabilizerState.all_up(8), 4)
    assert entanglement_entropy(st, half_system_region(geo)) == 0
