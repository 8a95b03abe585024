import numpy as np
import pytest

from floqcliff.circuit import FloquetCircuit, Geometry
from floqcliff.clifford import (
    compose,
    from_pauli_images,
    identity_gate,
    random_clifford,
)
from floqcliff.pauli import PauliOperator
from floqcliff.sff import (
    SffEstimate,
    brute_force_sff,
    fourier_sff,
    invariant_group,
    rmt_reference,
    sff_curve,
    time_average,
    trace_squared,
)

from oracles import gate_unitary


def x_conjugation_gate():
    # conjugation by sigma_x: X -> X, Z -> -Z
    x = PauliOperator.single((0,), "X")
    z = PauliOperator.single((0,), "Z", phase_exp=2)
    return from_pauli_images([(x, z)])


def hadamard_gate():
    x = PauliOperator.single((0,), "Z")
    z = PauliOperator.single((0,), "X")
    return from_pauli_images([(x, z)])


def phase_gate():
    x = PauliOperator.single((0,), "Y")
    z = PauliOperator.single((0,), "Z")
    return from_pauli_images([(x, z)])


def test_invariant_group_identity():
    ig = invariant_group(identity_gate(2))
    assert len(ig) == 4
    assert ig.all_positive
    assert trace_squared(identity_gate(2)) == 16


def test_invariant_group_x_conjugation():
    ig = invariant_group(x_conjugation_gate())
    assert len(ig) == 2
    assert sorted(ig.sign_flags.tolist()) == [0, 1]  # X fixed with +, Z with -
    assert trace_squared(x_conjugation_gate()) == 0


def test_invariant_group_hadamard():
    g = hadamard_gate()
    ig = invariant_group(g)
    assert len(ig) == 1
    assert ig.generators[0].to_dense().tolist() == [1, 1]  # Y
    assert ig.sign_flags.tolist() == [1]  # H Y H = -Y
    assert trace_squared(g) == 0
    assert brute_force_sff(g, method="dense") == 0


def test_phase_gate_trace():
    g = phase_gate()
    assert trace_squared(g) == 2  # |1 + i|^2
    assert brute_force_sff(g, method="dense") == 2
    assert brute_force_sff(g, method="pauli") == 2


def test_brute_force_identity_small():
    assert brute_force_sff(identity_gate(2), method="pauli") == 16


def test_trace_squared_matches_dense_oracle():
    rng = np.random.default_rng(0)
    for n in (1, 2, 3):
        for _ in range(60):
            g = random_clifford(n, rng)
            U = gate_unitary(g)
            want = int(round(abs(np.trace(U)) ** 2))
            assert trace_squared(g) == want
            assert brute_force_sff(g, method="dense") == want


def test_trace_squared_matches_pauli_sum():
    rng = np.random.default_rng(1)
    for n in (2, 4, 6):
        for _ in range(25):
            g = random_clifford(n, rng)
            assert trace_squared(g) == brute_force_sff(g, method="pauli")


def test_trace_squared_power_of_two_invariant():
    rng = np.random.default_rng(2)
    for _ in range(100):
        g = random_clifford(3, rng)
        v = trace_squared(g)
        assert v == 0 or (v & (v - 1)) == 0 and 1 <= v <= 4**3


def test_composition_values_on_floquet_powers():
    # whole-circuit gates through several periods keep trace values exact
    c = FloquetCircuit(Geometry.chain(6), seed=5)
    base = c.period_gate()
    cur = identity_gate(6)
    for _ in range(6):
        cur = compose(base, cur)
        assert trace_squared(cur) == brute_force_sff(cur, method="pauli")


def test_sff_curve_k0_exact_no_variance():
    est = sff_curve(Geometry.chain(6), t_max=3, samples=20, seed=7)
    assert est.K[0] == 4.0**6
    assert est.stderr[0] == 0.0
    assert est.samples == 20


def test_sff_curve_deterministic_and_parallel_identical():
    a = sff_curve(Geometry.chain(4), t_max=4, samples=12, seed=9, processes=1)
    b = sff_curve(Geometry.chain(4), t_max=4, samples=12, seed=9, processes=2)
    assert a.sums == b.sums
    assert np.array_equal(a.K, b.K)


def test_orbit_lengths_divide_symplectic_order():
    rng = np.random.default_rng(11)
    for seed in range(4):
        c = FloquetCircuit(Geometry.chain(4), seed=seed)
        S = c.period_gate().s_dense.astype(np.uint8)
        order, M = 1, S.copy()
        while not np.array_equal(M, np.eye(8, dtype=np.uint8)):
            M = (S @ M) % 2
            order += 1
            assert order < 10**6
        for _ in range(10):
            v = rng.integers(0, 2, size=8).astype(np.uint8)
            if not v.any():
                continue
            t, w = 1, (S @ v) % 2
            while not np.array_equal(w, v):
                w = (S @ w) % 2
                t += 1
            assert order % t == 0


def test_time_average_constant_series():
    est = SffEstimate(
        times=np.arange(5), K=np.full(5, 3.0), stderr=np.zeros(5), samples=1,
        L=2, geometry=Geometry.chain(2),
    )
    # divisor is t, so a constant series gives K * (t + 1) / t
    got = time_average(est)
    assert got[0] == 3.0
    assert np.allclose(got[1:], 3.0 * (np.arange(1, 5) + 1) / np.arange(1, 5))


def test_time_average_identity_circuit():
    c = FloquetCircuit(Geometry.chain(4), seed=0, constant_gate=identity_gate(2))
    est = sff_curve_from_circuit(c, t_max=4)
    got = time_average(est)
    assert got[0] == 4.0**4
    assert np.allclose(got[1:], 4.0**4 * (np.arange(1, 5) + 1) / np.arange(1, 5))


def sff_curve_from_circuit(circuit, t_max):
    base = circuit.period_gate()
    cur = identity_gate(circuit.geometry.n_qubits)
    vals = [trace_squared(cur)]
    for _ in range(t_max):
        cur = compose(base, cur)
        vals.append(trace_squared(cur))
    K = np.array(vals, dtype=float)
    return SffEstimate(
        times=np.arange(t_max + 1), K=K, stderr=np.zeros_like(K), samples=1,
        L=circuit.geometry.n_qubits, geometry=circuit.geometry,
    )


def test_rmt_reference_values():
    assert rmt_reference(3, 0) == 4.0**3
    assert rmt_reference(3, 5) == 5.0
    assert rmt_reference(3, 100) == 8.0


def test_fourier_sff():
    zero = SffEstimate(
        times=np.arange(4), K=np.zeros(4), stderr=np.zeros(4), samples=1,
        L=2, geometry=Geometry.chain(2),
    )
    assert fourier_sff(zero, 0.3) == 0.0
    est = SffEstimate(
        times=np.arange(4), K=np.array([5.0, 1.0, 2.0, 3.0]), stderr=np.zeros(4),
        samples=1, L=2, geometry=Geometry.chain(2),
    )
    assert np.isclose(fourier_sff(est, 0.0), (1 + 2 + 3) / np.pi)
    single = SffEstimate(
        times=np.arange(2), K=np.array([0.0, 1.0]), stderr=np.zeros(2), samples=1,
        L=2, geometry=Geometry.chain(2),
    )
    assert np.isclose(fourier_sff(single, 0.7), np.cos(0.7) / np.pi)


def test_brute_force_rejects_oversize():
    with pytest.raises(ValueError):
        brute_force_sff(identity_gate(13), method="pauli")
    with pytest.raises(ValueError):
        brute_force_sff(identity_gate(4), method="dense")
    with pytest.raises(ValueError):
        brute_force_sff(identity_gate(12), method="pauli", max_elements=1 << 10)
