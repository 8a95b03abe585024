import numpy as np
import pytest
import scipy.stats

from floqcliff.clifford import (
    CliffordEnsembleSpec,
    CliffordGate,
    compose,
    conjugate,
    from_pauli_images,
    identity_gate,
    inverse,
    random_clifford,
    sample_uniform,
    symplectic_form,
    _find_transvection,
    _transvect,
)
from floqcliff.pauli import PauliOperator, commutes

from oracles import conjugate_dense, gate_unitary


def paper_example_gate():
    # W(X (x) 1)W+ = Z (x) X, W(Z (x) 1)W+ = 1 (x) Z,
    # W(1 (x) X)W+ = Z (x) 1, W(1 (x) Z)W+ = X (x) Z
    zx = PauliOperator({(0,): (0, 1), (1,): (1, 0)})
    iz = PauliOperator({(1,): (0, 1)})
    zi = PauliOperator({(0,): (0, 1)})
    xz = PauliOperator({(0,): (1, 0), (1,): (0, 1)})
    return from_pauli_images([(zx, iz), (zi, xz)])


def random_hermitian_pauli(rng, n):
    letters = {}
    for i in range(n):
        k = rng.integers(0, 4)
        if k:
            letters[(i,)] = [(1, 0), (0, 1), (1, 1)][k - 1]
    return PauliOperator(letters, int(rng.integers(0, 2)) * 2)


def test_paper_example_images():
    g = paper_example_gate()
    x0 = PauliOperator.single((0,), "X")
    assert conjugate(g, x0) == PauliOperator({(0,): (0, 1), (1,): (1, 0)})
    assert conjugate(g, PauliOperator.single((0,), "Z")) == PauliOperator({(1,): (0, 1)})
    assert conjugate(g, PauliOperator.single((1,), "X")) == PauliOperator({(0,): (0, 1)})
    assert conjugate(g, PauliOperator.single((1,), "Z")) == PauliOperator(
        {(0,): (1, 0), (1,): (0, 1)}
    )


def test_identity_gate_conjugation():
    g = identity_gate(3)
    rng = np.random.default_rng(0)
    for _ in range(20):
        p = random_hermitian_pauli(rng, 3)
        assert conjugate(g, p) == p


def test_conjugate_matches_dense_oracle():
    rng = np.random.default_rng(1)
    sites = [(0,), (1,)]
    for trial in range(25):
        g = random_clifford(2, rng)
        U = gate_unitary(g)
        for _ in range(4):
            p = random_hermitian_pauli(rng, 2)
            got = conjugate(g, p).to_dense(sites)
            want = conjugate_dense(U, p, sites)
            assert np.allclose(got, want, atol=1e-8), f"trial {trial}"


def test_conjugate_rejects_support_outside_domain():
    g = identity_gate(2)
    p = PauliOperator.single((5,), "X")
    with pytest.raises(ValueError):
        conjugate(g, p)


def test_compose_inverse_identity():
    rng = np.random.default_rng(2)
    for _ in range(20):
        g = random_clifford(3, rng)
        assert compose(g, inverse(g)) == identity_gate(3)
        assert compose(inverse(g), g) == identity_gate(3)
        assert compose(identity_gate(3), g) == g
        assert inverse(inverse(g)) == g


def test_compose_matches_two_step_conjugation():
    rng = np.random.default_rng(3)
    for _ in range(200):
        g1 = random_clifford(2, rng)
        g2 = random_clifford(2, rng)
        p = random_hermitian_pauli(rng, 2)
        assert conjugate(compose(g2, g1), p) == conjugate(g2, conjugate(g1, p))


def test_compose_size_mismatch():
    with pytest.raises(ValueError):
        compose(identity_gate(2), identity_gate(3))


def test_inverse_matches_linear_solve():
    # s^-1 = J s^T J should invert the coordinate action computed by brute force
    rng = np.random.default_rng(4)
    for _ in range(20):
        g = random_clifford(3, rng)
        s = g.s_dense.astype(np.int64)
        s_inv = inverse(g).s_dense.astype(np.int64)
        brute = np.round(np.linalg.inv(s) * np.linalg.det(s)).astype(np.int64) % 2
        assert np.array_equal((s @ s_inv) % 2, np.eye(6, dtype=np.int64))
        assert np.array_equal(s_inv, brute % 2)


def test_symplecticity_enforced_on_construction():
    bad = np.eye(4, dtype=np.uint8)
    bad[0, 1] = 1  # breaks s^T J s = J
    bad[1, 0] = 1
    with pytest.raises(ValueError):
        CliffordGate(bad, np.zeros(4))


def test_from_pauli_images_rejects_duplicates():
    x = PauliOperator.single((0,), "X")
    with pytest.raises(ValueError):
        from_pauli_images([(x, x)])


def test_from_pauli_images_rejects_non_hermitian():
    x = PauliOperator.single((0,), "X", phase_exp=1)
    z = PauliOperator.single((0,), "Z")
    with pytest.raises(ValueError):
        from_pauli_images([(x, z)])


def test_generators_as_images_gives_identity():
    x = PauliOperator.single((0,), "X")
    z = PauliOperator.single((0,), "Z")
    assert from_pauli_images([(x, z)]) == identity_gate(1)


def test_sampled_gates_are_symplectic_and_hermitian():
    rng = np.random.default_rng(5)
    J2 = symplectic_form(2).astype(np.int64)
    J4 = symplectic_form(4).astype(np.int64)
    for n, J in ((2, J2), (4, J4)):
        for _ in range(50):
            g = random_clifford(n, rng)
            s = g.s_dense.astype(np.int64)
            assert np.array_equal((s.T @ J @ s) % 2, J)


def test_conjugation_preserves_commutation():
    rng = np.random.default_rng(6)
    for _ in range(60):
        g = random_clifford(3, rng)
        p = random_hermitian_pauli(rng, 3)
        q = random_hermitian_pauli(rng, 3)
        assert commutes(p, q) == commutes(conjugate(g, p), conjugate(g, q))


def test_sampler_determinism():
    spec = CliffordEnsembleSpec(n=4, seed=123)
    a = sample_uniform(spec, count=5)
    b = sample_uniform(spec, count=5)
    assert a == b


def test_transvection_pair_maps_x_to_y():
    rng = np.random.default_rng(7)
    for n in (1, 2, 3, 4):
        mask = sum(1 << (2 * i) for i in range(n))
        for _ in range(300):
            x = int(rng.integers(1, 1 << (2 * n)))
            y = int(rng.integers(1, 1 << (2 * n)))
            h1, h2 = _find_transvection(x, y, n, mask)
            got = _transvect(h1, _transvect(h2, x, mask), mask)
            assert got == y


def test_single_qubit_cliffords_uniform():
    # 24 elements modulo phase; chi^2 over 24 * 10^4 draws
    rng = np.random.default_rng(8)
    counts = {}
    draws = 24 * 10**4
    for _ in range(draws):
        g = random_clifford(1, rng)
        key = (g.s_dense.tobytes(), g.phase_exponents.tobytes())
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 24
    _, p = scipy.stats.chisquare(list(counts.values()))
    assert p > 0.01


def test_two_qubit_image_patterns_uniform():
    # conjugating a fixed X (x) 1: image coordinates uniform over the 15
    # non-identity two-site letter patterns
    rng = np.random.default_rng(9)
    draws = 150000
    counts = np.zeros(16, dtype=np.int64)
    for _ in range(draws):
        g = random_clifford(2, rng)
        col = g.s_dense[:, 0]
        key = col[0] | (col[2] << 1) | (col[1] << 2) | (col[3] << 3)
        counts[key] += 1
    assert counts[0] == 0
    _, p = scipy.stats.chisquare(counts[1:])
    assert p > 0.01


def test_four_qubit_image_patterns_uniform():
    # image letters of a fixed non-identity Pauli are uniform over the
    # 4^4 - 1 = 255 non-identity patterns (the full acceptance run uses 1e6
    # draws against the support-pattern table; this checks the letter level)
    rng = np.random.default_rng(11)
    draws = 120000
    counts = np.zeros(256, dtype=np.int64)
    for _ in range(draws):
        g = random_clifford(4, rng)
        col = g.s_dense[:, 0]
        key = 0
        for i in range(4):
            key |= (col[i] | (col[4 + i] << 1)) << (2 * i)
        counts[key] += 1
    assert counts[0] == 0
    _, p = scipy.stats.chisquare(counts[1:])
    assert p > 0.01


def test_two_qubit_group_size():
    # |C_2| = 11520 modulo phase = 720 symplectics x 16 sign patterns
    rng = np.random.default_rng(10)
    symp = set()
    full = set()
    for _ in range(400000):
        g = random_clifford(2, rng)
        symp.add(g.s_dense.tobytes())
        full.add((g.s_dense.tobytes(), g.phase_exponents.tobytes()))
    assert len(symp) == 720
    assert len(full) == 11520


def test_fixture_roundtrip():
    g = paper_example_gate()
    text = g.render_fixture()
    lines = text.splitlines()
    assert lines[0] == "2"
    assert len(lines) == 5
