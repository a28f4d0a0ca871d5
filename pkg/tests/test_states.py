import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discord_eur.correlations import conditional_entropy
from discord_eur.states import (
    DensityOperator,
    InvalidStateError,
    antisymmetric_projector,
    classical_quantum,
    from_ket,
    isotropic,
    load_state,
    maximally_entangled,
    maximally_mixed,
    product,
    purify,
    random_density,
    random_pure,
    random_unitary,
    save_state,
    singlet_ket,
    state_from_json,
    state_to_json,
    swap_operator,
    werner_general,
    werner_lambda_from_p,
    werner_main,
)

import oracles

seeds = st.integers(0, 2**31 - 1)
unit = st.floats(0.0, 1.0)


def _is_valid(rho: DensityOperator):
    m = rho.matrix
    assert np.allclose(m, m.conj().T, atol=1e-10)
    assert np.trace(m).real == pytest.approx(1, abs=1e-9)
    assert np.linalg.eigvalsh(m).min() >= -1e-10
    assert int(np.prod(rho.dims)) == m.shape[0]


def test_density_operator_rejects_invalid():
    with pytest.raises(InvalidStateError):
        DensityOperator(np.array([[1, 1], [0, 0]]), (2,))
    with pytest.raises(InvalidStateError):
        DensityOperator(np.eye(2), (2,))
    with pytest.raises(InvalidStateError):
        DensityOperator(np.diag([1.5, -0.5]), (2,))
    with pytest.raises(InvalidStateError):
        DensityOperator(np.eye(4) / 4, (2, 3))
    with pytest.raises(ValueError):
        werner_main(1.2)
    with pytest.raises(ValueError):
        isotropic(1, 0.5)


def test_matrix_is_read_only():
    rho = maximally_mixed([2])
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_werner_main_examples():
    assert np.allclose(werner_main(0).matrix, np.eye(4) / 4)
    s = singlet_ket()
    assert np.allclose(s, np.array([0, 1, -1, 0]) / np.sqrt(2))
    assert np.allclose(werner_main(1).matrix, np.outer(s, s))
    assert np.allclose(np.sort(np.linalg.eigvalsh(werner_main(0.5).matrix)), [0.125] * 3 + [0.625])


def test_werner_general_examples():
    s = singlet_ket()
    assert np.allclose(werner_general(2, 1).matrix, np.outer(s, s))
    for p in np.linspace(0, 1, 11):
        assert np.allclose(werner_general(2, werner_lambda_from_p(p)).matrix, werner_main(p).matrix, atol=1e-12)
    for d in (2, 3, 4):
        rho = werner_general(d, 0.37)
        assert np.allclose(rho.marginal(0).matrix, np.eye(d) / d)
        assert np.allclose(rho.marginal(1).matrix, np.eye(d) / d)


def test_swap_and_projectors():
    d = 3
    a = random_density([d], 1).matrix
    b = random_density([d], 2).matrix
    f = swap_operator(d)
    assert np.allclose(f @ np.kron(a, b) @ f, np.kron(b, a))
    assert np.trace(antisymmetric_projector(d)).real == pytest.approx(d * (d - 1) / 2)


def test_werner_fully_mixed_point():
    for d in (2, 3, 4, 5):
        assert np.allclose(werner_general(d, (d - 1) / (2 * d)).matrix, np.eye(d * d) / d**2)


def test_isotropic_examples():
    for d in (2, 3):
        assert np.allclose(isotropic(d, 1).matrix, maximally_entangled(d).matrix)
        assert np.allclose(isotropic(d, 1 / d**2).matrix, np.eye(d * d) / d**2)
        lam = 0.42
        expected = (-lam * np.log2(lam) - (1 - lam) * np.log2((1 - lam) / (d * d - 1)) - np.log2(d))
        assert conditional_entropy(isotropic(d, lam)) == pytest.approx(expected, abs=1e-12)


def test_werner_conditional_entropy_formula():
    d, lam = 3, 0.6
    expected = (-lam * np.log2(2 * lam / (d * (d - 1)))
                - (1 - lam) * np.log2(2 * (1 - lam) / (d * (d + 1))) - np.log2(d))
    assert conditional_entropy(werner_general(d, lam)) == pytest.approx(expected, abs=1e-12)


def test_maximally_entangled_examples():
    phi = np.zeros(4)
    phi[[0, 3]] = 1 / np.sqrt(2)
    assert np.allclose(maximally_entangled(2).matrix, np.outer(phi, phi))
    for d in (2, 3, 4):
        rho = maximally_entangled(d)
        assert rho.is_pure()
        assert conditional_entropy(rho) == pytest.approx(-np.log2(d), abs=1e-12)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("lam", [0.0, 0.3, 0.8, 1.0])
def test_family_invariance(d, lam):
    for seed in range(5):
        u = random_unitary(d, seed)
        w = werner_general(d, lam).matrix
        uu = np.kron(u, u)
        assert np.allclose(uu @ w @ uu.conj().T, w, atol=1e-9)
        iso = isotropic(d, lam).matrix
        uu_star = np.kron(u, u.conj())
        assert np.allclose(uu_star @ iso @ uu_star.conj().T, iso, atol=1e-9)


def test_purify_examples():
    psi = random_pure([2, 2], 3)
    pur = purify(psi)
    assert pur.dims == (2, 2, 1)
    assert np.allclose(pur.matrix, psi.matrix, atol=1e-10)

    pm = purify(maximally_mixed([2]))
    assert pm.dims == (2, 2)
    assert pm.is_pure()
    assert np.allclose(pm.marginal(0).matrix, np.eye(2) / 2)

    w = werner_main(0.5)
    pw = purify(w)
    assert pw.dims == (2, 2, 4)
    assert np.allclose(oracles.ptrace_loops(pw.matrix, [2, 2, 4], [0, 1]), w.matrix, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([[2], [2, 2], [2, 3], [2, 2, 2]]))
def test_purify_property(seed, dims):
    rho = random_density(dims, seed)
    pur = purify(rho)
    assert pur.entropy() < 1e-9
    assert np.allclose(pur.marginal(list(range(len(dims)))).matrix, rho.matrix, atol=1e-9)


def test_random_density_examples():
    a = random_density([2, 2], 11)
    b = random_density([2, 2], 11)
    assert np.array_equal(a.matrix, b.matrix)
    assert np.trace(a.matrix).real == pytest.approx(1, abs=1e-12)
    for seed in range(1000):
        assert np.linalg.eigvalsh(random_density([2, 2], seed).matrix).min() >= -1e-12


@settings(max_examples=40, deadline=None)
@given(seeds, unit)
def test_constructors_produce_valid_states(seed, lam):
    for rho in (werner_main(lam), werner_general(3, lam), isotropic(3, lam), random_density([2, 3], seed),
                random_pure([2, 2, 2], seed), product(random_density([2], seed), maximally_mixed([3]))):
        _is_valid(rho)


def test_classical_quantum_state():
    rho = classical_quantum([0.25, 0.75], [random_density([2], 1), random_density([2], 2)])
    _is_valid(rho)
    assert rho.dims == (2, 2)
    assert np.allclose(rho.marginal(0).matrix, np.diag([0.25, 0.75]))


def test_regroup_merges_and_orders():
    rho = random_density([2, 3, 2], 5)
    g = rho.regroup([[0], [2, 1]])
    assert g.dims == (2, 6)
    assert np.allclose(g.matrix, rho.permute([0, 2, 1]).matrix)
    bc = rho.regroup([[1, 2]])
    assert np.allclose(bc.matrix, rho.marginal([1, 2]).matrix)


def test_json_round_trip_and_rejection(tmp_path):
    rho = random_density([2, 3], 9)
    path = tmp_path / "s.json"
    save_state(rho, path)
    back = load_state(path)
    assert back.dims == (2, 3)
    assert np.allclose(back.matrix, rho.matrix, atol=1e-15)
    obj = state_to_json(rho)
    obj["re"][0][1] += 0.1
    with pytest.raises(InvalidStateError):
        state_from_json(obj)
    bad_trace = {"dims": [2], "re": [[1, 0], [0, 1]]}
    with pytest.raises(InvalidStateError):
        state_from_json(bad_trace)
    with pytest.raises(ValueError):
        state_from_json({"re": [[1]]})
    path.write_text(json.dumps({"dims": [2], "re": [[1, 0], [0, 0]]}))
    assert load_state(path).is_pure()


def test_from_ket_normalizes():
    rho = from_ket([1, 1], [2])
    assert np.allclose(rho.matrix, np.full((2, 2), 0.5))
