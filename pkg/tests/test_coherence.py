import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import fidelity_oracle
from geocoh import sampling
from geocoh.coherence import (bounds, c_l1, closest_incoherent_state,
                              detect_generalized_x, duality_check,
                              geometric_coherence, qubit_coherence,
                              solver_measurement_space, solver_state_space)
from geocoh.discrimination import VonNeumannMeasurement
from geocoh.errors import DependentEnsemble
from geocoh.linalg import fidelity

seeds = st.integers(0, 2**32 - 1)
PLUS = 0.5 * np.ones((2, 2), dtype=complex)
H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def x_state_example():
    rho = np.diag([0.3, 0.2, 0.2, 0.3]).astype(complex)
    rho[0, 3] = rho[3, 0] = 0.2
    rho[1, 2] = rho[2, 1] = 0.1
    return rho


def test_c_l1_examples():
    assert c_l1(np.diag([0.3, 0.7])) == 0
    assert c_l1(PLUS) == pytest.approx(1)
    c = np.cos(0.6)
    assert c_l1(0.5 * np.array([[1, c], [c, 1]])) == pytest.approx(abs(c))


def test_detect_generalized_x():
    assert detect_generalized_x(sampling.rand_density_matrix(np.random.default_rng(0), 2)).pairing == (1, 0)
    s = detect_generalized_x(x_state_example())
    assert sorted(s.blocks) == [(0, 3), (1, 2)]
    assert detect_generalized_x(sampling.rand_density_matrix(np.random.default_rng(1), 3)) is None


def test_geometric_coherence_examples():
    rep = geometric_coherence(PLUS)
    assert rep.c_g == pytest.approx(0.5, abs=1e-15)
    assert rep.method_tag == "qubit_closed_form"
    np.testing.assert_allclose(rep.cis, np.eye(2) / 2, atol=1e-12)
    rho = np.diag([0.2, 0.5, 0.3]).astype(complex)
    rep = geometric_coherence(rho)
    assert rep.c_g == pytest.approx(0, abs=1e-15)
    np.testing.assert_allclose(rep.cis, rho, atol=1e-15)


def test_x_state_example_value():
    rho = x_state_example()
    expected = 1 - 0.5 * ((0.6 + np.sqrt(0.36 - 0.16)) + (0.4 + np.sqrt(0.16 - 0.04)))
    rep = geometric_coherence(rho)
    assert rep.method_tag == "x_block"
    assert rep.c_g == pytest.approx(expected, abs=1e-14)
    assert abs(geometric_coherence(rho, method="numerical").c_g - expected) < 1e-6
    assert abs((1 - fidelity_oracle(rho)) - expected) < 1e-6
    # the unnormalised per-pair variant with a unit inside the root disagrees
    wrong = 1 - 0.25 * (2 * 0.6 * (1 + np.sqrt(1 - 0.04)) + 2 * 0.4 * (1 + np.sqrt(1 - 0.01)))
    assert abs(wrong - expected) > 0.05


@given(seeds, st.integers(2, 6))
@settings(max_examples=25, deadline=None)
def test_x_block_matches_numerical(seed, d):
    rho = sampling.rand_generalized_x(np.random.default_rng(seed), d)
    fast = geometric_coherence(rho)
    assert fast.method_tag in ("x_block", "qubit_closed_form")
    assert abs(fast.c_g - geometric_coherence(rho, method="numerical").c_g) < 1e-6


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_qubit_numerical_matches_closed_form(seed):
    rho = sampling.rand_density_matrix(np.random.default_rng(seed), 2)
    assert abs(geometric_coherence(rho, method="numerical").c_g - qubit_coherence(rho)) < 1e-7
    assert abs(1 - solver_state_space(rho).fidelity - qubit_coherence(rho)) < 1e-7


def test_solver_examples():
    rho = np.diag([0.6, 0.4]).astype(complex)
    res = solver_state_space(rho)
    assert res.fidelity == pytest.approx(1)
    np.testing.assert_allclose(res.weights, [0.6, 0.4], atol=1e-9)
    assert solver_measurement_space(rho).fidelity == pytest.approx(1)
    res = solver_state_space(PLUS)
    assert res.fidelity == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(res.weights, [0.5, 0.5], atol=1e-9)


@given(seeds, st.integers(3, 5))
@settings(max_examples=15, deadline=None)
def test_solvers_agree_with_oracle(seed, d):
    rho = sampling.rand_density_matrix(np.random.default_rng(seed), d)
    ms = solver_measurement_space(rho).fidelity
    ss = solver_state_space(rho).fidelity
    assert abs(ms - ss) < 1e-6
    assert abs(ms - fidelity_oracle(rho)) < 1e-6


def test_cis_examples():
    rho = np.diag([0.1, 0.9]).astype(complex)
    np.testing.assert_allclose(closest_incoherent_state(rho, VonNeumannMeasurement(np.eye(2))), rho)
    np.testing.assert_allclose(closest_incoherent_state(PLUS, VonNeumannMeasurement(np.eye(2))), np.eye(2) / 2, atol=1e-14)
    # every diagonal state is equally close to |+><+|
    assert fidelity(PLUS, closest_incoherent_state(PLUS, VonNeumannMeasurement(H))) == pytest.approx(0.5)
    c = np.cos(np.pi / 4)
    rho = 0.5 * np.array([[1, c], [c, 1]], dtype=complex)
    np.testing.assert_allclose(closest_incoherent_state(rho, VonNeumannMeasurement(np.eye(2))), np.eye(2) / 2, atol=1e-14)


@given(seeds, st.integers(2, 5), st.booleans())
@settings(max_examples=30, deadline=None)
def test_cis_attains_fidelity(seed, d, low_rank):
    rng = np.random.default_rng(seed)
    rho = sampling.rand_density_matrix(rng, d, rank=1 if low_rank else None)
    rep = geometric_coherence(rho)
    sigma = rep.cis
    assert np.abs(sigma - np.diag(np.diag(sigma))).max() == 0
    assert abs(np.trace(sigma) - 1) < 1e-12 and np.diag(sigma).real.min() >= 0
    assert abs(fidelity(rho, sigma) - (1 - rep.c_g)) < 1e-6


def test_bounds_examples():
    b = bounds(np.diag([0.2, 0.5, 0.3]))
    assert b["l1"] == pytest.approx(0.5) and b["l2"] == pytest.approx(0, abs=1e-15)
    assert b["l3"] == pytest.approx(0, abs=1e-15)
    b = bounds(PLUS)
    assert b["l1"] == pytest.approx(0.5) and b["l2"] == pytest.approx(0.5) and b["l3"] == pytest.approx(0.5)
    assert "l4" not in b


@given(seeds, st.integers(2, 5))
@settings(max_examples=30, deadline=None)
def test_bound_chain(seed, d):
    rho = sampling.rand_density_matrix(np.random.default_rng(seed), d)
    rep = geometric_coherence(rho)
    b = rep.bounds
    assert rep.diagnostics["bounds_ok"]
    assert rep.c_g <= min(b["l2"], b["l3"], b["l4"]) + 1e-7
    assert b["l3"] < b["l1"]
    assert 0 <= rep.c_g <= 1 - 1 / d + 1e-12


@given(seeds, st.integers(1, 4))
@settings(max_examples=30, deadline=None)
def test_unitary_diagonal_invariance(seed, d):
    # coherence is unchanged by diagonal phases and basis permutations
    rng = np.random.default_rng(seed)
    rho = sampling.rand_density_matrix(rng, d)
    D = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, d)))[rng.permutation(d)]
    a = geometric_coherence(rho).c_g
    b = geometric_coherence(D @ rho @ D.conj().T).c_g
    assert abs(a - b) < 1e-7


def test_duality_examples():
    r = duality_check(np.diag([0.3, 0.7]))
    assert r["c_g"] == pytest.approx(0, abs=1e-12) and r["d_q"] == pytest.approx(1)
    rho = sampling.rand_density_matrix(np.random.default_rng(5), 2)
    assert abs(duality_check(rho)["sum"] - 1) < 1e-7
    rho = sampling.rand_density_matrix(np.random.default_rng(6), 4)
    assert abs(duality_check(rho)["sum"] - 1) < 1e-6
    with pytest.raises(DependentEnsemble):
        duality_check(sampling.rand_density_matrix(np.random.default_rng(7), 3, rank=2))


def test_one_dimensional_state():
    rep = geometric_coherence(np.ones((1, 1)))
    assert rep.c_g == 0
