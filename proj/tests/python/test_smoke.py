import math

import numpy as np
import pytest

import gradfit as gf


def test_w_state_and_evolution():
    geom = gf.ChainGeometry(4, 1.0)
    w = gf.w_state(geom)
    assert np.allclose(w.amps, 0.5)

    params = gf.ProbeParams()
    field = gf.FieldProfile([0.0, math.pi / 2, 0.0, 0.0])
    evolved = gf.evolve(w, field, params)
    assert abs(evolved.amps[1] + 0.5) < 1e-12
    assert abs(evolved.norm() - 1.0) < 1e-12


def test_distributions_match_closed_forms():
    params = gf.ProbeParams()
    geom = gf.ChainGeometry(6, 1.0)
    g = 0.23
    state = gf.evolve(gf.w_state(geom), gf.linear_field(geom, 0.0, g), params)
    oracle = gf.outcome_distribution(state, gf.fourier_basis(6)).probs
    closed = gf.prob_a_linear(6, params, 1.0, g).probs
    assert np.max(np.abs(oracle - closed)) < 1e-12


def test_qfi_matrix_value():
    params = gf.ProbeParams()
    qfi = gf.qfi_matrix_w(3, params).entries
    expected = 16.0 / 9.0 * np.array([[2.0, -1.0], [-1.0, 2.0]])
    assert np.allclose(qfi, expected, atol=1e-14)
    prod = qfi @ gf.qfi_matrix_w_inverse(3, params)
    assert np.allclose(prod, np.eye(2), atol=1e-12)


def test_state_qfi_values():
    params = gf.ProbeParams()
    geom = gf.ChainGeometry(4, 1.0)
    gens = [gf.gradient_generator(geom, params)]
    assert gf.qfi_pure_diagonal(gf.ghz_state(4), gens).entries[0, 0] == pytest.approx(144.0)
    assert gf.qfi_pure_diagonal(gf.noon_state(4), gens).entries[0, 0] == pytest.approx(64.0)
    assert gf.qfi_single_w(4, params, 1.0) == pytest.approx(4 * 15 / 3)


def test_crb_value():
    params = gf.ProbeParams()
    assert gf.crb_gradient(3, params, 1.0, 1) == pytest.approx(0.306186, abs=1e-6)


def test_mle_recovers_noiseless_field():
    params = gf.ProbeParams()
    geom = gf.ChainGeometry(8, 1.0)
    field = gf.linear_field(geom, 0.0, 0.05)
    state = gf.evolve(gf.w_state(geom), field, params)
    probs = gf.outcome_distribution(state, gf.cascade_basis(8)).probs
    est = gf.mle_fields_cascade_weighted(list(probs), geom, params)
    assert est.converged
    assert est.g_hat == pytest.approx(0.05, rel=1e-6)


def test_small_ensemble_runs():
    params = gf.ProbeParams()
    geom = gf.ChainGeometry(4, 1.0)
    config = gf.TrialConfig(geom, params, gf.linear_field(geom, 0.0, 0.05), 2000, 11)
    stats = gf.run_ensemble(config, 10)
    assert stats.repeats == 10
    assert stats.std_g >= 0.0
    assert math.isfinite(stats.ratio_to_crb)


def test_sampling_is_seeded():
    params = gf.ProbeParams()
    dist = gf.prob_b_linear(5, params, 1.0, 0.1)
    a = gf.sample_counts(dist, 1000, 42)
    b = gf.sample_counts(dist, 1000, 42)
    assert a.counts == b.counts
    assert sum(a.counts) == 1000
