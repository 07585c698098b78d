"""Binned response: analytic oracles, symmetries, suppression bounds."""

import math

import numpy as np
import pytest

from slowheat import (DomainError, OperatorSum, ResponseConfig, chain,
                      gaussian_smear_check, kappa_analytic,
                      lattice_constants, pair_bound_table, pauli_op,
                      per_pair_exponential_bound, power_law_ising,
                      response_binned, smeared_response,
                      smeared_response_quadrature, spatial_envelope,
                      params_from_lattice, total_rate_bound)


def _three_site(beta=1.0, lo=-4.1, hi=4.1, n=12):
    H0 = power_law_ising(chain(3), 2.0)
    cfg = ResponseConfig(beta=beta,
                         observables=tuple(pauli_op("X", i) for i in range(3)),
                         bin_edges=tuple(np.linspace(lo, hi, n + 1)))
    return H0, cfg, response_binned(H0, cfg, sites=(0, 1, 2))


def test_two_level_value_is_pi_tanh_beta():
    cfg = ResponseConfig(beta=1.0, observables=(pauli_op("X", 0),),
                         bin_edges=(1.5, 2.5))
    result = response_binned(pauli_op("Z", 0), cfg)
    assert abs(result.sigma[0, 0, 0] - math.pi * math.tanh(1.0)) < 1e-12
    assert abs(result.sigma_at(0, 0, 2.0) - math.pi * math.tanh(1.0)) < 1e-12


def test_sigma_is_symmetric_and_antisymmetric_in_frequency():
    _, cfg, result = _three_site()
    n = cfg.n_bins
    assert np.abs(result.sigma - result.sigma.transpose(0, 2, 1)).max() < 1e-14
    for b in range(n):
        assert np.abs(result.sigma[b] + result.sigma[n - 1 - b]).max() < 1e-12


def test_diagonal_nonnegative_at_positive_frequency():
    _, cfg, result = _three_site()
    for b in range(cfg.n_bins):
        if cfg.bin_edges[b] < 0:
            continue
        for i in range(3):
            assert result.sigma[b, i, i] >= -1e-14


def test_per_bin_cauchy_schwarz():
    _, cfg, result = _three_site()
    for b in range(cfg.n_bins):
        if cfg.bin_edges[b] < 0:
            continue
        for i in range(3):
            for j in range(3):
                lhs = abs(result.sigma[b, i, j])
                rhs = math.sqrt(result.sigma[b, i, i] * result.sigma[b, j, j])
                assert lhs <= rhs + 1e-12


def test_bin_index_edge_goes_lower():
    cfg = ResponseConfig(beta=1.0, observables=(pauli_op("X", 0),),
                         bin_edges=(0.0, 1.0, 2.0, 3.0))
    result = response_binned(pauli_op("Z", 0), cfg)
    assert result.bin_index(0.5) == 0
    assert result.bin_index(1.0) == 0
    assert result.bin_index(2.0) == 1
    assert result.bin_index(3.0) == 2
    with pytest.raises(DomainError):
        result.bin_index(0.0)
    with pytest.raises(DomainError):
        result.bin_index(3.2)


def test_config_validation():
    X0 = pauli_op("X", 0)
    with pytest.raises(DomainError):
        ResponseConfig(beta=-0.1, observables=(X0,), bin_edges=(0.0, 1.0))
    with pytest.raises(DomainError):
        ResponseConfig(beta=1.0, observables=(), bin_edges=(0.0, 1.0))
    with pytest.raises(DomainError):
        ResponseConfig(beta=1.0, observables=(1j * X0,), bin_edges=(0.0, 1.0))
    with pytest.raises(DomainError):
        ResponseConfig(beta=1.0, observables=(X0,), bin_edges=(0.0,))
    with pytest.raises(DomainError):
        ResponseConfig(beta=1.0, observables=(X0,), bin_edges=(0.0, 1.0, 0.5))
    with pytest.raises(DomainError):
        ResponseConfig(beta=1.0, observables=(X0,), bin_edges=(0.0, 1.0, 3.0))
    with pytest.raises(DomainError):
        ResponseConfig(beta=1.0, observables=(X0,), bin_edges=(0.0, 1.0),
                       obs_sites=(0, 1))


def test_sites_inference_needs_support():
    ident = OperatorSum.from_terms([(1.0, {})])
    cfg = ResponseConfig(beta=1.0, observables=(ident,), bin_edges=(0.0, 1.0))
    with pytest.raises(DomainError):
        response_binned(ident, cfg)


def test_smeared_spectral_equals_time_quadrature():
    lat = chain(2)
    H0 = power_law_ising(lat, 2.0)
    cfg = ResponseConfig(beta=1.0,
                         observables=(pauli_op("X", 0), pauli_op("X", 1)),
                         bin_edges=tuple(np.linspace(0.0, 6.0, 7)))
    result = response_binned(H0, cfg, sites=(0, 1))
    for omega in (1.0, 2.5, 4.0):
        spec = smeared_response(result, 0, 1, omega)
        quad = smeared_response_quadrature(H0, cfg, 0, 1, omega, sites=(0, 1))
        assert abs(spec - quad) <= 1e-6 * max(1.0, abs(spec))


def test_gaussian_smear_check_on_real_system():
    _, cfg, result = _three_site(lo=0.0, hi=6.0, n=6)
    saw_applicable = False
    for b in range(cfg.n_bins):
        chk = gaussian_smear_check(result, 0, b)
        assert chk.passes, (b, chk)
        saw_applicable = saw_applicable or chk.applicable
        assert chk.applicable == (cfg.bin_edges[b] >= 2.0 * cfg.delta_omega)
    assert saw_applicable


def test_spatial_envelope_dominates_smeared():
    lat = chain(4)
    H0 = power_law_ising(lat, 3.0)
    cfg = ResponseConfig(beta=1.0,
                         observables=(pauli_op("X", 0), pauli_op("X", 3)),
                         bin_edges=tuple(np.linspace(0.0, 6.0, 7)))
    result = response_binned(H0, cfg, sites=tuple(range(4)))
    params = params_from_lattice("hk", lat, 3.0)
    env = spatial_envelope(params, 1.0, 1.0, 3.0, cfg.delta_t)
    for omega in (0.5, 2.0, 4.5):
        assert abs(smeared_response(result, 0, 1, omega)) <= env + 1e-12


def test_pair_bound_frozen_single_spin():
    # H = Z, O = X: ad norms 1, 2, 4, so at omega = 4 the grid minimum
    # is (4 / 16)^2 = 1/16
    pb = per_pair_exponential_bound(pauli_op("Z", 0), pauli_op("X", 0), 4.0,
                                    (0, 1, 2), lam=5.0)
    assert pb.ad_norms == (1.0, 2.0, 4.0)
    assert abs(pb.min_entry - 1.0 / 16.0) < 1e-14
    assert abs(pb.bound - math.pi / 16.0) < 1e-13
    assert abs(pb.prefactor - 1.0) < 1e-14
    assert abs(pb.kappa - 2.0 / (5.0 * math.e)) < 1e-15
    # dense route agrees with the exact Pauli-algebra route
    pb2 = per_pair_exponential_bound(pauli_op("Z", 0), pauli_op("X", 0), 4.0,
                                     (0, 1, 2), lam=5.0, sites=(0,))
    assert np.allclose(pb2.ad_norms, pb.ad_norms, atol=1e-12)


def test_pair_bound_argument_checks():
    Z0, X0 = pauli_op("Z", 0), pauli_op("X", 0)
    with pytest.raises(DomainError):
        per_pair_exponential_bound(Z0, X0, 0.0, (0, 1), lam=1.0)
    with pytest.raises(DomainError):
        per_pair_exponential_bound(Z0, X0, 1.0, (), lam=1.0)
    with pytest.raises(DomainError):
        per_pair_exponential_bound(Z0, X0, 1.0, (-1, 0), lam=1.0)
    with pytest.raises(DomainError):
        per_pair_exponential_bound(Z0, X0, 1.0, (0, 1), lam=0.0)
    with pytest.raises(DomainError):
        kappa_analytic(0.0)


def test_pair_bound_table_dominates_sigma():
    lat = chain(3)
    alpha = 3.0
    H0 = power_law_ising(lat, alpha)
    cfg = ResponseConfig(beta=1.0,
                         observables=tuple(pauli_op("X", i) for i in range(3)),
                         bin_edges=tuple(np.linspace(-2.0, 12.0, 8)))
    result = response_binned(H0, cfg, sites=(0, 1, 2))
    lam = lattice_constants(lat, alpha).lam
    table = pair_bound_table(H0, cfg, (0, 1, 2, 3), lam, sites=(0, 1, 2))
    assert table.shape == result.sigma.shape
    assert np.all(np.abs(result.sigma) <= table + 1e-10)
    # nonpositive lower edges are not covered by the bound
    assert np.isinf(table[0]).all()
    # off-diagonal entries are the mean of the diagonals
    for b in range(cfg.n_bins):
        want = 0.5 * (table[b, 0, 0] + table[b, 2, 2])
        if math.isinf(want):
            assert math.isinf(table[b, 0, 2])
        else:
            assert abs(table[b, 0, 2] - want) < 1e-12


def test_total_rate_balanced_terms():
    tr = total_rate_bound(N=10, alpha=3.0, D=1, kappa=0.5, omega=6.0)
    assert abs(tr.r_star - math.exp(0.5 * 6.0 / 3.0)) < 1e-12
    assert abs(tr.spatial_term - tr.value) < 1e-12 * tr.value
    assert abs(tr.energetic_term - tr.value) < 1e-12 * tr.value
    want = 10 * math.exp(-(1 - 1 / 3.0) * 0.5 * 6.0)
    assert abs(tr.value - want) < 1e-12 * want
    with pytest.raises(DomainError):
        total_rate_bound(N=10, alpha=1.0, D=1, kappa=0.5, omega=6.0)
    with pytest.raises(DomainError):
        total_rate_bound(N=0, alpha=3.0, D=1, kappa=0.5, omega=6.0)
