"""Harmonic-sum operators: calculus identities against pointwise evaluation."""

import math

import numpy as np
import pytest

from slowheat import (DomainError, FourierOperator, OperatorSum, chain,
                      fourier_commutator, local_norm, matrix_on_sites,
                      pauli_op, power_law_ising, uniform_field)

from _oracles import commutator_mat, op_matrix


def _driven(n=3, alpha=2.0, g=0.4, omega=5.0):
    lat = chain(n)
    H0 = power_law_ising(lat, alpha)
    return FourierOperator.constant(omega, H0) + FourierOperator.cosine(
        omega, uniform_field(lat), g), H0, lat


def _dense(op, n):
    return matrix_on_sites(op, list(range(n)))


def test_cosine_evaluates_to_scaled_cos():
    op = pauli_op("X", 0) + pauli_op("Z", 1)
    F = FourierOperator.cosine(3.0, op, amplitude=0.7)
    for t in (0.0, 0.3, 1.1):
        want = (0.7 * math.cos(3.0 * t)) * op
        assert F.evaluate_at(t).allclose(want, 1e-12)


def test_constant_plus_cosine_pointwise():
    H, H0, lat = _driven()
    n = lat.n_sites
    for t in (0.0, 0.17, 0.9):
        want = _dense(H0, n) + 0.4 * math.cos(5.0 * t) * _dense(
            uniform_field(lat), n)
        got = _dense(H.evaluate_at(t), n)
        assert np.abs(got - want).max() < 1e-12


def test_time_average_is_zero_harmonic():
    H, H0, _ = _driven()
    assert H.time_average().allclose(H0, 1e-12)
    assert FourierOperator.cosine(2.0, pauli_op("X", 0)).time_average().n_terms == 0


def test_derivative_matches_finite_difference():
    H, _, lat = _driven()
    n, t, h = lat.n_sites, 0.37, 1e-6
    fd = (_dense(H.evaluate_at(t + h), n) - _dense(H.evaluate_at(t - h), n)) / (2 * h)
    got = _dense(H.derivative().evaluate_at(t), n)
    assert np.abs(got - fd).max() < 1e-4


def test_antiderivative_starts_at_zero_and_differentiates_back():
    g, omega = 0.4, 5.0
    V = FourierOperator.cosine(omega, pauli_op("X", 0), g)
    F = V.antiderivative_zero_start()
    assert F.evaluate_at(0.0).norm_upper() < 1e-14
    # closed form (g/omega) sin(omega t) X_0
    for t in (0.2, 1.3):
        want = (g / omega) * math.sin(omega * t) * pauli_op("X", 0)
        assert F.evaluate_at(t).allclose(want, 1e-12)
    assert F.derivative().allclose(V, 1e-12)


def test_antiderivative_rejects_nonzero_mean():
    H = FourierOperator.constant(2.0, pauli_op("Z", 0))
    with pytest.raises(DomainError):
        H.antiderivative_zero_start()


def test_commutator_agrees_pointwise():
    H, _, lat = _driven()
    n = lat.n_sites
    B = FourierOperator.cosine(5.0, pauli_op("Y", 1), 0.3) + FourierOperator.constant(
        5.0, pauli_op("Z", 2))
    C = fourier_commutator(H, B)
    assert C.max_harmonic == 2
    for t in (0.0, 0.41, 2.2):
        want = commutator_mat(_dense(H.evaluate_at(t), n), _dense(B.evaluate_at(t), n))
        got = _dense(C.evaluate_at(t), n)
        assert np.abs(got - want).max() < 1e-12


def test_envelope_dominates_local_norm_at_all_times():
    H, _, _ = _driven()
    env = H.local_norm_envelope()
    for t in np.linspace(0.0, H.period, 13):
        assert local_norm(H.evaluate_at(float(t))) <= env + 1e-12


def test_hermiticity_checks():
    H, _, _ = _driven()
    assert H.is_hermitian()
    assert not H.is_anti_hermitian()
    A = 1j * H
    assert A.is_anti_hermitian()
    assert not A.is_hermitian()
    assert H.dagger().allclose(H)


def test_algebra_matches_dense():
    H, _, lat = _driven()
    n = lat.n_sites
    B = FourierOperator.cosine(5.0, pauli_op("Y", 0), 0.3)
    for t in (0.11, 0.77):
        lhs = _dense((H - 2.0 * B).evaluate_at(t), n)
        rhs = _dense(H.evaluate_at(t), n) - 2.0 * _dense(B.evaluate_at(t), n)
        assert np.abs(lhs - rhs).max() < 1e-12


def test_frequency_mismatch_rejected():
    A = FourierOperator.constant(2.0, pauli_op("X", 0))
    B = FourierOperator.constant(3.0, pauli_op("X", 0))
    with pytest.raises(DomainError):
        A + B
    with pytest.raises(DomainError):
        fourier_commutator(A, B)


def test_nonpositive_frequency_rejected():
    with pytest.raises(DomainError):
        FourierOperator.constant(0.0, pauli_op("X", 0))


def test_zero_harmonics_are_dropped():
    F = FourierOperator(2.0, {0: OperatorSum.zero(), 1: pauli_op("X", 0)})
    assert set(F.harmonics) == {1}
    assert F.max_harmonic == 1
