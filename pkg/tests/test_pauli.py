"""Pauli-string algebra against literal Kronecker-product references."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slowheat import (DomainError, OperatorSum, PowerLawSpec,
                      ResourceLimitError, X, Y, Z, adjoint_power, chain,
                      commutator, local_norm, matrix_on_sites, operator_norm,
                      pauli_op, power_law_ising, powerlaw_certificate)

from _oracles import commutator_mat, op_matrix, spectral_norm

LETTERS = "XYZ"


def _random_terms(rng, n_sites, n_terms):
    terms = []
    for _ in range(n_terms):
        support = rng.choice(n_sites, size=rng.integers(1, 3), replace=False)
        sl = {int(s): LETTERS[rng.integers(3)] for s in support}
        coeff = complex(rng.normal(), rng.normal())
        terms.append((coeff, sl))
    return terms


def test_single_pauli_matrices_match_literals():
    for letter in LETTERS:
        got = matrix_on_sites(pauli_op(letter, 0), [0])
        np.testing.assert_allclose(got, op_matrix([(1.0, {0: letter})], 1))


def test_matrix_respects_site_order_most_significant_first():
    A = pauli_op("X", 0) * pauli_op("Z", 1)
    np.testing.assert_allclose(matrix_on_sites(A, [0, 1]),
                               op_matrix([(1.0, {0: "X", 1: "Z"})], 2))


@given(seed=st.integers(0, 10_000))
@settings(deadline=None, max_examples=60)
def test_sum_and_product_match_dense(seed):
    rng = np.random.default_rng(seed)
    n = 3
    ta = _random_terms(rng, n, 3)
    tb = _random_terms(rng, n, 3)
    A = OperatorSum.from_terms(ta)
    B = OperatorSum.from_terms(tb)
    Ma, Mb = op_matrix(ta, n), op_matrix(tb, n)
    sites = list(range(n))
    np.testing.assert_allclose(matrix_on_sites(A + B, sites), Ma + Mb,
                               atol=1e-12)
    np.testing.assert_allclose(matrix_on_sites(A * B, sites), Ma @ Mb,
                               atol=1e-12)


@given(seed=st.integers(0, 10_000))
@settings(deadline=None, max_examples=60)
def test_commutator_matches_dense(seed):
    rng = np.random.default_rng(seed)
    n = 4
    ta = _random_terms(rng, n, 4)
    tb = _random_terms(rng, n, 4)
    got = matrix_on_sites(commutator(OperatorSum.from_terms(ta),
                                     OperatorSum.from_terms(tb)),
                          list(range(n)))
    want = commutator_mat(op_matrix(ta, n), op_matrix(tb, n))
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_commutator_of_onsite_paulis():
    got = commutator(X(0), Z(0))
    np.testing.assert_allclose(matrix_on_sites(got, [0]),
                               op_matrix([(-2j, {0: "Y"})], 1), atol=1e-12)
    assert commutator(X(0), X(0)).n_terms == 0
    assert commutator(X(0), Z(1)).n_terms == 0


@given(seed=st.integers(0, 10_000))
@settings(deadline=None, max_examples=40)
def test_operator_norm_matches_svd(seed):
    rng = np.random.default_rng(seed)
    n = 3
    terms = _random_terms(rng, n, 5)
    A = OperatorSum.from_terms(terms)
    assert operator_norm(A) == pytest.approx(
        spectral_norm(op_matrix(terms, n)), abs=1e-10)
    assert operator_norm(A) <= A.norm_upper() + 1e-10


def test_adjoint_power_matches_nested_dense_commutators():
    H = OperatorSum.from_terms([(1.0, {0: "Z", 1: "Z"}), (0.3, {0: "X"}),
                                (0.2, {1: "X"})])
    O = X(0)
    Hm = op_matrix([(1.0, {0: "Z", 1: "Z"}), (0.3, {0: "X"}),
                    (0.2, {1: "X"})], 2)
    Om = op_matrix([(1.0, {0: "X"})], 2)
    cur = Om
    for k in range(4):
        got = matrix_on_sites(adjoint_power(H, O, k), [0, 1])
        np.testing.assert_allclose(got, cur, atol=1e-12)
        cur = commutator_mat(Hm, cur)


def test_dagger_and_hermiticity():
    A = OperatorSum.from_terms([(1.0 + 2.0j, {0: "X", 1: "Y"})])
    assert not A.is_hermitian()
    assert (A + A.dagger()).is_hermitian()
    assert (A - A.dagger()).is_anti_hermitian()


def test_support_and_weight():
    A = OperatorSum.from_terms([(1.0, {0: "X", 3: "Z"}), (2.0, {1: "Y"})])
    assert A.support == (0, 1, 3)
    strings = {s.weight for _, s in A.terms()}
    assert strings == {1, 2}


def test_local_norm_is_per_site_budget():
    # site 0 carries |1.0| (pair) + |0.3| (field); site 2 carries only 0.25
    A = OperatorSum.from_terms([(1.0, {0: "Z", 1: "Z"}), (0.3, {0: "X"}),
                                (0.25, {2: "Z"})])
    assert local_norm(A) == pytest.approx(1.3)


def test_exact_norm_cap_enforced():
    big = OperatorSum.from_terms([(1.0, {i: "X"}) for i in range(15)])
    with pytest.raises(ResourceLimitError):
        operator_norm(big)
    assert operator_norm(big, method="upper") == pytest.approx(15.0)


def test_powerlaw_certificate_saturating_couplings():
    lat = chain(5)
    alpha = 2.0
    H = power_law_ising(lat, alpha, J=1.0, hx=0.2, hz=0.25)
    spec = PowerLawSpec(alpha=alpha, eta=1.0, k=1)
    rep = powerlaw_certificate(H, lat, spec, 1.0)
    assert rep.passes
    # J = 1 saturates every pair budget exactly
    assert rep.worst_pair[1] == pytest.approx(1.0)
    # any inflation of J breaks membership at prefactor 1
    H_bad = power_law_ising(lat, alpha, J=1.01, hx=0.2, hz=0.25)
    assert not powerlaw_certificate(H_bad, lat, spec, 1.0).passes
    assert powerlaw_certificate(H_bad, lat, spec, 1.02).passes


def test_powerlaw_certificate_counts_support_size():
    lat = chain(4)
    three_body = OperatorSum.from_terms([(0.1, {0: "Z", 1: "Z", 2: "Z"})])
    spec1 = PowerLawSpec(alpha=3.0, k=1)
    rep = powerlaw_certificate(three_body, lat, spec1, 10.0)
    assert not rep.passes
    spec2 = PowerLawSpec(alpha=3.0, k=2)
    assert powerlaw_certificate(three_body, lat, spec2, 10.0).passes


def test_single_site_budget_checked():
    lat = chain(3)
    spec = PowerLawSpec(alpha=3.0, eta=1.0, k=1)
    strong_field = OperatorSum.from_terms([(1.5, {0: "X"})])
    assert not powerlaw_certificate(strong_field, lat, spec, 1.0).passes
    assert powerlaw_certificate(strong_field, lat, spec, 1.5).passes


def test_group_norm_is_exact_not_triangle():
    # X + Z on one site has norm sqrt(2), below the coefficient sum 2
    lat = chain(2)
    H = OperatorSum.from_terms([(1.0, {0: "X"}), (1.0, {0: "Z"})])
    spec = PowerLawSpec(alpha=3.0, eta=1.0, k=1)
    rep = powerlaw_certificate(H, lat, spec, 1.0)
    assert rep.worst_single[1] == pytest.approx(np.sqrt(2.0))


def test_operator_equality_after_merge():
    A = X(0) + Z(1)
    B = Z(1) + X(0)
    assert A == B
    assert (A - B).n_terms == 0


def test_y_phase_convention():
    np.testing.assert_allclose(matrix_on_sites(Y(0), [0]),
                               np.array([[0, -1j], [1j, 0]]))
