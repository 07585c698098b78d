"""Inequality kernels: literal enumerations against the recursive sums."""

import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.integrate

from slowheat import (DomainError, adjoint_closure_check, c1_sum, chain,
                      compositions, factorial_composition_sum,
                      incomplete_gamma_tail, lattice_constants,
                      lemma_closure_suite, lemma_factorial_suite,
                      lemma_stirling_suite, lemma_tail_suite, pauli_op,
                      powerlaw_certificate, random_powerlaw, run_all_lemmas,
                      shifted_composition_sum, tail_sum, PowerLawSpec)


def _literal_comp_sum(q, k, allow_zero=False, shift=0):
    total = 0
    for comp in compositions(q, k, allow_zero):
        prod = 1
        for part in comp:
            prod *= math.factorial(part - shift)
        total += prod
    return total


@pytest.mark.parametrize("q,k", [(3, 2), (5, 3), (7, 4), (8, 1), (6, 6)])
def test_composition_sums_match_literal_enumeration(q, k):
    for zeros in (False, True):
        exact, _ = factorial_composition_sum(q, k, zeros)
        assert exact == _literal_comp_sum(q, k, zeros)
    exact, _ = shifted_composition_sum(q, k)
    assert exact == _literal_comp_sum(q, k, allow_zero=False, shift=1)


def test_frozen_small_values():
    # q = 3, k = 2: compositions (1,2) and (2,1), each product 2 -> 4 <= 3!/1!
    exact, bound = factorial_composition_sum(3, 2)
    assert (exact, bound) == (4, 6)
    # q = 2, k = 2 with zeros: (0,2),(1,1),(2,0) -> 2 + 1 + 2 = 5 <= 4 * 2
    exact, bound = factorial_composition_sum(2, 2, allow_zero=True)
    assert (exact, bound) == (5, 8)


def test_composition_domain():
    with pytest.raises(DomainError):
        factorial_composition_sum(2, 3)
    with pytest.raises(DomainError):
        shifted_composition_sum(2, 0)


def test_c1_sum_brute_force_and_limit():
    q0, c = 6, 3.0
    want = Fraction(0)
    for k in range(1, q0 + 1):
        want += (Fraction(2 ** k) * q0 ** k * math.factorial(q0 - k)
                 / (math.factorial(q0) * math.factorial(k) * Fraction(c) ** k))
    exact, bound = c1_sum(q0, c)
    assert abs(exact - float(want)) < 1e-15
    assert exact <= bound
    # q0 = 1 collapses to the single k = 1 term, 2/c
    exact, _ = c1_sum(1, 5.0)
    assert abs(exact - 2.0 / 5.0) < 1e-15
    with pytest.raises(DomainError):
        c1_sum(0, 1.0)
    with pytest.raises(DomainError):
        c1_sum(3, 0.0)


def test_tail_sum_direct_convergence_case():
    # eta = 0.9, r_* = 4: terms hit the floor within the cap, so the sum
    # is effectively direct and can be checked against a plain loop
    ts = tail_sum(4.0, 1, 0.9)
    assert not ts.truncated
    want = sum(math.exp(-r ** 0.9) for r in range(5, 5 + ts.terms_summed))
    assert abs(ts.direct - want) < 1e-15 * want
    assert ts.exact >= ts.direct
    assert ts.exact <= ts.bound


def test_tail_sum_enclosure_dominates_quadrature():
    # D = 2: remainder enclosure must sit above the true integral tail
    ts = tail_sum(2.0, 2, 0.4)
    last = 2 + ts.terms_summed  # first integer beyond the direct part
    val, err = scipy.integrate.quad(
        lambda x: x * math.exp(-x ** 0.4), last, np.inf, limit=200)
    assert ts.remainder >= val - err
    assert ts.exact <= ts.bound


def test_tail_sum_truncated_path_is_flagged():
    # eta = 0.1 pushes the mode far beyond the term cap
    ts = tail_sum(2.0, 3, 0.1)
    assert ts.truncated
    assert ts.terms_summed == 200_000
    assert math.isfinite(ts.exact)
    assert ts.exact <= ts.bound


def test_tail_sum_domain():
    with pytest.raises(DomainError):
        tail_sum(1.0, 1, 0.5)
    with pytest.raises(DomainError):
        tail_sum(2.0, 1, 1.0)
    with pytest.raises(DomainError):
        tail_sum(2.0, 0, 0.5)


def test_gamma_tail_closed_form_vs_scipy():
    import scipy.special
    for beta in (0, 1, 2, 5):
        for xs in (1.0, 3.0, 7.5):
            exact, bound = incomplete_gamma_tail(beta, xs)
            want = math.gamma(beta + 1) * float(
                scipy.special.gammaincc(beta + 1, xs))
            assert abs(exact - want) < 1e-12 * want
            assert exact <= bound


def test_gamma_tail_equality_cases_are_bitwise():
    # beta = 0 is the lemma's equality case at every x_*, and beta = 1
    # touches at x_* = 1; the shared-factor evaluation makes these exact
    for xs in (1.0, 4.0, 8.0):
        exact, bound = incomplete_gamma_tail(0, xs)
        assert exact == bound
    exact, bound = incomplete_gamma_tail(1, 1.0)
    assert exact == bound
    with pytest.raises(DomainError):
        incomplete_gamma_tail(-1, 2.0)
    with pytest.raises(DomainError):
        incomplete_gamma_tail(2, 0.5)


def test_closure_check_commutator_cases():
    lat = chain(4)
    alpha = 3.0
    # commuting inputs: certified prefactor of the zero operator is 0
    rep = adjoint_closure_check(pauli_op("Z", 0), 1.0, 1,
                                pauli_op("Z", 1), 1.0, 1, lat, alpha)
    assert rep.lhs == 0.0 and rep.passes
    # anticommuting single-site pair: [X0, Z0] = -2i Y0, single-site budget 2
    rep = adjoint_closure_check(pauli_op("X", 0), 1.0, 1,
                                pauli_op("Z", 0), 1.0, 1, lat, alpha)
    lam = lattice_constants(lat, alpha).lam
    assert rep.rhs == lam
    assert rep.lhs <= rep.rhs
    assert rep.point == (alpha, 1, 1, 4)


def test_closure_check_preconditions():
    lat = chain(4)
    with pytest.raises(DomainError):
        adjoint_closure_check(pauli_op("X", 0), 1.0, 0,
                              pauli_op("Z", 0), 1.0, 1, lat, 3.0)
    # an operator violating its own stated class is rejected up front
    with pytest.raises(DomainError):
        adjoint_closure_check(3.0 * pauli_op("X", 0), 1.0, 1,
                              pauli_op("Z", 0), 1.0, 1, lat, 3.0)


def test_random_powerlaw_certifies():
    lat = chain(6)
    rng = np.random.default_rng(3)
    for k in (1, 2):
        H = random_powerlaw(lat, 3.0, k, rng)
        rep = powerlaw_certificate(H, lat, PowerLawSpec(alpha=3.0, k=k), 1.0)
        assert rep.passes


def test_all_suites_pass():
    reports = run_all_lemmas(seed=7)
    assert len(reports) == 620
    failures = [r for r in reports if not r.passes]
    assert failures == []
    lemmas = {r.lemma for r in reports}
    assert lemmas == {"factorial_positive", "factorial_zeros",
                      "factorial_shifted", "stirling_sum", "tail_sum",
                      "inner_gamma_tail", "adjoint_closure"}


def test_suites_are_seed_deterministic():
    a = lemma_closure_suite(n_samples=5, seed=11)
    b = lemma_closure_suite(n_samples=5, seed=11)
    assert [(r.point, r.lhs, r.rhs) for r in a] == \
        [(r.point, r.lhs, r.rhs) for r in b]
