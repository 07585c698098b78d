"""Model builders: coefficients by hand and the unit-coupling budget."""

import math

import numpy as np

from slowheat import (PowerLawSpec, chain, driven_hamiltonian, local_norm,
                      pauli_op, power_law_ising, powerlaw_certificate,
                      uniform_field)


def test_ising_coefficients_by_hand():
    H = power_law_ising(chain(3), 2.0, J=1.0, hx=0.2, hz=0.25)
    # pairs: (0,1) and (1,2) at distance 1, (0,2) at distance 2
    want = {
        (("Z", 0), ("Z", 1)): 1.0,
        (("Z", 1), ("Z", 2)): 1.0,
        (("Z", 0), ("Z", 2)): 0.25,
        (("X", 0),): 0.2, (("X", 1),): 0.2, (("X", 2),): 0.2,
        (("Z", 0),): 0.25, (("Z", 1),): 0.25, (("Z", 2),): 0.25,
    }
    got = {}
    for coeff, string in H.terms():
        got[tuple(sorted((l, s) for s, l in string.letters.items()))] = coeff
    assert set(got) == set(want)
    for key, val in want.items():
        assert abs(got[key] - val) < 1e-15


def test_zero_fields_drop_terms():
    H = power_law_ising(chain(3), 2.0, hx=0.0, hz=0.0)
    assert all(len(string.letters) == 2 for _, string in H.terms())


def test_uniform_field_letters():
    F = uniform_field(chain(4), "Y")
    terms = list(F.terms())
    assert len(terms) == 4
    assert all(list(string.letters.values()) == ["Y"] and coeff == 1.0
               for coeff, string in terms)


def test_driven_hamiltonian_endpoints():
    lat = chain(3)
    H0 = power_law_ising(lat, 2.0)
    V = uniform_field(lat)
    omega, g = 4.0, 0.5
    H = driven_hamiltonian(H0, V, g, omega)
    assert H.evaluate_at(0.0).allclose(H0 + g * V, 1e-12)
    assert H.evaluate_at(math.pi / omega).allclose(H0 + (-g) * V, 1e-12)
    assert H.time_average().allclose(H0, 1e-12)


def test_default_couplings_fit_unit_class():
    # J = 1 saturates the pair budget; |hx| + |hz| + g = 0.95 <= 1 keeps
    # single sites inside it at the drive maximum.
    lat = chain(8)
    H = driven_hamiltonian(power_law_ising(lat, 3.0), uniform_field(lat), 0.5, 6.0)
    env = H.harmonic_envelope()
    report = powerlaw_certificate(env, lat, PowerLawSpec(alpha=3.0, eta=1.0, k=1))
    assert report.passes
    pair, ratio = report.worst_pair
    assert pair is not None
    assert ratio <= 1.0 + 1e-12


def test_local_norm_is_uniform_over_sites_in_bulk():
    lat = chain(6)
    H0 = power_law_ising(lat, 3.0, hx=0.0, hz=0.0)
    # interior sites carry more pair weight than the edges; local norm is
    # the supremum so it must match a direct per-site tally
    d = lat.distance_matrix()
    per_site = [sum(1.0 / d[i, j] ** 3.0 for j in range(6) if j != i)
                for i in range(6)]
    assert abs(local_norm(H0) - max(per_site)) < 1e-12
