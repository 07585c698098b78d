"""Lattice geometry and the derived interaction constants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slowheat import (DomainError, Lattice, boundary_area, chain, distance,
                      enclosing_radius, lattice_constants, set_distance)


def test_chain_distances_are_site_differences():
    lat = chain(6)
    d = lat.distance_matrix()
    for i in range(6):
        for j in range(6):
            assert d[i, j] == abs(i - j)


def test_periodic_chain_uses_minimum_image():
    lat = chain(6, boundary="periodic")
    assert distance(lat, 0, 5) == 1.0
    assert distance(lat, 0, 3) == 3.0


def test_two_dimensional_distances_are_euclidean():
    lat = Lattice(2, (3, 3))
    i = lat.site_index((0, 0))
    j = lat.site_index((2, 1))
    assert distance(lat, i, j) == pytest.approx(math.sqrt(5.0))


def test_set_distance_minimizes_over_pairs():
    lat = chain(8)
    assert set_distance(lat, (0, 1), (4, 7)) == 3.0
    assert set_distance(lat, (0, 4), (4, 7)) == 0.0
    with pytest.raises(DomainError):
        set_distance(lat, (), (4, 7))


def test_boundary_area_of_intervals():
    lat = chain(10)
    # interior interval exposes its two end sites
    assert boundary_area(lat, (3, 4, 5)) == 2
    # interval touching the chain end exposes one
    assert boundary_area(lat, (0, 1, 2)) == 1
    # a single bulk site is its own boundary
    assert boundary_area(lat, (5,)) == 1
    # only proper subsets have a boundary
    with pytest.raises(DomainError):
        boundary_area(lat, tuple(range(10)))


def test_enclosing_radius_of_interval():
    lat = chain(10)
    assert enclosing_radius(lat, (2, 3, 4, 5, 6)) == 2.0
    assert enclosing_radius(lat, (4,)) == 0.0


def _constants_literal(lat, alpha):
    """The two geometry constants straight from their definitions."""
    d = lat.distance_matrix()
    n = lat.n_sites
    lam0 = 0.0
    for i in range(n):
        tot = 1.0
        for j in range(n):
            if j != i:
                tot += d[i, j] ** -alpha
        lam0 = max(lam0, tot)
    lam1 = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            s = 0.0
            for ell in range(n):
                if ell != i and ell != j:
                    s += d[i, ell] ** -alpha * d[ell, j] ** -alpha
            lam1 = max(lam1, d[i, j] ** alpha * s)
    return lam0, lam1


@pytest.mark.parametrize("n,alpha", [(3, 2.0), (5, 2.0), (8, 3.0), (10, 4.0)])
def test_lattice_constants_match_literal_definitions(n, alpha):
    lat = chain(n)
    lc = lattice_constants(lat, alpha)
    lam0, lam1 = _constants_literal(lat, alpha)
    assert lc.lam0 == pytest.approx(lam0, rel=1e-12)
    assert lc.lam1 == pytest.approx(lam1, rel=1e-12)
    assert lc.lam == pytest.approx(2.0 * (6.0 * lam0 + 2.0 * lam1 + 1.0),
                                   rel=1e-12)


def test_three_site_constants_by_hand():
    # alpha = 2 on sites {0, 1, 2}: the middle site sees 1 + 1, an end site
    # 1 + 1/4, so lam0 = 3; the (0, 2) pair dominates lam1 with
    # 2^2 * (1 * 1) = 4.
    lc = lattice_constants(chain(3), 2.0)
    assert lc.lam0 == pytest.approx(3.0)
    assert lc.lam1 == pytest.approx(4.0)
    assert lc.lam == pytest.approx(2.0 * (18.0 + 8.0 + 1.0))


def test_lam1_is_not_monotone_in_alpha():
    # the through-site path of the extremal pair carries weight
    # d^alpha * prod d_i^{-alpha} which can grow with alpha; the 3-site
    # chain realizes 2^alpha and doubles from alpha = 2 to 3
    lat = chain(3)
    assert lattice_constants(lat, 3.0).lam1 > lattice_constants(lat, 2.0).lam1


@given(n=st.integers(3, 12), alpha=st.floats(1.5, 6.0))
@settings(deadline=None, max_examples=40)
def test_constants_positive_and_lam0_at_least_one(n, alpha):
    lc = lattice_constants(chain(n), alpha)
    assert lc.lam0 >= 1.0
    assert lc.lam1 >= 0.0
    assert lc.lam >= 2.0 * (6.0 + 1.0)


def test_alpha_at_most_dimension_is_rejected():
    with pytest.raises(DomainError):
        lattice_constants(chain(4), 1.0)
    with pytest.raises(DomainError):
        lattice_constants(Lattice(2, (3, 3)), 2.0)
