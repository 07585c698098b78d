"""Combinatorial inequality kernels: exact sums against their closed-form bounds.

Each checker returns the exact value of a sum (big-integer or certified
upper estimate) next to the closed-form bound it must stay below:

    factorial compositions   sum over compositions of q into k parts of
                             prod i_j!  <=  q!/(k-1)!  (positive parts)
                             or 2^k q!  (zeros allowed)
    shifted corollary        sum of prod (i_j - 1)!  <=  2^k (q0 - k)!
    stirling sum             sum_k 2^k q0^k c^-k (q0-k)!/(q0! k!)
                             <=  (e / sqrt(2 pi)) (e^{2e/c} - 1)
    integer tail sum         sum_{r > r_*} r^{D-1} e^{-r^eta}
                             <=  (2/eta) 2^{D/eta} Gamma(D/eta) r_*^D e^{-r_*^eta}
    inner gamma tail         int_{x_*}^inf x^beta e^{-x} dx
                             <=  2^beta beta! x_*^beta e^{-x_*}
    adjoint closure          [H1, H2] certified power-law with prefactor
                             a b lambda max(k1, k2) and support k1 + k2 + 1

The composition sums are evaluated by a memoized recursion over the leading
part, which sums exactly the same terms as literal enumeration (the literal
generator is exported for cross-checking).  The tail sum cannot always be
summed to terms below 1e-300 (small eta pushes the mode beyond 1e13), so the
truncated remainder is enclosed from above by an integral-plus-peak bound on
the unimodal summand; the result is a certified upper estimate, which is the
safe direction for checking a bound.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.special

from .errors import DomainError
from .lattice import Lattice, lattice_constants
from .pauli import (OperatorSum, PauliString, PowerLawSpec, commutator,
                    powerlaw_certificate)

MAX_DIRECT_TERMS = 200_000
TERM_FLOOR = 1e-300


@dataclass(frozen=True)
class LemmaReport:
    """One exact-vs-bound comparison."""

    lemma: str
    point: tuple
    lhs: float
    rhs: float

    @property
    def passes(self) -> bool:
        return self.lhs <= self.rhs


def compositions(q: int, k: int, allow_zero: bool = False):
    """Literal enumeration of compositions of q into k ordered parts."""
    lo = 0 if allow_zero else 1
    if k == 1:
        if q >= lo:
            yield (q,)
        return
    for first in range(lo, q + 1):
        for rest in compositions(q - first, k - 1, allow_zero):
            yield (first,) + rest


@functools.lru_cache(maxsize=None)
def _comp_sum(q: int, k: int, allow_zero: bool) -> int:
    if k == 1:
        return math.factorial(q)
    lo = 0 if allow_zero else 1
    return sum(math.factorial(i) * _comp_sum(q - i, k - 1, allow_zero)
               for i in range(lo, q - (0 if allow_zero else k - 1) + 1))


@functools.lru_cache(maxsize=None)
def _comp_sum_shifted(q: int, k: int) -> int:
    if k == 1:
        return math.factorial(q - 1)
    return sum(math.factorial(i - 1) * _comp_sum_shifted(q - i, k - 1)
               for i in range(1, q - k + 2))


def factorial_composition_sum(q: int, k: int, allow_zero: bool = False):
    """(exact, bound) for the factorial composition sum.

    Positive parts: bound q!/(k-1)!.  Zeros allowed: bound 2^k q!.  Both
    sides are exact integers.
    """
    if not 1 <= k <= q:
        raise DomainError("need 1 <= k <= q")
    exact = _comp_sum(q, k, bool(allow_zero))
    if allow_zero:
        bound = 2 ** k * math.factorial(q)
    else:
        bound = math.factorial(q) // math.factorial(k - 1)
    return exact, bound


def shifted_composition_sum(q0: int, k: int):
    """(exact, bound) for sum of prod (i_j - 1)! over positive compositions."""
    if not 1 <= k <= q0:
        raise DomainError("need 1 <= k <= q0")
    return _comp_sum_shifted(q0, k), 2 ** k * math.factorial(q0 - k)


def c1_sum(q0: int, c: float):
    """(exact, bound) for the Stirling-controlled sum over k.

    exact = sum_{k=1}^{q0} 2^k q0^k c^{-k} (q0-k)! / (q0! k!), evaluated in
    exact rational arithmetic; bound = (e / sqrt(2 pi)) (e^{2e/c} - 1).
    """
    if q0 < 1 or c <= 0:
        raise DomainError("need q0 >= 1 and c > 0")
    cf = Fraction(c)
    total = Fraction(0)
    for k in range(1, q0 + 1):
        total += Fraction(2 ** k * q0 ** k * math.factorial(q0 - k),
                          math.factorial(q0) * math.factorial(k)) / cf ** k
    bound = math.e / math.sqrt(2.0 * math.pi) * (math.exp(2.0 * math.e / c) - 1.0)
    return float(total), bound


def _integral_tail(R: float, D: int, eta: float) -> float:
    """int_R^inf x^{D-1} e^{-x^eta} dx, exact via the incomplete gamma."""
    s = D / eta
    try:
        g = math.gamma(s)
    except OverflowError:
        return math.inf
    return g / eta * float(scipy.special.gammaincc(s, R ** eta))


@dataclass(frozen=True)
class TailSum:
    """Integer tail sum as a certified upper estimate, with its bound."""

    exact: float            # direct part + remainder enclosure
    bound: float
    direct: float
    remainder: float
    terms_summed: int
    truncated: bool


def tail_sum(r_star: float, D: int, eta: float) -> TailSum:
    """sum_{integer r > r_*} r^{D-1} e^{-r^eta} against its closed-form bound.

    Terms are accumulated directly until they drop below 1e-300 or the term
    cap is hit; the rest is enclosed from above by the integral of the
    summand plus its peak value (the summand is unimodal), so ``exact`` is
    an upper estimate and a pass is meaningful.
    """
    if r_star <= 1 or not 0.0 < eta < 1.0 or D < 1:
        raise DomainError("need r_star > 1, 0 < eta < 1, D >= 1")
    start = math.floor(r_star) + 1
    direct = 0.0
    r = start
    truncated = True
    while r < start + MAX_DIRECT_TERMS:
        term = r ** (D - 1) * math.exp(-r ** eta)
        if term < TERM_FLOOR:
            truncated = False
            break
        direct += term
        r += 1
    last = r - 1                        # summed through this integer
    remainder = _integral_tail(float(last), D, eta)
    if D > 1:
        peak = ((D - 1) / eta) ** (1.0 / eta)
        if peak > last:
            remainder += peak ** (D - 1) * math.exp(-peak ** eta)
    bound = (2.0 / eta * 2.0 ** (D / eta) * math.gamma(D / eta)
             * r_star ** D * math.exp(-r_star ** eta))
    return TailSum(exact=direct + remainder, bound=bound, direct=direct,
                   remainder=remainder, terms_summed=last - start + 1,
                   truncated=truncated)


def incomplete_gamma_tail(beta: int, x_star: float):
    """(exact, bound) for int_{x_*}^inf x^beta e^{-x} dx vs 2^beta beta! x_*^beta e^{-x_*}.

    Integer beta admits the closed form beta! e^{-x_*} sum_{m<=beta}
    x_*^m / m!.  Both sides share the beta! e^{-x_*} factor so the lemma's
    equality cases (beta = 0, and beta = 1 at x_* = 1) compare equal in
    floating point rather than differing by an ulp across two routes.
    """
    if beta < 0 or x_star < 1:
        raise DomainError("need beta >= 0 and x_star >= 1")
    shared = math.factorial(beta) * math.exp(-x_star)
    partial = math.fsum(x_star ** m / math.factorial(m)
                        for m in range(beta + 1))
    return shared * partial, shared * (2.0 * x_star) ** beta


def adjoint_closure_check(H1: OperatorSum, prefactor1: float, k1: int,
                          H2: OperatorSum, prefactor2: float, k2: int,
                          lat: Lattice, alpha: float) -> LemmaReport:
    """Certify [H1, H2] in the class with prefactor a b lambda max(k1, k2).

    Both inputs must themselves certify at their stated prefactors, else the
    check's precondition fails.  The commutator's support class is k1 + k2.
    """
    if k1 < 1 or k2 < 1:
        raise DomainError("closure needs k1, k2 >= 1")
    for H, pref, k, tag in ((H1, prefactor1, k1, "H1"), (H2, prefactor2, k2, "H2")):
        rep = powerlaw_certificate(H, lat, PowerLawSpec(alpha=alpha, k=k), pref)
        if not rep.passes:
            raise DomainError(f"{tag} fails its own certificate at "
                              f"prefactor {pref:g}")
    lam = lattice_constants(lat, alpha).lam
    target = prefactor1 * prefactor2 * lam * max(k1, k2)
    comm = commutator(H1, H2)
    report = powerlaw_certificate(comm, lat,
                                  PowerLawSpec(alpha=alpha, k=k1 + k2), target)
    lhs = report.certified_prefactor if comm.n_terms else 0.0
    return LemmaReport(lemma="adjoint_closure",
                       point=(alpha, k1, k2, lat.n_sites),
                       lhs=lhs if report.support_ok else math.inf,
                       rhs=target)


_LETTERS = "XYZ"


def random_powerlaw(lat: Lattice, alpha: float, k: int, rng,
                    n_terms: int = None) -> OperatorSum:
    """Random operator certified in the power-law class at prefactor 1.

    Terms get supports of size <= k + 1 and Gaussian coefficients, then the
    whole operator is rescaled so its certificate passes with a little
    headroom.
    """
    if k < 0:
        raise DomainError("k must be >= 0")
    n_terms = 3 * lat.n_sites if n_terms is None else n_terms
    terms = []
    for _ in range(n_terms):
        size = int(rng.integers(1, min(k + 1, lat.n_sites) + 1))
        sites = rng.choice(lat.n_sites, size=size, replace=False)
        letters = {int(s): _LETTERS[int(rng.integers(3))] for s in sites}
        terms.append((float(rng.normal()), PauliString.from_letters(letters)))
    H = OperatorSum.from_terms(terms)
    report = powerlaw_certificate(H, lat, PowerLawSpec(alpha=alpha, k=k), 1.0)
    ratio = max(report.worst_pair[1], report.worst_single[1])
    if ratio > 0:
        H = (1.0 - 1e-12) / ratio * H
    return H


def lemma_factorial_suite(q_max: int = 12):
    reports = []
    for q in range(1, q_max + 1):
        for k in range(1, q + 1):
            for zeros in (False, True):
                exact, bound = factorial_composition_sum(q, k, zeros)
                reports.append(LemmaReport(
                    lemma="factorial_zeros" if zeros else "factorial_positive",
                    point=(q, k), lhs=float(exact), rhs=float(bound)))
            exact, bound = shifted_composition_sum(q, k)
            reports.append(LemmaReport(lemma="factorial_shifted", point=(q, k),
                                       lhs=float(exact), rhs=float(bound)))
    return reports


def lemma_stirling_suite(q0_max: int = 30, cs=(1.0, 2.0, 5.0, 10.0, 100.0)):
    reports = []
    for q0 in range(1, q0_max + 1):
        for c in cs:
            exact, bound = c1_sum(q0, c)
            reports.append(LemmaReport(lemma="stirling_sum", point=(q0, c),
                                       lhs=exact, rhs=bound))
    return reports


def lemma_tail_suite(Ds=(1, 2, 3),
                     etas=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
                     r_stars=(2.0, 4.0, 8.0, 16.0),
                     betas=(0, 1, 2, 3, 4, 5, 6),
                     x_stars=(1.0, 2.0, 4.0, 8.0)):
    reports = []
    for D in Ds:
        for eta in etas:
            for rs in r_stars:
                ts = tail_sum(rs, D, eta)
                reports.append(LemmaReport(lemma="tail_sum",
                                           point=(rs, D, eta),
                                           lhs=ts.exact, rhs=ts.bound))
    for beta in betas:
        for xs in x_stars:
            exact, bound = incomplete_gamma_tail(beta, xs)
            reports.append(LemmaReport(lemma="inner_gamma_tail",
                                       point=(beta, xs), lhs=exact, rhs=bound))
    return reports


def lemma_closure_suite(n_samples: int = 100, seed: int = 7,
                        n_sites: int = 6, alpha: float = 3.0):
    from .lattice import chain
    lat = chain(n_sites)
    rng = np.random.default_rng(seed)
    reports = []
    for _ in range(n_samples):
        k1 = int(rng.integers(1, 3))
        k2 = int(rng.integers(1, 3))
        H1 = random_powerlaw(lat, alpha, k1, rng)
        H2 = random_powerlaw(lat, alpha, k2, rng)
        reports.append(adjoint_closure_check(H1, 1.0, k1, H2, 1.0, k2,
                                             lat, alpha))
    return reports


def run_all_lemmas(seed: int = 7):
    """Every lemma suite at its reference grid, as a flat report list."""
    return (lemma_factorial_suite() + lemma_stirling_suite()
            + lemma_tail_suite() + lemma_closure_suite(seed=seed))
