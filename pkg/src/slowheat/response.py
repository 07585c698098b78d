"""Dissipative linear response from the exact spectrum, with suppression bounds.

sigma_ij over a frequency bin is computed exactly: every transition a -> b of
the diagonalized H0 deposits

    pi (p_a - p_b) Re[ (M_i)_{ab} (M_j)_{ba} ]      M = V^dag O V

into the bin containing Delta = E_b - E_a.  This sign convention makes the
diagonal response positive at positive frequency and reproduces the direct
time-integral definition on a two-level system (pi tanh(beta) for H0 = Z,
O = X in the bin around Delta = 2).  Transitions landing exactly on a bin
edge go to the lower bin.

Two rigorous suppression bounds accompany the exact values: a per-pair bound
exponential in frequency built from iterated commutator norms, and an
extensive total-rate bound balancing spatial and energetic suppression.
Cross-checks: a positivity-based inequality against the Gaussian-smeared
response, the time-domain quadrature identity for the smeared response, and
a spatial-decay envelope obtained by feeding a Lieb-Robinson bound into the
smeared time integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .errors import DomainError
from .lr_bounds import BoundParams, eval_bound
from .pauli import OperatorSum, commutator, operator_norm
from . import dense as _dense

# sigma([w, w+dw]) <= C1_SMEAR * sqrt(pi) * dw * smeared(w) for diagonal
# entries once w >= 2 dw: in-bin Gaussian weight is at least e^{-1} and the
# antisymmetric negative-frequency mirror cancels at most a factor 1 - e^{-8}.
C1_SMEAR = math.e / (1.0 - math.exp(-8.0))


@dataclass(frozen=True)
class ResponseConfig:
    """Inverse temperature, probe observables, and the frequency bins.

    bin_edges must be strictly increasing and uniformly spaced; the spacing
    is the bin width delta_omega, and the Gaussian broadening time for the
    cross-checks is delta_t = 2 / delta_omega.  obs_sites optionally anchors
    each observable to a site for distance reporting.
    """

    beta: float
    observables: tuple
    bin_edges: tuple
    obs_sites: tuple = None

    def __post_init__(self):
        if self.beta < 0:
            raise DomainError("beta must be >= 0")
        obs = tuple(self.observables)
        if not obs:
            raise DomainError("need at least one observable")
        for O in obs:
            if not O.is_hermitian():
                raise DomainError("observables must be Hermitian")
        object.__setattr__(self, "observables", obs)
        edges = np.asarray(self.bin_edges, dtype=float)
        if edges.ndim != 1 or len(edges) < 2:
            raise DomainError("bin_edges needs at least two entries")
        widths = np.diff(edges)
        if not (widths > 0).all():
            raise DomainError("bin_edges must be strictly increasing")
        if not np.allclose(widths, widths[0], rtol=1e-9, atol=0.0):
            raise DomainError("bin_edges must be uniformly spaced")
        object.__setattr__(self, "bin_edges", tuple(float(e) for e in edges))
        if self.obs_sites is not None:
            sites = tuple(int(s) for s in self.obs_sites)
            if len(sites) != len(obs):
                raise DomainError("obs_sites must match observables")
            object.__setattr__(self, "obs_sites", sites)

    @property
    def n_bins(self) -> int:
        return len(self.bin_edges) - 1

    @property
    def delta_omega(self) -> float:
        return self.bin_edges[1] - self.bin_edges[0]

    @property
    def delta_t(self) -> float:
        return 2.0 / self.delta_omega


@dataclass(frozen=True)
class ResponseResult:
    """Binned response plus the spectral data needed for the cross-checks.

    sigma has shape (n_bins, n_obs, n_obs) and is symmetric in the last two
    indices for Hermitian observables.
    """

    config: ResponseConfig
    sites: tuple
    energies: np.ndarray
    probs: np.ndarray
    matrices: tuple
    sigma: np.ndarray

    def bin_index(self, value: float) -> int:
        """Bin containing ``value``; edge hits resolve to the lower bin."""
        edges = np.asarray(self.config.bin_edges)
        idx = int(np.searchsorted(edges, value, side="left")) - 1
        if idx < 0 or idx >= self.config.n_bins:
            raise DomainError(f"{value} lies outside the binned range")
        return idx

    def sigma_at(self, i: int, j: int, omega: float) -> float:
        return float(self.sigma[self.bin_index(omega), i, j])


def thermal_probs(energies: np.ndarray, beta: float) -> np.ndarray:
    """Gibbs weights with a max-shift; safe for beta up to at least 50."""
    w = np.exp(-beta * (energies - energies.min()))
    return w / w.sum()


def response_binned(H0: OperatorSum, config: ResponseConfig,
                    sites=None) -> ResponseResult:
    """Exact binned response for every observable pair.

    The spectral sum is exact; the only discretization is the binning
    itself.  Degenerate transitions carry zero weight since p_a = p_b.
    """
    if sites is None:
        sup = set(H0.support)
        for O in config.observables:
            sup |= set(O.support)
        if not sup:
            raise DomainError("cannot infer sites from identity operators")
        sites = tuple(sorted(sup))
    else:
        sites = tuple(sites)
    es = _dense.eigensystem(_dense.to_matrix(H0, sites))
    E = es.energies
    p = thermal_probs(E, config.beta)
    V = es.states
    mats = tuple(V.conj().T @ _dense.to_matrix(O, sites).matrix @ V
                 for O in config.observables)

    edges = np.asarray(config.bin_edges)
    delta = E[None, :] - E[:, None]
    weight = math.pi * (p[:, None] - p[None, :])
    idx = np.searchsorted(edges, delta.ravel(), side="left") - 1
    ok = (idx >= 0) & (idx < config.n_bins)
    idx_ok = idx[ok]

    n_obs = len(config.observables)
    sigma = np.zeros((config.n_bins, n_obs, n_obs))
    for i in range(n_obs):
        for j in range(i, n_obs):
            dep = (weight * (mats[i] * mats[j].T).real).ravel()[ok]
            col = np.bincount(idx_ok, weights=dep, minlength=config.n_bins)
            sigma[:, i, j] = col
            sigma[:, j, i] = col
    return ResponseResult(config=config, sites=sites, energies=E, probs=p,
                          matrices=mats, sigma=sigma)


def smeared_response(result: ResponseResult, i: int, j: int,
                     omega: float) -> float:
    """Gaussian-smeared response at frequency omega, from the spectrum.

    Equals (1/2) int dt e^{i omega t} e^{-(t/dt)^2} <[O_i(t), O_j]>_beta
    exactly, with dt the broadening time of the config.
    """
    dt = result.config.delta_t
    E, p = result.energies, result.probs
    delta = E[None, :] - E[:, None]
    w = p[:, None] - p[None, :]
    g = np.exp(-(dt * (delta - omega)) ** 2 / 4.0)
    dep = w * (result.matrices[i] * result.matrices[j].T).real * g
    return float(math.sqrt(math.pi) * dt / 2.0 * dep.sum())


def smeared_response_quadrature(H0: OperatorSum, config: ResponseConfig,
                                i: int, j: int, omega: float, sites=None,
                                n_t: int = 2001, cut: float = 8.0) -> float:
    """Time-domain route to the smeared response, by numerical quadrature.

    Integrates e^{i omega t} e^{-(t/dt)^2} <[O_i(t), O_j]> / 2 on a uniform
    grid over [-cut dt, cut dt] with Simpson's rule.  Shares the spectral
    decomposition with the exact route but not the Gaussian transform
    identity, which is what this verifies.
    """
    if sites is None:
        sup = set(H0.support)
        for O in config.observables:
            sup |= set(O.support)
        sites = tuple(sorted(sup))
    es = _dense.eigensystem(_dense.to_matrix(H0, tuple(sites)))
    p = thermal_probs(es.energies, config.beta)
    rho = (es.states * p) @ es.states.conj().T
    Oi = _dense.to_matrix(config.observables[i], tuple(sites)).matrix
    Oj = _dense.to_matrix(config.observables[j], tuple(sites)).matrix
    dt = config.delta_t
    ts = np.linspace(-cut * dt, cut * dt, n_t)
    vals = np.empty(n_t, dtype=complex)
    for k, t in enumerate(ts):
        U = es.propagator(float(t))
        Oit = U.conj().T @ Oi @ U
        vals[k] = (np.exp(1j * omega * t) * math.exp(-(t / dt) ** 2)
                   * np.trace(rho @ (Oit @ Oj - Oj @ Oit)))
    return float(scipy.integrate.simpson(vals, x=ts).real / 2.0)


@dataclass(frozen=True)
class SmearCheck:
    """One positivity-based bin-vs-smear comparison."""

    bin_index: int
    omega_lo: float
    binned: float
    smeared_bound: float
    applicable: bool

    @property
    def passes(self) -> bool:
        return (not self.applicable) or self.binned <= self.smeared_bound * (
            1.0 + 1e-12)


def gaussian_smear_check(result: ResponseResult, i: int,
                         bin_index: int) -> SmearCheck:
    """sigma_ii over one bin against C1 sqrt(pi) dw * smeared at the lower edge.

    Valid (applicable) only for diagonal entries and bins whose lower edge
    is at least twice the bin width; outside that regime the check reports
    itself inapplicable rather than failing.
    """
    cfg = result.config
    lo = cfg.bin_edges[bin_index]
    applicable = lo >= 2.0 * cfg.delta_omega
    smeared = smeared_response(result, i, i, lo)
    rhs = C1_SMEAR * math.sqrt(math.pi) * cfg.delta_omega * smeared
    return SmearCheck(bin_index=bin_index, omega_lo=lo,
                      binned=float(result.sigma[bin_index, i, i]),
                      smeared_bound=rhs, applicable=applicable)


def spatial_envelope(params: BoundParams, norm_i: float, norm_j: float,
                     r: float, delta_t: float, size_x: float = 1.0,
                     size_y: float = 1.0) -> float:
    """Upper bound on |smeared sigma_ij(omega)| for any omega, from locality.

    |<[O_i(t), O_j]>| <= norm_i norm_j min(2, bound(|t|, r)) pointwise, so
    half the Gaussian-weighted time integral of that cap bounds the smeared
    response at separation r.  Quadrature error and the truncated Gaussian
    tail are added on top to keep this a certified upper bound.
    """

    cap = 2.0 * norm_i * norm_j

    def integrand(t):
        b = norm_i * norm_j * eval_bound(params, t, r, size_x=size_x,
                                         size_y=size_y)
        return math.exp(-(t / delta_t) ** 2) * min(cap, b)

    cut = 10.0 * delta_t
    val, err = scipy.integrate.quad(integrand, 0.0, cut, limit=200)
    tail = cap * delta_t * math.sqrt(math.pi) / 2.0 * math.erfc(cut / delta_t)
    return val + err + tail


@dataclass(frozen=True)
class PairBound:
    """Per-pair exponential suppression bound at one frequency.

    entries[m] = (||ad_H^{k_m} O|| / omega^{k_m})^2; the certified bound on a
    diagonal binned response with lower edge omega is pi times the smallest
    entry.  kappa is the analytic decay rate 2 / (lambda e); prefactor is
    the measured sup of ||ad^k O|| / (lambda^k k!) over the grid.
    """

    omega: float
    ks: tuple
    ad_norms: tuple
    entries: tuple
    kappa: float
    prefactor: float

    @property
    def min_entry(self) -> float:
        return min(self.entries)

    @property
    def bound(self) -> float:
        return math.pi * self.min_entry


def kappa_analytic(lam: float) -> float:
    """kappa = 2 / (lambda e)."""
    if lam <= 0:
        raise DomainError("lambda must be positive")
    return 2.0 / (lam * math.e)


def _adjoint_norms(H: OperatorSum, O: OperatorSum, ks, sites=None) -> tuple:
    """Exact ||ad_H^k O|| for each k, reusing the nested commutators."""
    out, cur, done = {}, O, 0
    for k in ks:
        for _ in range(k - done):
            cur = commutator(H, cur)
        done = k
        out[k] = operator_norm(cur) if sites is None else \
            _dense.operator_norm_dense(
                _dense.to_matrix(cur, tuple(sites)).matrix)
    return tuple(out[k] for k in ks)


def _check_pair_args(omega, ks, lam):
    if omega <= 0:
        raise DomainError("omega must be positive")
    if not ks or ks[0] < 0:
        raise DomainError("k_grid must hold nonnegative integers")
    if lam <= 0:
        raise DomainError("lambda must be positive")


def _pair_bound(omega: float, ks, norms, lam: float) -> PairBound:
    entries = tuple((nk / omega ** k) ** 2 for k, nk in zip(ks, norms))
    pref = max(nk / (lam ** k * math.factorial(k))
               for k, nk in zip(ks, norms))
    return PairBound(omega=float(omega), ks=tuple(ks), ad_norms=tuple(norms),
                     entries=entries, kappa=kappa_analytic(lam),
                     prefactor=pref)


def per_pair_exponential_bound(H: OperatorSum, O: OperatorSum, omega: float,
                               k_grid, lam: float, sites=None) -> PairBound:
    """Iterated-commutator bound on a diagonal response entry.

    Each k contributes (||ad_H^k O|| / omega^k)^2; transitions below omega
    are suppressed by the k-th power, so the minimum over the grid bounds
    the binned response from the lower bin edge on (after the universal pi).
    Norms are exact dense computations.
    """
    ks = tuple(sorted(set(int(k) for k in k_grid)))
    _check_pair_args(omega, ks, lam)
    return _pair_bound(omega, ks, _adjoint_norms(H, O, ks, sites=sites), lam)


def pair_bound_table(H: OperatorSum, config: ResponseConfig, k_grid,
                     lam: float, sites=None) -> np.ndarray:
    """(n_bins, n_obs, n_obs) bound table matching response_binned's sigma.

    Diagonal entries take the per-pair bound at each bin's lower edge;
    off-diagonal entries are the mean of the two diagonals, valid by
    Cauchy-Schwarz on the positive response.  Bins whose lower edge is not
    positive get +inf (the exponential argument does not apply there).
    Adjoint norms are computed once per observable and reused across bins.
    """
    ks = tuple(sorted(set(int(k) for k in k_grid)))
    _check_pair_args(config.bin_edges[-1], ks, lam)
    n_obs = len(config.observables)
    norms = [_adjoint_norms(H, O, ks, sites=sites)
             for O in config.observables]
    diag = np.full((config.n_bins, n_obs), math.inf)
    for b in range(config.n_bins):
        lo = config.bin_edges[b]
        if lo <= 0:
            continue
        for i in range(n_obs):
            diag[b, i] = _pair_bound(lo, ks, norms[i], lam).bound
    return (diag[:, :, None] + diag[:, None, :]) / 2.0


@dataclass(frozen=True)
class TotalRate:
    """Extensive absorption bound split into its two balanced halves.

    value = N exp(-(1 - D/alpha) kappa omega) up to the overall constant
    (carried as 1); at r_* = e^{kappa omega / alpha} the spatial term
    N / r_*^{alpha - D} and the energetic term N r_*^D e^{-kappa omega}
    are exactly equal to it.
    """

    value: float
    r_star: float
    spatial_term: float
    energetic_term: float


def total_rate_bound(N: int, alpha: float, D: int, kappa: float,
                     omega: float) -> TotalRate:
    if alpha <= D:
        raise DomainError("need alpha > D")
    if omega <= 0 or kappa <= 0 or N < 1:
        raise DomainError("need omega > 0, kappa > 0, N >= 1")
    r_star = math.exp(kappa * omega / alpha)
    value = N * math.exp(-(1.0 - D / alpha) * kappa * omega)
    spatial = N / r_star ** (alpha - D)
    energetic = N * r_star ** D * math.exp(-kappa * omega)
    return TotalRate(value=value, r_star=r_star, spatial_term=spatial,
                     energetic_term=energetic)
