"""Dense-matrix realization of operators and exact time evolution.

Everything here is for desk-scale cross-checks: systems are capped at
MAX_DENSE_SITES spins so a propagator and a couple of work matrices fit in
memory.  The Floquet propagator uses a fourth-order commutator-free scheme
on Gauss-Legendre nodes with automatic step doubling until self-consistent
to a stated tolerance; unitarity is asserted, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import AccuracyError, DomainError, ResourceLimitError
from .fourier import FourierOperator
from .pauli import OperatorSum, matrix_on_sites

MAX_DENSE_SITES = 14
UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class DenseOperator:
    """Matrix plus the ordered site list its tensor factors refer to."""

    matrix: np.ndarray
    sites: tuple

    def __post_init__(self):
        dim = 1 << len(self.sites)
        if self.matrix.shape != (dim, dim):
            raise DomainError(
                f"matrix shape {self.matrix.shape} does not match {len(self.sites)} sites")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "DenseOperator":
        return DenseOperator(self.matrix.conj().T, self.sites)

    def is_hermitian(self, tol=1e-10) -> bool:
        return bool(np.abs(self.matrix - self.matrix.conj().T).max() <= tol)

    def norm(self) -> float:
        return operator_norm_dense(self.matrix)


def to_matrix(A, sites) -> DenseOperator:
    """Dense realization of an OperatorSum on an explicit ordered site list."""
    sites = tuple(int(s) for s in sites)
    if len(sites) > MAX_DENSE_SITES:
        raise ResourceLimitError(
            f"dense realization on {len(sites)} sites exceeds cap {MAX_DENSE_SITES}")
    if len(set(sites)) != len(sites):
        raise DomainError("site list for dense realization contains duplicates")
    return DenseOperator(matrix_on_sites(A, sites), sites)


def operator_norm_dense(M: np.ndarray) -> float:
    """Spectral norm; uses the Hermitian fast path when applicable."""
    h = np.abs(M - M.conj().T).max() if M.size else 0.0
    a = np.abs(M + M.conj().T).max() if M.size else 0.0
    if h <= 1e-13 * max(1.0, a):
        return float(np.abs(np.linalg.eigvalsh(M)).max())
    if a <= 1e-13 * max(1.0, h):
        return float(np.abs(np.linalg.eigvalsh(1j * M)).max())
    return float(np.linalg.svd(M, compute_uv=False)[0])


def expm_hermitian(H: np.ndarray, scale: complex = 1.0) -> np.ndarray:
    """exp(scale * H) for Hermitian H via eigendecomposition."""
    evals, vecs = np.linalg.eigh(H)
    return (vecs * np.exp(scale * evals)) @ vecs.conj().T


@dataclass(frozen=True)
class EigenSystem:
    energies: np.ndarray
    states: np.ndarray  # columns are eigenvectors
    sites: tuple

    def propagator(self, t: float) -> np.ndarray:
        """exp(-i H t)."""
        return (self.states * np.exp(-1j * self.energies * t)) @ self.states.conj().T


def eigensystem(H: DenseOperator) -> EigenSystem:
    if not H.is_hermitian(1e-9):
        raise DomainError("eigensystem requires a Hermitian operator")
    evals, vecs = np.linalg.eigh(H.matrix)
    return EigenSystem(evals, vecs, H.sites)


def thermal_state(H: DenseOperator, beta: float) -> DenseOperator:
    """exp(-beta H)/Z, computed with the max-shift so beta up to 50 is safe."""
    es = eigensystem(H)
    w = -beta * (es.energies - es.energies.min())
    p = np.exp(w)
    p /= p.sum()
    rho = (es.states * p) @ es.states.conj().T
    return DenseOperator(rho, H.sites)


def expectation(rho: DenseOperator, A: DenseOperator) -> float:
    val = np.trace(rho.matrix @ A.matrix)
    return float(val.real)


# ---- time evolution ----

class _HarmonicMatrices:
    """Dense harmonics of a FourierOperator for cheap H(t) evaluation."""

    def __init__(self, H: FourierOperator, sites):
        self.omega = H.omega
        self.ms = sorted(H.harmonics)
        self.mats = [to_matrix(H.harmonics[m], sites).matrix for m in self.ms]

    def at(self, t: float) -> np.ndarray:
        out = np.zeros_like(self.mats[0])
        for m, mat in zip(self.ms, self.mats):
            out += np.exp(1j * m * self.omega * t) * mat
        return out


_GL_NODE = math.sqrt(3.0) / 6.0
_CF4_A = 0.25 + _GL_NODE  # larger weight
_CF4_B = 0.25 - _GL_NODE


def _cf4_step(h_at, t: float, h: float) -> np.ndarray:
    """One fourth-order commutator-free step over [t, t + h].

    Uses the two Gauss-Legendre nodes; the factor carrying more late-node
    weight acts last (left position in the product).
    """
    H1 = h_at(t + (0.5 - _GL_NODE) * h)
    H2 = h_at(t + (0.5 + _GL_NODE) * h)
    U1 = expm_hermitian(_CF4_A * H1 + _CF4_B * H2, -1j * h)
    U2 = expm_hermitian(_CF4_B * H1 + _CF4_A * H2, -1j * h)
    return U2 @ U1


def _propagate(h_at, t0: float, t1: float, steps: int) -> np.ndarray:
    h = (t1 - t0) / steps
    U = None
    for k in range(steps):
        Uk = _cf4_step(h_at, t0 + k * h, h)
        U = Uk if U is None else Uk @ U
    return U


@dataclass(frozen=True)
class FloquetPropagator:
    """One-period propagator with its convergence evidence."""

    U: DenseOperator
    period: float
    steps_per_period: int
    convergence_estimate: float
    stepper_order: int = 4


def floquet_propagator(H: FourierOperator, sites, steps: int = 32,
                       tol: float = 1e-8, max_steps: int = 1 << 16
                       ) -> FloquetPropagator:
    """Propagator over one period, refined by step doubling.

    The convergence estimate is the spectral-norm distance between the
    result at ``steps`` and at ``steps/2``; steps double until it falls
    below ``tol``.  Unitarity is checked to UNITARITY_TOL.
    """
    if not H.is_hermitian(1e-9):
        raise DomainError("floquet_propagator requires a Hermitian generator")
    sites = tuple(int(s) for s in sites)
    hm = _HarmonicMatrices(H, sites)
    T = H.period
    steps = max(2, int(steps))
    U_half = _propagate(hm.at, 0.0, T, steps // 2)
    while True:
        U_full = _propagate(hm.at, 0.0, T, steps)
        est = operator_norm_dense(U_full - U_half)
        if est <= tol:
            break
        if steps * 2 > max_steps:
            raise AccuracyError(
                f"floquet propagator did not reach {tol} by {steps} steps"
                f" (estimate {est:.3e})", estimate=est)
        U_half, steps = U_full, steps * 2
    eye = np.eye(U_full.shape[0])
    unit_err = np.abs(U_full.conj().T @ U_full - eye).max()
    if unit_err > UNITARITY_TOL:
        raise AccuracyError(f"propagator unitarity defect {unit_err:.3e}",
                            estimate=float(unit_err))
    return FloquetPropagator(DenseOperator(U_full, sites), T, steps, float(est))


def propagator_to(H: FourierOperator, sites, t: float, steps_per_period: int = 64
                  ) -> DenseOperator:
    """Time-ordered propagator from 0 to arbitrary t (t >= 0)."""
    if t < 0:
        raise DomainError("propagator_to needs t >= 0")
    sites = tuple(int(s) for s in sites)
    dim = 1 << len(sites)
    if t == 0:
        return DenseOperator(np.eye(dim, dtype=complex), sites)
    hm = _HarmonicMatrices(H, sites)
    T = H.period
    n_full = int(t // T)
    U = np.eye(dim, dtype=complex)
    if n_full:
        U_period = _propagate(hm.at, 0.0, T, steps_per_period)
        U = np.linalg.matrix_power(U_period, n_full)
    rem = t - n_full * T
    if rem > 1e-14 * max(t, T):
        rem_steps = max(2, int(math.ceil(steps_per_period * rem / T)))
        U = _propagate(hm.at, n_full * T, n_full * T + rem, rem_steps) @ U
    return DenseOperator(U, sites)


def heisenberg_evolve(H, A: DenseOperator, t: float,
                      steps_per_period: int = 64) -> DenseOperator:
    """A(t) = U(t)^dag A U(t) for static or time-periodic H."""
    if isinstance(H, OperatorSum):
        es = eigensystem(to_matrix(H, A.sites))
        U = es.propagator(t)
    elif isinstance(H, FourierOperator):
        U = propagator_to(H, A.sites, t, steps_per_period).matrix
    else:
        raise DomainError(f"cannot evolve under {type(H).__name__}")
    return DenseOperator(U.conj().T @ A.matrix @ U, A.sites)
