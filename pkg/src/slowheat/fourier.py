"""Operator-valued trigonometric polynomials H(t) = sum_m e^{i m w t} H_m.

The harmonic index set is finite and grows as operations compose; nothing is
ever truncated silently.  Time averages, antiderivatives and commutators are
exact harmonic-by-harmonic operations, never quadrature.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .pauli import OperatorSum, commutator, local_norm

_OMEGA_RTOL = 1e-12


class FourierOperator:
    """Finite harmonic sum of OperatorSum coefficients at base frequency omega."""

    __slots__ = ("omega", "harmonics")

    def __init__(self, omega: float, harmonics):
        if omega <= 0:
            raise DomainError("base frequency must be positive")
        self.omega = float(omega)
        cleaned = {}
        for m, op in harmonics.items():
            if op.n_terms:
                cleaned[int(m)] = op
        self.harmonics = cleaned

    # ---- constructors ----

    @classmethod
    def constant(cls, omega: float, op: OperatorSum) -> "FourierOperator":
        return cls(omega, {0: op})

    @classmethod
    def cosine(cls, omega: float, op: OperatorSum, amplitude: float = 1.0
               ) -> "FourierOperator":
        """amplitude * cos(omega t) * op."""
        half = (amplitude / 2.0) * op
        return cls(omega, {1: half, -1: half})

    # ---- inspection ----

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def max_harmonic(self) -> int:
        return max((abs(m) for m in self.harmonics), default=0)

    def harmonic(self, m: int) -> OperatorSum:
        return self.harmonics.get(int(m), OperatorSum.zero())

    def evaluate_at(self, t: float) -> OperatorSum:
        out = OperatorSum.zero()
        for m, op in sorted(self.harmonics.items()):
            out = out + np.exp(1j * m * self.omega * t) * op
        return out

    def is_hermitian(self, tol=1e-10) -> bool:
        """True when H(t) is Hermitian for every t, i.e. H_{-m} = H_m^dag."""
        seen = set()
        for m, op in self.harmonics.items():
            if m in seen:
                continue
            seen.update((m, -m))
            other = self.harmonic(-m)
            if not op.dagger().allclose(other, tol):
                return False
        return True

    def is_anti_hermitian(self, tol=1e-10) -> bool:
        seen = set()
        for m, op in self.harmonics.items():
            if m in seen:
                continue
            seen.update((m, -m))
            other = self.harmonic(-m)
            if not ((-1.0) * op.dagger()).allclose(other, tol):
                return False
        return True

    def harmonic_envelope(self) -> OperatorSum:
        """String-wise sum of |coefficients| over harmonics.

        Upper-bounds sup_t of each string coefficient magnitude, so a
        locality certificate of the envelope certifies the whole family
        uniformly in t.
        """
        out = OperatorSum.zero()
        for _, op in sorted(self.harmonics.items()):
            out = out + OperatorSum(op.xs, op.zs, np.abs(op.cs), _merged=True)
        return out

    def local_norm_envelope(self) -> float:
        """Upper bound on sup_t of the local norm, via the envelope."""
        return local_norm(self.harmonic_envelope())

    # ---- calculus ----

    def time_average(self) -> OperatorSum:
        """(1/T) integral over one period: the m = 0 harmonic."""
        return self.harmonic(0)

    def derivative(self) -> "FourierOperator":
        return FourierOperator(
            self.omega,
            {m: (1j * m * self.omega) * op for m, op in self.harmonics.items()})

    def antiderivative_zero_start(self) -> "FourierOperator":
        """F(t) with F' = self and F(0) = 0; needs zero time average.

        integral of e^{imwt} is (e^{imwt} - 1)/(imw), so each harmonic m != 0
        maps into itself divided by imw plus a compensating constant.
        """
        mean = self.time_average()
        if mean.n_terms and mean.norm_upper() > 1e-12:
            raise DomainError(
                "antiderivative_zero_start needs a zero-mean integrand; "
                f"found mean with coefficient sum {mean.norm_upper():.3e}")
        out = {}
        const = OperatorSum.zero()
        for m, op in sorted(self.harmonics.items()):
            if m == 0:
                continue
            scaled = (1.0 / (1j * m * self.omega)) * op
            out[m] = scaled
            const = const - scaled
        if const.n_terms:
            out[0] = const
        return FourierOperator(self.omega, out)

    # ---- algebra ----

    def _check_same_omega(self, other: "FourierOperator"):
        if abs(self.omega - other.omega) > _OMEGA_RTOL * max(self.omega, other.omega):
            raise DomainError(
                f"frequency mismatch: {self.omega} vs {other.omega}")

    def __add__(self, other):
        if isinstance(other, OperatorSum):
            other = FourierOperator.constant(self.omega, other)
        if not isinstance(other, FourierOperator):
            return NotImplemented
        self._check_same_omega(other)
        out = dict(self.harmonics)
        for m, op in other.harmonics.items():
            out[m] = out[m] + op if m in out else op
        return FourierOperator(self.omega, out)

    def __sub__(self, other):
        if isinstance(other, OperatorSum):
            other = FourierOperator.constant(self.omega, other)
        if not isinstance(other, FourierOperator):
            return NotImplemented
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        if isinstance(scalar, (int, float, complex)):
            return FourierOperator(
                self.omega, {m: scalar * op for m, op in self.harmonics.items()})
        return NotImplemented

    def dagger(self) -> "FourierOperator":
        return FourierOperator(
            self.omega, {-m: op.dagger() for m, op in self.harmonics.items()})

    def allclose(self, other: "FourierOperator", tol=1e-10) -> bool:
        self._check_same_omega(other)
        for m in set(self.harmonics) | set(other.harmonics):
            if not self.harmonic(m).allclose(other.harmonic(m), tol):
                return False
        return True

    def max_coefficient(self) -> float:
        """Largest string-coefficient magnitude over all harmonics."""
        out = 0.0
        for op in self.harmonics.values():
            if op.n_terms:
                out = max(out, float(np.abs(op.cs).max()))
        return out

    def __repr__(self):
        ms = sorted(self.harmonics)
        return f"FourierOperator(omega={self.omega:.6g}, harmonics={ms})"


def fourier_commutator(A: FourierOperator, B: FourierOperator) -> FourierOperator:
    """[A, B](t) harmonic by harmonic: C_m = sum_{p+q=m} [A_p, B_q]."""
    A._check_same_omega(B)
    out = {}
    for p, ap in sorted(A.harmonics.items()):
        for q, bq in sorted(B.harmonics.items()):
            c = commutator(ap, bq)
            if not c.n_terms:
                continue
            m = p + q
            out[m] = out[m] + c if m in out else c
    return FourierOperator(A.omega, out)
