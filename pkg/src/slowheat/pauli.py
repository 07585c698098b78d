"""Sparse Pauli-string operators and power-law locality certificates.

A Pauli string is stored as a pair of bitmasks (x, z): bit i of x set means
X acts on site i, bit i of z means Z acts, both mean Y.  A string in this
convention carries the phase i^{popcount(x & z)} relative to the bare
X^x Z^z product, which makes every stored string Hermitian.  An operator is
a coefficient-weighted sum of such strings, kept canonical (sorted by mask
pair, merged, pruned below PRUNE_TOL).

All bulk operations work on numpy arrays of masks so that products and
commutators of operators with tens of thousands of strings stay cheap.
Site indices are limited to 0..62 so masks fit in int64; this is far above
the dense-matrix cap and does not constrain anything downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceLimitError

PRUNE_TOL = 1e-12
MAX_SITE_INDEX = 62
EXACT_GROUP_CAP = 8   # largest support for exact per-group norms
EXACT_NORM_CAP = 14   # largest joint support for exact operator norms

_POP16 = np.array([bin(v).count("1") for v in range(1 << 16)], dtype=np.uint8)
_PAR16 = (_POP16 & 1).astype(np.uint8)
_I_POW = np.array([1.0, 1.0j, -1.0, -1.0j], dtype=np.complex128)

_LETTER_TO_XZ = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_XZ_TO_LETTER = {(1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


def _popcount(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    return (_POP16[v & 0xFFFF].astype(np.int64)
            + _POP16[(v >> 16) & 0xFFFF]
            + _POP16[(v >> 32) & 0xFFFF]
            + _POP16[(v >> 48) & 0xFFFF])


def _parity(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    return (_PAR16[v & 0xFFFF]
            ^ _PAR16[(v >> 16) & 0xFFFF]
            ^ _PAR16[(v >> 32) & 0xFFFF]
            ^ _PAR16[(v >> 48) & 0xFFFF])


@dataclass(frozen=True)
class PauliString:
    """Single Hermitian Pauli string identified by its (x, z) bitmasks."""

    x: int
    z: int

    @classmethod
    def from_letters(cls, letters) -> "PauliString":
        """Build from a mapping {site: 'X'|'Y'|'Z'}; identity for {}."""
        x = z = 0
        for site, letter in letters.items():
            site = int(site)
            if not 0 <= site <= MAX_SITE_INDEX:
                raise DomainError(f"site index {site} outside supported range")
            try:
                bx, bz = _LETTER_TO_XZ[letter.upper()]
            except KeyError:
                raise DomainError(f"unknown Pauli letter {letter!r}") from None
            if (x >> site) & 1 or (z >> site) & 1:
                raise DomainError(f"duplicate site {site} in Pauli string")
            x |= bx << site
            z |= bz << site
        return cls(x, z)

    @property
    def letters(self) -> dict:
        out = {}
        support = self.x | self.z
        site = 0
        while support >> site:
            bx, bz = (self.x >> site) & 1, (self.z >> site) & 1
            if bx or bz:
                out[site] = _XZ_TO_LETTER[(bx, bz)]
            site += 1
        return out

    @property
    def support(self) -> tuple:
        return tuple(sorted(self.letters))

    @property
    def weight(self) -> int:
        return int(_popcount(np.int64(self.x | self.z)))

    def __str__(self):
        if not (self.x | self.z):
            return "I"
        return " ".join(f"{l}{s}" for s, l in sorted(self.letters.items()))


def _merge(xs, zs, cs, tol=PRUNE_TOL):
    """Sort by (x, z), add duplicate coefficients, drop tiny ones."""
    if len(cs) == 0:
        return (np.empty(0, np.int64), np.empty(0, np.int64),
                np.empty(0, np.complex128))
    order = np.lexsort((zs, xs))
    xs, zs, cs = xs[order], zs[order], cs[order]
    boundary = np.empty(len(xs), dtype=bool)
    boundary[0] = True
    np.logical_or(xs[1:] != xs[:-1], zs[1:] != zs[:-1], out=boundary[1:])
    starts = np.nonzero(boundary)[0]
    summed = np.add.reduceat(cs, starts)
    keep = np.abs(summed) > tol
    return xs[starts][keep], zs[starts][keep], summed[keep]


class OperatorSum:
    """Canonical sum of Pauli strings with complex coefficients.

    Instances are immutable by convention: every operation returns a new
    object and the backing arrays are never mutated after construction.
    """

    __slots__ = ("xs", "zs", "cs")

    def __init__(self, xs, zs, cs, _merged=False):
        xs = np.asarray(xs, dtype=np.int64)
        zs = np.asarray(zs, dtype=np.int64)
        cs = np.asarray(cs, dtype=np.complex128)
        if not _merged:
            xs, zs, cs = _merge(xs, zs, cs)
        self.xs, self.zs, self.cs = xs, zs, cs

    # ---- constructors ----

    @classmethod
    def zero(cls) -> "OperatorSum":
        return cls(np.empty(0, np.int64), np.empty(0, np.int64),
                   np.empty(0, np.complex128), _merged=True)

    @classmethod
    def identity(cls, coeff=1.0) -> "OperatorSum":
        return cls([0], [0], [coeff])

    @classmethod
    def from_terms(cls, terms) -> "OperatorSum":
        """Build from an iterable of (coefficient, PauliString | mapping)."""
        xs, zs, cs = [], [], []
        for coeff, string in terms:
            if not isinstance(string, PauliString):
                string = PauliString.from_letters(string)
            xs.append(string.x)
            zs.append(string.z)
            cs.append(coeff)
        if not xs:
            return cls.zero()
        return cls(xs, zs, cs)

    # ---- inspection ----

    @property
    def n_terms(self) -> int:
        return len(self.cs)

    def terms(self):
        """Yield (coefficient, PauliString) in canonical order."""
        for x, z, c in zip(self.xs, self.zs, self.cs):
            yield complex(c), PauliString(int(x), int(z))

    def coefficient(self, string: PauliString) -> complex:
        idx = np.nonzero((self.xs == string.x) & (self.zs == string.z))[0]
        return complex(self.cs[idx[0]]) if len(idx) else 0.0

    @property
    def support_mask(self) -> int:
        mask = 0
        for x, z in zip(self.xs, self.zs):
            mask |= int(x) | int(z)
        return mask

    @property
    def support(self) -> tuple:
        mask, out, site = self.support_mask, [], 0
        while mask >> site:
            if (mask >> site) & 1:
                out.append(site)
            site += 1
        return tuple(out)

    def norm_upper(self) -> float:
        """Triangle-inequality bound on the operator norm: sum |c|."""
        return float(np.abs(self.cs).sum())

    def is_hermitian(self, tol=1e-10) -> bool:
        return bool(np.abs(self.cs.imag).max(initial=0.0) <= tol)

    def is_anti_hermitian(self, tol=1e-10) -> bool:
        return bool(np.abs(self.cs.real).max(initial=0.0) <= tol)

    def dagger(self) -> "OperatorSum":
        # stored strings are Hermitian, so only coefficients conjugate
        return OperatorSum(self.xs, self.zs, self.cs.conj(), _merged=True)

    def allclose(self, other: "OperatorSum", tol=1e-10) -> bool:
        diff = self - other
        return diff.n_terms == 0 or bool(np.abs(diff.cs).max() <= tol)

    # ---- algebra ----

    def __add__(self, other):
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return OperatorSum(np.concatenate([self.xs, other.xs]),
                           np.concatenate([self.zs, other.zs]),
                           np.concatenate([self.cs, other.cs]))

    def __sub__(self, other):
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __rmul__(self, scalar):
        if isinstance(scalar, (int, float, complex)):
            return OperatorSum(self.xs, self.zs, scalar * self.cs)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return OperatorSum(self.xs, self.zs, other * self.cs)
        if isinstance(other, OperatorSum):
            return _product(self, other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return (np.array_equal(self.xs, other.xs)
                and np.array_equal(self.zs, other.zs)
                and np.array_equal(self.cs, other.cs))

    def __hash__(self):
        raise TypeError("OperatorSum is not hashable")

    def __repr__(self):
        if self.n_terms == 0:
            return "OperatorSum(0)"
        parts = []
        for c, s in list(self.terms())[:6]:
            parts.append(f"({c:.6g})*{s}")
        tail = " + ..." if self.n_terms > 6 else ""
        return "OperatorSum(" + " + ".join(parts) + tail + ")"


def pauli_op(letter: str, site: int, coeff=1.0) -> OperatorSum:
    return OperatorSum.from_terms([(coeff, {site: letter})])


def X(site: int) -> OperatorSum:
    return pauli_op("X", site)


def Y(site: int) -> OperatorSum:
    return pauli_op("Y", site)


def Z(site: int) -> OperatorSum:
    return pauli_op("Z", site)


_CHUNK = 512


def _pairwise(A: OperatorSum, B: OperatorSum, anticommuting_only: bool):
    """Mask/coefficient arrays for string products of A and B.

    With ``anticommuting_only`` the pairs whose strings commute are skipped
    (their contribution to a commutator vanishes identically).
    """
    xs_out, zs_out, cs_out = [], [], []
    xb, zb, cb = B.xs, B.zs, B.cs
    for lo in range(0, A.n_terms, _CHUNK):
        xa = A.xs[lo:lo + _CHUNK, None]
        za = A.zs[lo:lo + _CHUNK, None]
        ca = A.cs[lo:lo + _CHUNK, None]
        if anticommuting_only:
            anti = (_parity(xa & zb) ^ _parity(za & xb)).astype(bool)
            ia, ib = np.nonzero(anti)
            if len(ia) == 0:
                continue
            x1, z1, c1 = xa[ia, 0], za[ia, 0], ca[ia, 0]
            x2, z2, c2 = xb[ib], zb[ib], cb[ib]
        else:
            x1 = np.broadcast_to(xa, (xa.shape[0], B.n_terms)).ravel()
            z1 = np.broadcast_to(za, (za.shape[0], B.n_terms)).ravel()
            c1 = np.broadcast_to(ca, (ca.shape[0], B.n_terms)).ravel()
            x2 = np.broadcast_to(xb, (xa.shape[0], B.n_terms)).ravel()
            z2 = np.broadcast_to(zb, (za.shape[0], B.n_terms)).ravel()
            c2 = np.broadcast_to(cb, (ca.shape[0], B.n_terms)).ravel()
        x3 = x1 ^ x2
        z3 = z1 ^ z2
        # phase of (i^{x1.z1} X^x1 Z^z1)(i^{x2.z2} X^x2 Z^z2) relative to the
        # canonical form i^{x3.z3} X^x3 Z^z3
        expo = (_popcount(x1 & z1) + _popcount(x2 & z2)
                - _popcount(x3 & z3) + 2 * _popcount(z1 & x2)) & 3
        cs = c1 * c2 * _I_POW[expo]
        xs_out.append(x3)
        zs_out.append(z3)
        cs_out.append(cs)
    if not xs_out:
        return (np.empty(0, np.int64), np.empty(0, np.int64),
                np.empty(0, np.complex128))
    return (np.concatenate(xs_out), np.concatenate(zs_out),
            np.concatenate(cs_out))


def _product(A: OperatorSum, B: OperatorSum) -> OperatorSum:
    xs, zs, cs = _pairwise(A, B, anticommuting_only=False)
    return OperatorSum(xs, zs, cs)


def commutator(A: OperatorSum, B: OperatorSum) -> OperatorSum:
    """[A, B], using the fact that [P, Q] = 2 PQ for anticommuting strings."""
    xs, zs, cs = _pairwise(A, B, anticommuting_only=True)
    return OperatorSum(xs, zs, 2.0 * cs)


def adjoint_power(H: OperatorSum, O: OperatorSum, k: int,
                  term_cap: int = 2_000_000) -> OperatorSum:
    """Nested commutator ad_H^k O = [H, [H, ... [H, O]]].

    Raises ResourceLimitError when an intermediate result exceeds
    ``term_cap`` strings; the exception carries the depth reached and the
    last completed operator.
    """
    if k < 0:
        raise DomainError("adjoint power needs k >= 0")
    out = O
    for depth in range(1, k + 1):
        out = commutator(H, out)
        if out.n_terms > term_cap:
            raise ResourceLimitError(
                f"adjoint power exceeded {term_cap} strings at depth {depth} of {k}",
                depth_reached=depth, partial=out)
    return out


# ---- dense realization on the support ----

def matrix_on_sites(A: OperatorSum, sites) -> np.ndarray:
    """Dense matrix of A on the listed sites (first site = most significant).

    Every site in the support of A must appear in ``sites``.  Strings act by
    bit permutation, so the cost is O(n_terms * 2^n).
    """
    sites = list(sites)
    n = len(sites)
    pos = {s: n - 1 - p for p, s in enumerate(sites)}  # bit index in basis state
    dim = 1 << n
    basis = np.arange(dim, dtype=np.int64)
    M = np.zeros((dim, dim), dtype=np.complex128)
    for c, s in A.terms():
        xbits = zbits = 0
        for site, letter in s.letters.items():
            if site not in pos:
                raise DomainError(f"operator acts on site {site} outside {sites}")
            b = pos[site]
            bx, bz = _LETTER_TO_XZ[letter]
            xbits |= bx << b
            zbits |= bz << b
        ny = int(_popcount(np.int64(xbits & zbits)))
        amp = (1j ** ny) * np.where(_parity(basis & zbits), -1.0, 1.0)
        M[basis ^ xbits, basis] += c * amp
    return M


def operator_norm(A: OperatorSum, method: str = "exact") -> float:
    """Spectral norm of A.

    ``exact`` builds a dense matrix on the joint support (capped at
    EXACT_NORM_CAP sites); ``upper`` returns the coefficient-sum bound.
    """
    if method == "upper":
        return A.norm_upper()
    if method != "exact":
        raise DomainError(f"unknown norm method {method!r}")
    if A.n_terms == 0:
        return 0.0
    support = A.support
    if len(support) > EXACT_NORM_CAP:
        raise ResourceLimitError(
            f"exact norm needs {len(support)} sites > cap {EXACT_NORM_CAP};"
            " use method='upper'")
    if not support:  # pure identity component
        return float(abs(A.cs[0]))
    M = matrix_on_sites(A, support)
    if A.is_hermitian() or A.is_anti_hermitian():
        return float(np.abs(np.linalg.eigvalsh(M if A.is_hermitian() else 1j * M)).max())
    return float(np.linalg.svd(M, compute_uv=False)[0])


# ---- locality certificates ----

@dataclass(frozen=True)
class PowerLawSpec:
    """Membership test data for the power-law class.

    alpha : interaction-decay exponent
    eta   : coupling scale (the pair/site budget before the prefactor)
    k     : class index; member operators involve at most k+1 sites per term
    """

    alpha: float
    eta: float = 1.0
    k: int = 1

    def __post_init__(self):
        if self.alpha <= 0 or self.eta <= 0 or self.k < 1:
            raise DomainError("PowerLawSpec needs alpha > 0, eta > 0, k >= 1")


def _group_norms(H: OperatorSum, support_cap: int = EXACT_GROUP_CAP):
    """Group terms by exact support set and bound each group's norm.

    Returns a dict {support tuple: (norm, exact_flag)}.  Groups on at most
    ``support_cap`` sites get an exact dense norm; larger groups fall back to
    the coefficient-sum upper bound and are flagged.
    """
    masks = (H.xs | H.zs)
    groups = {}
    for idx in range(H.n_terms):
        groups.setdefault(int(masks[idx]), []).append(idx)
    out = {}
    for mask, idxs in groups.items():
        sites, site = [], 0
        while mask >> site:
            if (mask >> site) & 1:
                sites.append(site)
            site += 1
        sub = OperatorSum(H.xs[idxs], H.zs[idxs], H.cs[idxs], _merged=True)
        if len(sites) <= support_cap:
            norm = operator_norm(sub) if sites else float(abs(sub.cs[0]))
            exact = True
        else:
            norm = sub.norm_upper()
            exact = False
        out[tuple(sites)] = (norm, exact)
    return out


@dataclass
class CertificateReport:
    """Outcome of a power-law membership check at a given prefactor."""

    passes: bool
    prefactor: float
    pair_ratios: dict        # {(i, j): rho_ij}
    worst_pair: tuple        # ((i, j), rho) or (None, 0.0)
    single_site_ratios: dict  # {site: ratio}
    worst_single: tuple      # (site, ratio) or (None, 0.0)
    max_support_size: int
    support_ok: bool
    all_groups_exact: bool

    @property
    def certified_prefactor(self) -> float:
        """Smallest prefactor at which this operator would pass."""
        worst = max(self.worst_pair[1], self.worst_single[1])
        return worst * self.prefactor


_CERT_RTOL = 1e-9


def powerlaw_certificate(H: OperatorSum, lattice, spec: PowerLawSpec,
                         prefactor: float = 1.0) -> CertificateReport:
    """Check membership of H in the power-law class at the given prefactor.

    For every site pair the certificate compares the summed norms of terms
    containing both sites against prefactor * eta / dist^alpha, and for every
    single-site term against prefactor * eta.  Terms are grouped by exact
    support before taking norms, so cancellations inside a support set are
    honoured.  Ratios up to 1 + 1e-9 pass (floating-point headroom for
    saturated budgets).
    """
    if prefactor <= 0:
        raise DomainError("certificate prefactor must be positive")
    d = lattice.distance_matrix()
    groups = _group_norms(H)
    budget = prefactor * spec.eta
    pair_sums, single = {}, {}
    max_support = 0
    all_exact = True
    for sites, (norm, exact) in groups.items():
        all_exact = all_exact and exact
        if sites == ():
            continue  # identity component carries no locality content
        max_support = max(max_support, len(sites))
        if len(sites) == 1:
            single[sites[0]] = single.get(sites[0], 0.0) + norm
            continue
        for a in range(len(sites)):
            for b in range(a + 1, len(sites)):
                key = (sites[a], sites[b])
                pair_sums[key] = pair_sums.get(key, 0.0) + norm
    pair_ratios = {}
    worst_pair = (None, 0.0)
    for (i, j), total in pair_sums.items():
        rho = total * d[i, j] ** spec.alpha / budget
        pair_ratios[(i, j)] = rho
        if rho > worst_pair[1]:
            worst_pair = ((i, j), rho)
    single_ratios = {}
    worst_single = (None, 0.0)
    for site, total in single.items():
        ratio = total / budget
        single_ratios[site] = ratio
        if ratio > worst_single[1]:
            worst_single = (site, ratio)
    support_ok = max_support <= spec.k + 1
    passes = (support_ok
              and worst_pair[1] <= 1.0 + _CERT_RTOL
              and worst_single[1] <= 1.0 + _CERT_RTOL)
    return CertificateReport(
        passes=passes, prefactor=prefactor, pair_ratios=pair_ratios,
        worst_pair=worst_pair, single_site_ratios=single_ratios,
        worst_single=worst_single, max_support_size=max_support,
        support_ok=support_ok, all_groups_exact=all_exact)


def local_norm(H: OperatorSum, support_cap: int = EXACT_GROUP_CAP) -> float:
    """sup over sites of the summed norms of terms touching that site.

    Group norms are exact up to ``support_cap`` sites, coefficient-sum
    bounded beyond; see local_norm_detail for the exactness flag.
    """
    value, _ = local_norm_detail(H, support_cap)
    return value


def local_norm_detail(H: OperatorSum, support_cap: int = EXACT_GROUP_CAP):
    """(local norm, all_groups_exact): the flagged variant of local_norm."""
    groups = _group_norms(H, support_cap)
    per_site = {}
    all_exact = True
    for sites, (norm, exact) in groups.items():
        all_exact = all_exact and exact
        for s in sites:
            per_site[s] = per_site.get(s, 0.0) + norm
    if not per_site:
        return 0.0, all_exact
    return max(per_site.values()), all_exact
