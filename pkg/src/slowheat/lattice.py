"""Finite regular lattices and the geometric constants used by the bounds.

Sites live on a D-dimensional rectangular grid with open or periodic
boundaries and unit spacing.  Everything downstream (certificates,
Lieb-Robinson constants, convolution bounds) only needs pairwise Euclidean
distances and nearest-neighbour adjacency, so that is all this module
computes.  The constants lambda0 and lambda1 are evaluated on the finite
lattice itself; they are lower bounds to their infinite-lattice counterparts
and are reported as such.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

_MAX_SITES = 20000


@dataclass(frozen=True)
class Lattice:
    """Rectangular grid of spins with unit lattice spacing.

    Parameters
    ----------
    dimension : int
        Number of spatial dimensions, D >= 1.
    extents : tuple of int
        Number of sites along each axis; ``len(extents) == dimension``.
    boundary : str
        Either ``"open"`` or ``"periodic"``.  Periodic distances use the
        minimum image along each axis.
    """

    dimension: int
    extents: tuple
    boundary: str = "open"
    _coords: np.ndarray = field(init=False, repr=False, compare=False)
    _dist: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.dimension < 1:
            raise DomainError("lattice dimension must be >= 1")
        extents = tuple(int(e) for e in self.extents)
        if len(extents) != self.dimension:
            raise DomainError("extents length must equal dimension")
        if any(e < 1 for e in extents):
            raise DomainError("every extent must be >= 1")
        if self.boundary not in ("open", "periodic"):
            raise DomainError(f"unknown boundary {self.boundary!r}")
        n = int(np.prod(extents))
        if n > _MAX_SITES:
            raise DomainError(f"lattice with {n} sites exceeds cap {_MAX_SITES}")
        object.__setattr__(self, "extents", extents)
        coords = np.array(list(itertools.product(*[range(e) for e in extents])),
                          dtype=np.int64)
        object.__setattr__(self, "_coords", coords)

    @property
    def n_sites(self) -> int:
        return self._coords.shape[0]

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    def site_index(self, coord) -> int:
        idx = 0
        for c, e in zip(coord, self.extents):
            if not 0 <= c < e:
                raise IndexError(f"coordinate {tuple(coord)} outside lattice")
            idx = idx * e + c
        return idx

    def distance_matrix(self) -> np.ndarray:
        """All pairwise Euclidean distances, cached after the first call."""
        if self._dist is not None:
            return self._dist
        delta = np.abs(self._coords[:, None, :] - self._coords[None, :, :])
        if self.boundary == "periodic":
            ext = np.array(self.extents)
            delta = np.minimum(delta, ext[None, None, :] - delta)
        dist = np.sqrt((delta.astype(float) ** 2).sum(axis=-1))
        object.__setattr__(self, "_dist", dist)
        return dist


def chain(n_sites: int, boundary: str = "open") -> Lattice:
    """One-dimensional lattice of ``n_sites`` spins."""
    return Lattice(1, (n_sites,), boundary)


def distance(lattice: Lattice, i: int, j: int) -> float:
    """Euclidean distance between sites ``i`` and ``j``."""
    n = lattice.n_sites
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"site index out of range for lattice with {n} sites")
    return float(lattice.distance_matrix()[i, j])


def set_distance(lattice: Lattice, X, Y) -> float:
    """min over x in X, y in Y of dist(x, y)."""
    X, Y = list(X), list(Y)
    if not X or not Y:
        raise DomainError("set_distance needs nonempty site sets")
    d = lattice.distance_matrix()
    return float(d[np.ix_(X, Y)].min())


@dataclass(frozen=True)
class SiteSet:
    """Immutable, sorted collection of site indices."""

    members: tuple

    @classmethod
    def of(cls, sites) -> "SiteSet":
        members = tuple(sorted(set(int(s) for s in sites)))
        return cls(members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, site):
        return site in self.members


def _neighbors(lattice: Lattice, i: int):
    """Site indices at Euclidean distance exactly 1 from site i."""
    coord = lattice.coords[i]
    out = []
    for axis in range(lattice.dimension):
        for step in (-1, 1):
            c = coord.copy()
            c[axis] += step
            if lattice.boundary == "periodic":
                c[axis] %= lattice.extents[axis]
            elif not 0 <= c[axis] < lattice.extents[axis]:
                continue
            j = lattice.site_index(c)
            if j != i:
                out.append(j)
    return sorted(set(out))


def boundary_area(lattice: Lattice, X) -> int:
    """Number of sites of X with a nearest neighbour outside X.

    Written phi(X) in the bound formulas.  Defined for nonempty proper
    subsets of the lattice only.
    """
    members = set(int(s) for s in X)
    n = lattice.n_sites
    if not members:
        raise DomainError("boundary_area of the empty set is undefined")
    if not members.issubset(range(n)):
        raise IndexError("site set contains indices outside the lattice")
    if len(members) == n:
        raise DomainError("boundary_area of the full lattice is undefined")
    count = 0
    for i in members:
        if any(j not in members for j in _neighbors(lattice, i)):
            count += 1
    return count


def enclosing_radius(lattice: Lattice, X) -> float:
    """Upper bound on the radius of the smallest ball containing X.

    Candidate centres are the members of X and the bounding-box centre of
    their coordinates; the returned value is the best of those, which is an
    upper bound on the true minimal radius.  Using an upper bound here only
    loosens the bounds it feeds, never invalidates them.
    """
    members = sorted(set(int(s) for s in X))
    if not members:
        raise DomainError("enclosing_radius of the empty set is undefined")
    pts = lattice.coords[members].astype(float)
    d = lattice.distance_matrix()
    best = min(float(d[np.ix_([m], members)].max()) for m in members)
    if lattice.boundary == "open":
        center = (pts.max(axis=0) + pts.min(axis=0)) / 2.0
        r_box = float(np.sqrt(((pts - center) ** 2).sum(axis=1)).max())
        best = min(best, r_box)
    return best


@dataclass(frozen=True)
class LatticeConstants:
    """Geometric constants entering the locality bounds.

    lam0 :  sup_i (1 + sum_{j != i} dist(i,j)^-alpha)
    lam1 :  smallest constant with
            sum_l dist(i,l)^-alpha dist(l,j)^-alpha <= lam1 * dist(i,j)^-alpha
            for all i != j (0 on lattices with fewer than two sites)
    lam  :  2 * (6*lam0 + 2*lam1 + 1), the constant of the commutator
            closure inequality
    """

    alpha: float
    lam0: float
    lam1: float
    lam: float


def lattice_constants(lattice: Lattice, alpha: float) -> LatticeConstants:
    """Evaluate lam0, lam1 and the closure constant on the finite lattice.

    The values are suprema over the given finite lattice, so they are
    monotone nondecreasing under lattice growth and lower bounds for the
    infinite-lattice constants.
    """
    if alpha <= lattice.dimension:
        raise DomainError(
            f"alpha = {alpha} must exceed the lattice dimension D = {lattice.dimension}")
    n = lattice.n_sites
    d = lattice.distance_matrix()
    if n == 1:
        return LatticeConstants(alpha, 1.0, 0.0, 2.0 * (6.0 + 0.0 + 1.0))
    with np.errstate(divide="ignore"):
        inv = np.where(d > 0, d, np.inf) ** (-alpha)
    np.fill_diagonal(inv, 0.0)
    lam0 = float(1.0 + inv.sum(axis=1).max())
    # lam1: for each ordered pair (i, j), sum over l != i, j of
    # inv[i,l]*inv[l,j], then multiply by d[i,j]^alpha.
    conv = inv @ inv  # includes no l == i or l == j terms since inv diag is 0
    np.fill_diagonal(conv, 0.0)
    ratio = conv * np.where(d > 0, d, 1.0) ** alpha
    np.fill_diagonal(ratio, 0.0)
    lam1 = float(ratio.max())
    lam = 2.0 * (6.0 * lam0 + 2.0 * lam1 + 1.0)
    return LatticeConstants(alpha, lam0, lam1, lam)
