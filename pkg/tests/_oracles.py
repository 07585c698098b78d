"""Independent brute-force references shared by the unit tests.

Everything here is deliberately naive: literal Kronecker products, explicit
loops over enumerated objects, textbook formulas evaluated with scipy.  The
point is to share no code path with the package, so agreement between the
two is evidence and not tautology.  Site 0 is always the leftmost
(most significant) tensor factor, matching the package's dense convention.
"""

import itertools

import numpy as np
import scipy.linalg

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def kron_chain(letters: str) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for ch in letters:
        out = np.kron(out, PAULI[ch])
    return out


def term_matrix(sites_letters: dict, n: int) -> np.ndarray:
    """Matrix of one Pauli product on an n-site register."""
    letters = "".join(sites_letters.get(i, "I") for i in range(n))
    return kron_chain(letters)


def op_matrix(terms, n: int) -> np.ndarray:
    """Matrix of sum_k c_k P_k from (coeff, {site: letter}) pairs."""
    out = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for coeff, sl in terms:
        out = out + coeff * term_matrix(sl, n)
    return out


def spectral_norm(M: np.ndarray) -> float:
    return float(np.linalg.svd(M, compute_uv=False)[0])


def commutator_mat(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def heisenberg(H: np.ndarray, A: np.ndarray, t: float) -> np.ndarray:
    U = scipy.linalg.expm(-1j * t * H)
    return U.conj().T @ A @ U


def gibbs(H: np.ndarray, beta: float) -> np.ndarray:
    rho = scipy.linalg.expm(-beta * H)
    return rho / np.trace(rho).real


def chain_sum_literal(groups: dict, X, Y, k: int) -> float:
    """Exhaustive sum over interaction-set chains Z_1..Z_k of prod |h_Z|.

    groups maps a support tuple to its term norm.  Chains must start
    touching X, overlap consecutively, and end touching Y.  Exponential in
    k; fine for the few-set systems the tests use.
    """
    sets = [(frozenset(s), v) for s, v in groups.items()]
    X, Y = set(X), set(Y)
    total = 0.0
    for combo in itertools.product(sets, repeat=k):
        if not (combo[0][0] & X) or not (combo[-1][0] & Y):
            continue
        if any(not (combo[i][0] & combo[i + 1][0]) for i in range(k - 1)):
            continue
        prod = 1.0
        for _, v in combo:
            prod *= v
        total += prod
    return total


def powerlaw_pair_weight(terms, n: int, i: int, j: int) -> float:
    """sum of |coeff| over terms whose support contains both i and j."""
    tot = 0.0
    for coeff, sl in terms:
        if i in sl and j in sl:
            tot += abs(coeff)
    return tot
