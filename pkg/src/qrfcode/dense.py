"""Brute-force state vectors and matrices used to check the exact algebra.

Basis index b encodes qubit 1 in its most significant bit, matching the
Pauli bit masks. Pauli strings act on vectors in O(2^n) through

    P|b> = i^(phase + |x & z|) (-1)^|z & b| |b ^ x>

so no matrix is built unless one is asked for.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from .pauli_core import Pauli, parse

STATE_CAP = 13
MATRIX_CAP = 6
EIG_RANK_DIM = 64
TOL = 1e-10

_IPOW = np.array([1, 1j, -1, -1j])


class DenseCapError(ValueError):
    pass


def check_cap(n: int, cap: int, what: str = "dense") -> None:
    if n > cap:
        raise DenseCapError(f"{what} needs n <= {cap}, got {n}")


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


def pauli_action(p: Pauli):
    """Permutation and phase vector with (P v)[b ^ x] = phases[b] v[b]."""
    idx = np.arange(1 << p.n, dtype=np.int64)
    k = p.phase + bin(p.x & p.z).count("1") + 2 * _popcount(idx & p.z)
    return idx ^ p.x, _IPOW[k % 4]


def apply_pauli(p: Pauli, state: np.ndarray) -> np.ndarray:
    """P applied to a vector, or to every column of a 2D array."""
    state = np.asarray(state, dtype=complex)
    if state.shape[0] != 1 << p.n:
        raise ValueError(f"state has dimension {state.shape[0]}, Pauli needs {1 << p.n}")
    target, phases = pauli_action(p)
    out = np.empty_like(state)
    if state.ndim == 1:
        out[target] = phases * state
    else:
        out[target] = phases[:, None] * state
    return out


def pauli_matrix(p: Pauli) -> np.ndarray:
    check_cap(p.n, MATRIX_CAP, "matrix")
    dim = 1 << p.n
    target, phases = pauli_action(p)
    m = np.zeros((dim, dim), dtype=complex)
    m[target, np.arange(dim)] = phases
    return m


def operator_from_paulis(terms: Iterable, n: Optional[int] = None) -> np.ndarray:
    """Sum of c * P for (c, P) pairs; P may be given as text."""
    total = None
    for coeff, p in terms:
        if isinstance(p, str):
            p = parse(p)
        m = coeff * pauli_matrix(p)
        total = m if total is None else total + m
    if total is None:
        if n is None:
            raise ValueError("empty sum needs n")
        return np.zeros((1 << n, 1 << n), dtype=complex)
    return total


def basis_state(n: int, index) -> np.ndarray:
    """|b> for an int index or a bit string like '011'."""
    if isinstance(index, str):
        index = int(index, 2)
    v = np.zeros(1 << n, dtype=complex)
    v[index] = 1.0
    return v


def product_state(letters: str) -> np.ndarray:
    """Tensor product of single-qubit states named 0, 1, +, -, r (+i), l (-i)."""
    singles = {
        "0": np.array([1, 0], dtype=complex),
        "1": np.array([0, 1], dtype=complex),
        "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
        "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
        "r": np.array([1, 1j], dtype=complex) / np.sqrt(2),
        "l": np.array([1, -1j], dtype=complex) / np.sqrt(2),
    }
    v = np.ones(1, dtype=complex)
    for ch in letters:
        v = np.kron(v, singles[ch])
    return v


def inner_product(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.vdot(a, b))


def norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def trace(m: np.ndarray) -> complex:
    return complex(np.trace(m))


def fidelity(psi: np.ndarray, rho: np.ndarray) -> float:
    """<psi|rho|psi> for a pure reference state."""
    return float(np.real(np.vdot(psi, rho @ psi)))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def is_close(a, b, tol: float = TOL) -> bool:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0)) <= tol


def max_dev(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


def projector_rank(p: np.ndarray, tol: float = 1e-8) -> int:
    """Number of eigenvalues within tol of 1."""
    p = np.asarray(p)
    dim = p.shape[0]
    if dim <= EIG_RANK_DIM:
        ev = np.linalg.eigvalsh((p + dagger(p)) / 2)
        return int(np.sum(np.abs(ev - 1) < tol))
    # for a projector, rank = trace, and trace = ||P||_F^2 double checks idempotence
    t = np.real(np.trace(p))
    f = np.real(np.vdot(p, p))
    if abs(t - f) > tol * dim:
        raise ValueError("matrix is not a projector")
    return int(round(t))


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_density(n: int, rng: np.random.Generator, rank: int = 2) -> np.ndarray:
    a = rng.normal(size=(1 << n, rank)) + 1j * rng.normal(size=(1 << n, rank))
    rho = a @ dagger(a)
    return rho / np.trace(rho)


def ket_to_density(v: np.ndarray) -> np.ndarray:
    return np.outer(v, np.conj(v))


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def permute_qubits_state(v: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors so that new factor j is old qubit order[j] (0-based)."""
    n = len(order)
    t = np.asarray(v).reshape((2,) * n)
    return np.transpose(t, order).reshape(-1)


def permute_qubits_operator(m: np.ndarray, order: Sequence[int]) -> np.ndarray:
    n = len(order)
    t = np.asarray(m).reshape((2,) * (2 * n))
    axes = list(order) + [n + q for q in order]
    return np.transpose(t, axes).reshape(1 << n, 1 << n)


def inverse_order(order: Sequence[int]) -> list:
    inv = [0] * len(order)
    for new, old in enumerate(order):
        inv[old] = new
    return inv


def match_pauli(m: np.ndarray, n: int, tol: float = TOL) -> Optional[Pauli]:
    """The signed Pauli string equal to m, if any."""
    m = np.asarray(m)
    dim = 1 << n
    col0 = m[:, 0]
    hits = np.nonzero(np.abs(col0) > 0.5)[0]
    if hits.size != 1:
        return None
    x = int(hits[0])
    # the Z part is read off from the diagonal of the permuted matrix
    rows = np.arange(dim) ^ x
    diag = m[rows, np.arange(dim)]
    z = 0
    for q in range(n):
        b = 1 << (n - 1 - q)
        if abs(diag[b] / diag[0] + 1) < 0.5:
            z |= b
    base = Pauli(n, x, z)
    ratio = diag[0] / _IPOW[bin(x & z).count("1") % 4]
    for k in range(4):
        if abs(ratio - _IPOW[k]) < tol:
            cand = base.scaled(k)
            if is_close(pauli_matrix(cand), m, tol):
                return cand
            return None
    return None
