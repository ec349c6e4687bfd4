"""Reference frames built from a subset of the physical qubits.

The frame R is a set of m = n - k qubits on which the truncated stabilizers
still represent G faithfully. Frame fragments are phase-free, the system
fragment carries whatever sign the stabilizer has, so U^g = U_R^g (x) U_S^g
holds letter by letter.

Dense work happens in "frame-first" order: the state vector is permuted so
the frame qubits come first (in increasing index order) and is then viewed
as a 2^m x 2^k matrix. Operators returned to callers are always in the
natural qubit order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import dense, gf2
from .pauli_core import Pauli, commutes, multiply, parse
from .stabilizer import StabilizerCode, project_state, code_projector

_EIGEN = {"X": "+", "Y": "r", "Z": "0"}
_LETTER_ORDER = {"X": "XYZ", "Y": "YXZ", "Z": "ZXY"}


class FrameError(ValueError):
    pass


@dataclass
class FrameChoice:
    drop: Tuple[int, ...]      # truncated qubits, 1-based
    frame: Tuple[int, ...]     # frame qubits, 1-based


def _restricted_matrix(code: StabilizerCode, frame0: Sequence[int]) -> np.ndarray:
    rows = [g.restrict(frame0).symplectic() for g in code.generators]
    return np.array(rows, dtype=np.uint8).reshape(len(rows), 2 * len(frame0))


def _faithfulness_witness(code: StabilizerCode, frame0: Sequence[int]) -> Optional[int]:
    """A nontrivial g whose frame fragment is the identity, or None."""
    if code.m == 0:
        return None
    # a kernel vector of the transposed generator matrix is a product of generators that vanishes on the frame
    ker = gf2.kernel(_restricted_matrix(code, frame0).T)
    if not ker:
        return None
    return sum(int(b) << i for i, b in enumerate(ker[0]))


def select_frame_qubits(code: StabilizerCode, override: Optional[Sequence[int]] = None) -> FrameChoice:
    """Pick the k qubits to drop so the remaining ones carry a faithful representation.

    Without an override, the lexicographically first valid subset is used.
    """
    n, k = code.n, code.k
    if override is not None:
        drop = tuple(sorted(int(a) for a in override))
        if len(drop) != k or len(set(drop)) != k or any(not 1 <= a <= n for a in drop):
            raise FrameError(f"override must list {k} distinct qubits in 1..{n}")
        candidates = [drop]
    else:
        candidates = itertools.combinations(range(1, n + 1), k)
    for drop in candidates:
        frame0 = [q for q in range(n) if q + 1 not in drop]
        bad = _faithfulness_witness(code, frame0)
        if bad is None:
            return FrameChoice(tuple(drop), tuple(q + 1 for q in frame0))
        if override is not None:
            raise FrameError(f"dropping {drop} is not faithful: group element "
                             f"{code.sign_label(bad)} ({code.element(bad)}) truncates to I")
    raise FrameError("no faithful frame found")


def is_faithful_by_scan(code: StabilizerCode, drop: Sequence[int]) -> bool:
    """Direct check that truncation kills only the identity element."""
    from .pauli_core import truncate
    return all(truncate(code.element(g), drop).weight > 0 for g in range(1, code.order))


# seeds ----------------------------------------------------------------

def seed_is_valid(fragments: Sequence[Pauli], seed: np.ndarray, tol: float = dense.TOL) -> bool:
    seed = np.asarray(seed, dtype=complex)
    if abs(np.linalg.norm(seed) - 1) > tol:
        return False
    for p in fragments:
        if p.weight == 0:
            continue
        if abs(np.vdot(seed, dense.apply_pauli(p, seed))) > tol:
            return False
    return True


def product_seed_letters(fragments: Sequence[Pauli], prefer: str = "X") -> Optional[str]:
    """Letters L with every nontrivial fragment anticommuting with L somewhere."""
    m = fragments[0].n if fragments else 0
    order = _LETTER_ORDER[prefer]
    nontrivial = [p for p in fragments if p.weight]
    for letters in itertools.product(order, repeat=m):
        phi = parse("".join(letters))
        if all(any(not commutes(p.restrict([q]), phi.restrict([q])) for q in range(m))
               for p in nontrivial):
            return "".join(letters)
    return None


def stabilizer_seed(fragments: Sequence[Pauli]) -> Optional[List[Pauli]]:
    """m commuting independent strings whose group avoids every nontrivial fragment.

    The joint +1 eigenstate of such a set has zero overlap with each fragment.
    Depth-first search in text order over candidate strings.
    """
    m = fragments[0].n
    forbidden = {p.key() for p in fragments if p.weight}
    pool = [p for p in (parse("".join(t)) for t in itertools.product("IXYZ", repeat=m)) if p.weight]
    pool = [p for p in pool if p.key() not in forbidden]

    def search(chosen, keys, start):
        if len(chosen) == m:
            return list(chosen)
        for i in range(start, len(pool)):
            q = pool[i]
            if q.key() in keys or not all(commutes(q, c) for c in chosen):
                continue
            new = {(x ^ q.x, z ^ q.z) for x, z in keys}
            if new & forbidden:
                continue
            found = search(chosen + [q], keys | new, i + 1)
            if found:
                return found
        return None

    return search([], {(0, 0)}, 0)


def state_from_stabilizers(gens: Sequence[Pauli]) -> np.ndarray:
    m = gens[0].n
    for b in range(1 << m):
        v = dense.basis_state(m, b)
        for s in gens:
            v = 0.5 * (v + dense.apply_pauli(s, v))
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            v = v / nrm
            return v * (abs(v[b]) / v[b])
    raise FrameError("stabilizer set has no common +1 eigenstate")


def subgroup_ansatz(subgroup_gens: Sequence[Pauli], m: int) -> np.ndarray:
    """2^-m I + c sum_{j>0} Q^j with c = (1 - 2^(1-m)) / (2^l - 2).

    This is the seed ansatz over an l-generator commuting subgroup. It is a
    rank-one projector only for l = m.
    """
    ell = len(subgroup_gens)
    c = (1 - 2.0 ** (1 - m)) / (2 ** ell - 2)
    elems = [Pauli(m)]
    for gen in subgroup_gens:
        elems = elems + [multiply(e, gen) for e in elems]
    out = np.eye(1 << m, dtype=complex) / (1 << m)
    for q in elems[1:]:
        out = out + c * dense.pauli_matrix(q)
    return out


def find_seed(fragments: Sequence[Pauli], basis: str = "X") -> Tuple[np.ndarray, str]:
    """A seed state and a short description of how it was found."""
    if not fragments:
        raise FrameError("no fragments")
    m = fragments[0].n
    dense.check_cap(m, dense.STATE_CAP)
    letters = product_seed_letters(fragments, basis)
    if letters is not None:
        seed = dense.product_state("".join(_EIGEN[c] for c in letters))
        if seed_is_valid(fragments, seed):
            return seed, f"product:{letters}"
    gens = stabilizer_seed(fragments)
    if gens is not None:
        seed = state_from_stabilizers(gens)
        if seed_is_valid(fragments, seed):
            return seed, "stabilizer:" + ",".join(g.letters for g in gens)
    raise FrameError(f"no seed state found for fragments {[str(p) for p in fragments]}")


def parse_seed(spec, m: int) -> np.ndarray:
    """Seed from Pauli eigenstate letters ('XX'), product labels ('+-'), or amplitudes."""
    if isinstance(spec, str):
        if len(spec) != m:
            raise FrameError(f"seed descriptor needs {m} characters")
        if set(spec) <= set("XYZ"):
            return dense.product_state("".join(_EIGEN[c] for c in spec))
        return dense.product_state(spec)
    amps = []
    for a in spec:
        amps.append(complex(a[0], a[1]) if isinstance(a, (list, tuple)) else complex(a))
    v = np.array(amps, dtype=complex)
    if v.shape != (1 << m,):
        raise FrameError(f"seed needs {1 << m} amplitudes")
    return v / np.linalg.norm(v)


# the frame -----------------------------------------------------------

@dataclass
class LocalFrame:
    code: StabilizerCode
    frame_qubits: Tuple[int, ...]    # 0-based
    system_qubits: Tuple[int, ...]   # 0-based
    fragments_R: List[Pauli]
    fragments_S: List[Pauli]
    seed: np.ndarray
    orientation_basis: np.ndarray    # column g is |g>_R
    cocycle: np.ndarray              # c(g, h) = i ** cocycle[g, h]
    seed_origin: str = ""
    _T: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def m(self) -> int:
        return len(self.frame_qubits)

    @property
    def k(self) -> int:
        return len(self.system_qubits)

    @property
    def order(self) -> int:
        return 1 << self.m

    @property
    def qubit_order(self) -> List[int]:
        return list(self.frame_qubits) + list(self.system_qubits)

    def cocycle_value(self, g: int, h: int) -> complex:
        return 1j ** int(self.cocycle[g, h])

    def ket(self, g: int) -> np.ndarray:
        return self.orientation_basis[:, g]

    def ready_state(self) -> np.ndarray:
        """|1>_R, the uniform superposition of orientation states."""
        return self.orientation_basis.sum(axis=1) / np.sqrt(self.order)

    # layout helpers
    def to_rs(self, state: np.ndarray) -> np.ndarray:
        """Natural-order vector to a (2^m, 2^k) frame/system matrix."""
        v = dense.permute_qubits_state(state, self.qubit_order)
        return v.reshape(self.order, 1 << self.k)

    def from_rs(self, mat: np.ndarray) -> np.ndarray:
        v = np.asarray(mat).reshape(-1)
        return dense.permute_qubits_state(v, dense.inverse_order(self.qubit_order))

    def embed_operator(self, op_rs: np.ndarray) -> np.ndarray:
        """Operator given in frame-first order, returned in natural order."""
        return dense.permute_qubits_operator(op_rs, dense.inverse_order(self.qubit_order))

    def to_rs_operator(self, op: np.ndarray) -> np.ndarray:
        return dense.permute_qubits_operator(op, self.qubit_order)


def build_local_frame(code: StabilizerCode, drop: Optional[Sequence[int]] = None,
                      basis: str = "X", seed=None) -> LocalFrame:
    """Frame on all qubits except ``drop`` (1-based), with a validated seed."""
    choice = select_frame_qubits(code, drop)
    frame0 = tuple(q - 1 for q in choice.frame)
    system0 = tuple(q - 1 for q in choice.drop)
    frag_r = [code.element(g).restrict(frame0) for g in range(code.order)]
    frag_s = [code.element(g).restrict(system0, keep_phase=True) for g in range(code.order)]
    cocycle = compute_cocycle(frag_r)
    if seed is None:
        seed_vec, origin = find_seed(frag_r, basis)
    else:
        seed_vec = parse_seed(seed, len(frame0))
        origin = "given"
        if not seed_is_valid(frag_r, seed_vec):
            raise FrameError("supplied seed has nonzero overlap with a fragment")
    cols = [dense.apply_pauli(p, seed_vec) for p in frag_r]
    B = np.stack(cols, axis=1)
    if not dense.is_close(dense.dagger(B) @ B, np.eye(len(cols))):
        raise FrameError("orientation states are not orthonormal")
    return LocalFrame(code, frame0, system0, frag_r, frag_s, seed_vec, B, cocycle, origin)


def compute_cocycle(fragments: Sequence[Pauli]) -> np.ndarray:
    """Exponents k with U_R^g U_R^h = i^k U_R^{gh}; fragments are indexed by group bits."""
    size = len(fragments)
    c = np.zeros((size, size), dtype=np.int64)
    for g in range(size):
        for h in range(size):
            prod = multiply(fragments[g], fragments[h])
            target = fragments[g ^ h]
            if prod.key() != target.key():
                raise FrameError("fragments do not close under multiplication")
            c[g, h] = (prod.phase - target.phase) % 4
    return c


def reconstruct(frame: LocalFrame, g: int) -> Pauli:
    """Place U_R^g and U_S^g back on their qubits."""
    n = frame.code.n
    letters = ["I"] * n
    for q, ch in zip(frame.frame_qubits, frame.fragments_R[g].letters):
        letters[q] = ch
    for q, ch in zip(frame.system_qubits, frame.fragments_S[g].letters):
        letters[q] = ch
    base = parse("".join(letters))
    return base.scaled(frame.fragments_R[g].phase + frame.fragments_S[g].phase)


# reductions ----------------------------------------------------------

def page_wootters_reduce(frame: LocalFrame, state: np.ndarray, g: int) -> np.ndarray:
    """sqrt|G| (<g| (x) I) Pi |state>."""
    projected = project_state(frame.code, state)
    if np.linalg.norm(projected) < 1e-8:
        raise FrameError("state has no overlap with the code space")
    M = frame.to_rs(projected)
    return np.sqrt(frame.order) * (np.conj(frame.ket(g)) @ M)


def page_wootters_map(frame: LocalFrame, g: int) -> np.ndarray:
    """The reduction as a 2^k x 2^n matrix."""
    dense.check_cap(frame.code.n, dense.MATRIX_CAP, "matrix")
    Pi = code_projector(frame.code)
    bra = np.kron(np.conj(frame.ket(g)), np.eye(1 << frame.k))
    return np.sqrt(frame.order) * bra @ frame.to_rs_operator(Pi)


def page_wootters_lift(frame: LocalFrame, reduced: np.ndarray, g: int) -> np.ndarray:
    """Adjoint of the reduction: sqrt|G| Pi (|g> (x) reduced)."""
    v = frame.from_rs(np.outer(frame.ket(g), reduced))
    return np.sqrt(frame.order) * project_state(frame.code, v)


def disentangler_rs(frame: LocalFrame) -> np.ndarray:
    dense.check_cap(frame.code.n, dense.MATRIX_CAP, "matrix")
    dim_s = 1 << frame.k
    T = np.zeros((1 << frame.code.n,) * 2, dtype=complex)
    for g in range(frame.order):
        proj = np.outer(frame.ket(g), np.conj(frame.ket(g)))
        us = dense.pauli_matrix(frame.fragments_S[g]) if frame.k else np.eye(dim_s)
        T += np.kron(proj, dense.dagger(us))
    return T


def disentangler(frame: LocalFrame) -> np.ndarray:
    """T_R = sum_g |g><g| (x) (U_S^g)^dagger in natural qubit order."""
    if frame._T is None:
        frame._T = frame.embed_operator(disentangler_rs(frame))
    return frame._T


def apply_disentangler(frame: LocalFrame, state: np.ndarray, inverse: bool = False) -> np.ndarray:
    """T_R (or its inverse) on a vector without building the matrix."""
    M = frame.to_rs(state)
    B = frame.orientation_basis
    coeffs = dense.dagger(B) @ M
    for g in range(frame.order):
        us = frame.fragments_S[g]
        op = us if inverse else us.dagger()
        if frame.k:
            coeffs[g] = dense.apply_pauli(op, coeffs[g])
        else:
            coeffs[g] = coeffs[g] * (1j ** op.phase)
    return frame.from_rs(B @ coeffs)


def relational_observable(frame: LocalFrame, f_s: np.ndarray, g: int) -> np.ndarray:
    """|G| Pi (|g><g| (x) f_S) Pi in natural order."""
    Pi = code_projector(frame.code)
    proj = np.outer(frame.ket(g), np.conj(frame.ket(g)))
    inner = frame.embed_operator(np.kron(proj, np.asarray(f_s)))
    return frame.order * Pi @ inner @ Pi


def encoding_isometry(frame: LocalFrame) -> np.ndarray:
    """V = T^dagger (|1>_R (x) I_S); column j encodes logical basis state j."""
    dk = 1 << frame.k
    cols = []
    for j in range(dk):
        ej = np.zeros(dk, dtype=complex)
        ej[j] = 1
        cols.append(apply_disentangler(frame, frame.from_rs(np.outer(frame.ready_state(), ej)), inverse=True))
    return np.stack(cols, axis=1)


@dataclass
class PointerRecord:
    error: Pauli
    pointer: np.ndarray      # |w(E)>_R
    logical: np.ndarray      # L_S(E)


@dataclass
class DisentanglerRecovery:
    records: List[PointerRecord]
    gram: np.ndarray
    orthonormal: bool
    unitary: bool


def recover_via_disentangler(frame: LocalFrame, errors: Sequence, tol: float = dense.TOL) -> DisentanglerRecovery:
    """Split T_R E V into |w(E)> (x) L_S(E) for each error E."""
    from .error_frames import kl_check
    errs = [parse(e) if isinstance(e, str) else e for e in errors]
    verdict = kl_check(frame.code, errs)
    if not verdict.correctable:
        raise FrameError(f"error set fails the Knill-Laflamme test: {verdict.diagnostics}")
    V = encoding_isometry(frame)
    dk = 1 << frame.k
    records = []
    unitary = True
    for e in errs:
        cols = [apply_disentangler(frame, dense.apply_pauli(e, V[:, j])) for j in range(dk)]
        rs = np.stack([frame.to_rs(c) for c in cols], axis=2)  # (R, S, logical)
        u, s, vh = np.linalg.svd(rs.reshape(frame.order, dk * dk))
        if s.size > 1 and s[1] > tol:
            raise FrameError(f"T E V does not factor for {e}")
        w = u[:, 0]
        L = (s[0] * vh[0]).reshape(dk, dk)
        j = int(np.argmax(np.abs(w) > np.abs(w).max() - 1e-9))
        phase = abs(w[j]) / w[j]
        w, L = w * phase, L / phase
        unitary &= dense.is_close(dense.dagger(L) @ L, np.eye(dk), tol)
        records.append(PointerRecord(e, w, L))
    W = np.stack([r.pointer for r in records], axis=1)
    gram = dense.dagger(W) @ W
    return DisentanglerRecovery(records, gram, dense.is_close(gram, np.eye(len(records)), tol), unitary)


def qrf_transform(frame_a: LocalFrame, frame_b: LocalFrame, reduced: np.ndarray, g: int, g2: int) -> np.ndarray:
    """R_b^{g2} composed with the adjoint of R_a^g, on reduced states."""
    if frame_a.code is not frame_b.code:
        if [str(p) for p in frame_a.code.generators] != [str(p) for p in frame_b.code.generators]:
            raise FrameError("frames belong to different codes")
    return page_wootters_reduce(frame_b, page_wootters_lift(frame_a, reduced, g), g2)


# no-go scan ----------------------------------------------------------

def frame_local_paulis(frame: LocalFrame, tol: float = dense.TOL) -> List[Pauli]:
    """Pauli strings E with E Pi = e_R (x) I_S for some nonzero e_R (tiny n only)."""
    n = frame.code.n
    dense.check_cap(n, 4, "no-go scan")
    Pi = code_projector(frame.code)
    dk = 1 << frame.k
    hits = []
    for x in range(1 << n):
        for z in range(1 << n):
            E = Pauli(n, x, z)
            M = frame.to_rs_operator(dense.pauli_matrix(E) @ Pi)
            t = M.reshape(frame.order, dk, frame.order, dk)
            e_r = np.einsum("asbs->ab", t) / dk
            if np.max(np.abs(e_r)) > tol and dense.is_close(np.kron(e_r, np.eye(dk)), M, tol):
                hits.append(E)
    return hits
