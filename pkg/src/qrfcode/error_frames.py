"""Knill-Laflamme tests, maximal error sets and the frames they generate.

An error set is stored as a list of Pauli strings. For Pauli sets the
Knill-Laflamme coefficients are exact: E_i^dagger E_j either leaves its
sector (C = 0), lands in the stabilizer group (C = i^k) or is a logical
operator, in which case Pi E_i^dagger E_j Pi is not a multiple of Pi.
Dense routes reproduce every verdict from matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import dense, gf2
from .group_kit import chi
from .pauli_core import Pauli, multiply, parse
from .stabilizer import (StabilizerCode, code_projector, codewords, isotype_projector,
                         sector_bits, symplectic_matrix)

DENSE_FACTOR_CAP = 10
ENUM_BUDGET = 200_000


class ErrorSetError(ValueError):
    pass


def _as_paulis(errors: Sequence) -> List[Pauli]:
    return [parse(e) if isinstance(e, str) else e for e in errors]


@dataclass
class KLResult:
    C: np.ndarray                 # nan where Pi E_i^dag E_j Pi is not proportional to Pi
    correctable: bool
    sectors: List[int]
    diagnostics: Dict[str, list] = field(default_factory=dict)

    @property
    def rank(self) -> Optional[int]:
        if not self.correctable:
            return None
        return int(np.linalg.matrix_rank(self.C, tol=1e-9))


def kl_check(code: StabilizerCode, errors: Sequence) -> KLResult:
    """Exact Knill-Laflamme test for Pauli errors; matrices go to the dense route."""
    if any(isinstance(e, np.ndarray) for e in errors):
        return kl_check_dense(code, errors)
    errs = _as_paulis(errors)
    for e in errs:
        if e.n != code.n:
            raise ValueError(f"error {e} has {e.n} qubits, code has {code.n}")
    size = len(errs)
    C = np.zeros((size, size), dtype=complex)
    sectors = [sector_bits(code, e) for e in errs]
    violations, same_sector, degenerate = [], [], []
    for i in range(size):
        for j in range(size):
            if sectors[i] != sectors[j]:
                continue
            prod = multiply(errs[i].dagger(), errs[j])
            hit = code.lookup(prod)
            if i < j:
                same_sector.append((i, j))
            if hit is None:
                C[i, j] = np.nan
                if i < j:
                    violations.append((i, j, str(prod)))
            else:
                C[i, j] = 1j ** hit[1]
                if i < j:
                    degenerate.append((i, j))
    diag = {"violations": violations, "same_sector": same_sector, "degenerate": degenerate}
    return KLResult(C, not violations, sectors, diag)


def kl_check_dense(code: StabilizerCode, errors: Sequence, tol: float = dense.TOL) -> KLResult:
    """Knill-Laflamme test from matrices: Pi A^dag B Pi against c Pi."""
    Pi = code_projector(code)
    dk = 1 << code.k
    mats = [dense.pauli_matrix(parse(e) if isinstance(e, str) else e) if not isinstance(e, np.ndarray)
            else np.asarray(e, dtype=complex) for e in errors]
    size = len(mats)
    C = np.zeros((size, size), dtype=complex)
    violations = []
    for i, j in itertools.product(range(size), repeat=2):
        block = Pi @ dense.dagger(mats[i]) @ mats[j] @ Pi
        c = np.trace(block) / dk
        if dense.max_dev(block, c * Pi) > tol:
            C[i, j] = np.nan
            if i < j:
                violations.append((i, j, "not proportional"))
        else:
            C[i, j] = c
    return KLResult(C, not violations, [], {"violations": violations})


# maximal sets ----------------------------------------------------------

@dataclass
class ErrorSet:
    code: StabilizerCode
    errors: List[Pauli]
    kl_matrix: np.ndarray
    sector_of: List[int]

    def by_sector(self) -> Dict[int, Pauli]:
        return {s: e for s, e in zip(self.sector_of, self.errors)}

    @property
    def is_maximal(self) -> bool:
        return sorted(self.sector_of) == list(range(self.code.order))


def _candidate_strings(n: int):
    """Phase-free strings by weight, then by letters, without materializing all 4^n."""
    for w in range(n + 1):
        for support in itertools.combinations(range(n), w):
            for letters in itertools.product("XYZ", repeat=w):
                text = ["I"] * n
                for q, ch in zip(support, letters):
                    text[q] = ch
                yield w, "".join(text)


def _destabilizers(code: StabilizerCode) -> List[Pauli]:
    """D_i anticommuting with generator i only."""
    n = code.n
    S = symplectic_matrix(code.generators)
    # commutation with v is S @ swap(v)
    swapped = np.concatenate([S[:, n:], S[:, :n]], axis=1)
    out = []
    for i in range(code.m):
        rhs = np.zeros(code.m, dtype=np.uint8)
        rhs[i] = 1
        v = gf2.solve(swapped, rhs)
        xs, zs = gf2.bits_to_int(v[:n]), gf2.bits_to_int(v[n:])
        out.append(Pauli(n, xs, zs))
    return out


def _sector_representative(code: StabilizerCode, bits: int, destab: List[Pauli]) -> Pauli:
    out = Pauli(code.n)
    for i in range(code.m):
        if (bits >> i) & 1:
            out = multiply(out, destab[i])
    return out.unsigned()


def build_maximal_error_set(code: StabilizerCode, seed_errors: Sequence = ()) -> ErrorSet:
    """One error per sector with I first, keeping the seeds and filling the rest by weight."""
    seeds = _as_paulis(seed_errors)
    base = [Pauli(code.n)] + seeds
    verdict = kl_check(code, base)
    if not verdict.correctable:
        i, j, prod = verdict.diagnostics["violations"][0]
        raise ErrorSetError(f"seeds are inconsistent: {base[i]} and {base[j]} differ by the logical {prod}")
    chosen: Dict[int, Pauli] = {}
    for e, s in zip(base, verdict.sectors):
        chosen.setdefault(s, e)  # later members of a sector are stabilizer-equivalent
    budget = ENUM_BUDGET
    for _, text in _candidate_strings(code.n):
        if len(chosen) == code.order or budget == 0:
            break
        budget -= 1
        p = parse(text)
        chosen.setdefault(sector_bits(code, p), p)
    if len(chosen) < code.order:
        destab = _destabilizers(code)
        for s in range(code.order):
            if s not in chosen:
                chosen[s] = _sector_representative(code, s, destab)
    order = sorted(chosen)
    errs = [chosen[s] for s in order]
    C = kl_check(code, errs).C
    return ErrorSet(code, errs, C, order)


def error_set(code: StabilizerCode, errors: Sequence) -> ErrorSet:
    errs = _as_paulis(errors)
    verdict = kl_check(code, errs)
    return ErrorSet(code, errs, verdict.C, verdict.sectors)


# equivalence -----------------------------------------------------------

def _logical_class(code: StabilizerCode, p: Pauli) -> Tuple[int, ...]:
    """Coset of a centralizer element modulo the stabilizer group, phase dropped."""
    v = gf2.coset_canonical(p.symplectic(), symplectic_matrix(code.generators))
    return tuple(int(b) for b in v)


def span_classes(code: StabilizerCode, errors: Sequence) -> Dict[int, set]:
    """Per sector, the logical classes E_0^dag E relative to a fixed reference string.

    The reference is a fixed product of destabilizers, so the result depends only
    on the span of the code restrictions {E Pi}.
    """
    out: Dict[int, set] = {}
    for e in _as_paulis(errors):
        s = sector_bits(code, e)
        out.setdefault(s, set()).add(_logical_class(code, multiply(_sector_reference(code, s), e)))
    return out


def _sector_reference(code: StabilizerCode, s: int) -> Pauli:
    return _sector_representative(code, s, _destabilizers(code))


def equivalent(code: StabilizerCode, set_a: Sequence, set_b: Sequence) -> bool:
    """Equal spans of code restrictions, decided from sectors and logical cosets."""
    return span_classes(code, set_a) == span_classes(code, set_b)


def equivalent_dense(code: StabilizerCode, set_a: Sequence, set_b: Sequence, tol: float = 1e-9) -> bool:
    """Equal spans of {E Pi}, decided by matrix ranks."""
    Pi = code_projector(code)

    def stack(errs):
        return np.stack([(dense.pauli_matrix(e) @ Pi).reshape(-1) for e in _as_paulis(errs)], axis=1)

    A, B = stack(set_a), stack(set_b)
    ra = np.linalg.matrix_rank(A, tol=tol)
    rb = np.linalg.matrix_rank(B, tol=tol)
    rab = np.linalg.matrix_rank(np.concatenate([A, B], axis=1), tol=tol)
    return ra == rb == rab


# frame fields ----------------------------------------------------------

@dataclass
class FrameFields:
    """R_chi = eta_chi E_chi restricted to the code space, one per character."""

    code: StabilizerCode
    errors: Dict[int, Pauli]
    eta: Dict[int, complex]

    def matrix(self, character: int) -> np.ndarray:
        """R_chi Pi as a matrix on the full space."""
        Pi = code_projector(self.code)
        return self.eta[character] * dense.pauli_matrix(self.errors[character]) @ Pi

    def apply(self, character: int, state: np.ndarray) -> np.ndarray:
        return self.eta[character] * dense.apply_pauli(self.errors[character], state)

    def gauge_transformed(self, g: int) -> "FrameFields":
        """Fields conjugated by U^g; only the phases chi(g) change."""
        u = self.code.element(g)
        errs = {c: multiply(multiply(u, e), u.dagger()) for c, e in self.errors.items()}
        return FrameFields(self.code, errs, dict(self.eta))


def frame_fields_from_errors(es: ErrorSet, eta: Optional[Dict[int, complex]] = None) -> FrameFields:
    if not es.is_maximal:
        raise ErrorSetError("frame fields need one error in every sector")
    verdict = kl_check(es.code, es.errors)
    if not verdict.correctable:
        raise ErrorSetError(f"error set is not correctable: {verdict.diagnostics['violations']}")
    fields = es.by_sector()
    if es.code.lookup(fields[0]) is None:
        raise ErrorSetError("the trivial sector must act as the identity on the code")
    phases = {c: 1.0 + 0j for c in fields}
    if eta:
        phases.update(eta)
    return FrameFields(es.code, fields, phases)


def recovery_kraus(fields: FrameFields) -> List[np.ndarray]:
    """Operation elements R_chi^{-1} P_chi of the dressing recovery."""
    code = fields.code
    out = []
    for c in range(code.order):
        R = fields.matrix(c)
        out.append(dense.dagger(R) @ isotype_projector(code, c))
    return out


def dressing_recovery(fields: FrameFields, rho: np.ndarray) -> np.ndarray:
    """O_R(rho) = sum_chi R_chi^{-1} P_chi rho P_chi R_chi."""
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for K in recovery_kraus(fields):
        out += K @ rho @ dense.dagger(K)
    return out


# error-generated factorization -----------------------------------------

@dataclass
class NonlocalFactorization:
    """t_R sends R_chi |phi_j> to |j> (x) |chi>; row index is j * |G| + chi."""

    fields: FrameFields
    t: np.ndarray
    codewords: List[np.ndarray]

    @property
    def code(self) -> StabilizerCode:
        return self.fields.code

    @property
    def order(self) -> int:
        return self.code.order

    def gauge_ket(self, character: int) -> np.ndarray:
        v = np.zeros(self.order, dtype=complex)
        v[character] = 1
        return v

    def group_ket(self, g: int) -> np.ndarray:
        """|g> = |G|^{-1/2} sum_chi chi(g) |chi>."""
        return np.array([chi(c, g) for c in range(self.order)], dtype=complex) / np.sqrt(self.order)

    def group_basis(self) -> np.ndarray:
        return np.stack([self.group_ket(g) for g in range(self.order)], axis=1)

    def regular_rep(self, g: int) -> np.ndarray:
        """U_R^g on the gauge factor: diagonal chi(g) in the charge basis."""
        return np.diag([complex(chi(c, g)) for c in range(self.order)])

    def factorize(self, op: np.ndarray) -> np.ndarray:
        return self.t @ op @ dense.dagger(self.t)

    def identification(self, j: int, character: int) -> np.ndarray:
        """The physical state identified with |phi_j> (x) |chi>."""
        return self.fields.apply(character, self.codewords[j])

    def table(self, tol: float = dense.TOL) -> List[dict]:
        """Basis identifications with their nonzero physical amplitudes."""
        n = self.code.n
        rows = []
        for j in range(len(self.codewords)):
            for c in range(self.order):
                v = self.identification(j, c)
                amps = {format(b, f"0{n}b"): complex(v[b]) for b in np.nonzero(np.abs(v) > tol)[0]}
                rows.append({"logical": j, "charge": c, "state": amps})
        return rows


def build_factorization(es: ErrorSet, eta: Optional[Dict[int, complex]] = None) -> NonlocalFactorization:
    fields = frame_fields_from_errors(es, eta)
    code = es.code
    dense.check_cap(code.n, DENSE_FACTOR_CAP, "factorization")
    words = codewords(code)
    dim = 1 << code.n
    t = np.zeros((dim, dim), dtype=complex)
    for j, w in enumerate(words):
        for c in range(code.order):
            t[j * code.order + c] = np.conj(fields.apply(c, w))
    if not dense.is_close(t @ dense.dagger(t), np.eye(dim)):
        raise ErrorSetError("identified states are not orthonormal")
    return NonlocalFactorization(fields, t, words)


def covariance_deviation(fact: NonlocalFactorization) -> float:
    """max_g |t U^g t^dag - I (x) U_R^g|."""
    code = fact.code
    dk = 1 << code.k
    worst = 0.0
    for g in range(code.order):
        lhs = fact.factorize(dense.pauli_matrix(code.element(g)))
        worst = max(worst, dense.max_dev(lhs, np.kron(np.eye(dk), fact.regular_rep(g))))
    return worst


def gauge_only_action(fact: NonlocalFactorization, op: np.ndarray, tol: float = dense.TOL):
    """(True, A) when t op Pi t^dag = I_pn (x) A, else (False, A)."""
    code = fact.code
    dk, dg = 1 << code.k, code.order
    M = fact.factorize(op @ code_projector(code))
    A = np.einsum("iaib->ab", M.reshape(dk, dg, dk, dg)) / dk
    return dense.is_close(np.kron(np.eye(dk), A), M, tol), A


def kl_via_factorization(code: StabilizerCode, errors: Sequence, tol: float = dense.TOL) -> bool:
    """Correctability read off from a factorization built out of the set itself.

    Left multiplication by the first error's inverse leaves the KL test unchanged
    and puts I in the set; the first member of each sector then seeds a maximal
    set, and the set passes iff every E Pi acts on the gauge factor alone.
    """
    errs = _as_paulis(errors)
    if not errs:
        return True
    f0 = errs[0].dagger()
    shifted = [multiply(f0, e) for e in errs]
    reps: Dict[int, Pauli] = {}
    for e in shifted:
        reps.setdefault(sector_bits(code, e), e)
    seeds = [e for s, e in reps.items() if s != 0]
    es = build_maximal_error_set(code, seeds)
    fact = build_factorization(es)
    return all(gauge_only_action(fact, dense.pauli_matrix(e), tol)[0] for e in shifted)


def frame_algebra_dim(es: ErrorSet, tol: float = 1e-9) -> int:
    """Dimension of span{E_i Pi E_j}."""
    Pi = code_projector(es.code)
    mats = [dense.pauli_matrix(e) for e in es.errors]
    vecs = [(a @ Pi @ dense.dagger(b)).reshape(-1) for a in mats for b in mats]
    return int(np.linalg.matrix_rank(np.stack(vecs, axis=1), tol=tol))


def diagonal_projector_deviation(es: ErrorSet) -> float:
    """max_chi |E_chi Pi E_chi^dag - P_chi|."""
    Pi = code_projector(es.code)
    worst = 0.0
    for s, e in es.by_sector().items():
        E = dense.pauli_matrix(e)
        worst = max(worst, dense.max_dev(E @ Pi @ dense.dagger(E), isotype_projector(es.code, s)))
    return worst
