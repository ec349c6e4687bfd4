"""Dual representations of the character group and gauge-fixing errors.

A dual representation assigns an operator Uhat^chi to each character with
U^g Uhat^chi = chi(g) Uhat^chi U^g. Its isotype projectors Phat_g are the
gauge-fixing projectors; unitary versions Ehat_g are assembled from a
maximal Pauli error set. Operators are dense matrices in natural qubit
order; a rep also carries Pauli strings when every member is one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import dense
from .error_frames import ErrorSet, FrameFields, NonlocalFactorization
from .group_kit import chi
from .qrf_local import FrameError, LocalFrame
from .pauli_core import Pauli, commutes, multiply
from .stabilizer import StabilizerCode, code_projector, isotype_projector


class DualityError(ValueError):
    pass


@dataclass
class DualRep:
    code: StabilizerCode
    ops: List[np.ndarray]                 # indexed by character bits
    paulis: Optional[List[Pauli]] = None
    source: str = ""

    @property
    def order(self) -> int:
        return len(self.ops)


def _recognize(code: StabilizerCode, ops: List[np.ndarray]) -> Optional[List[Pauli]]:
    out = []
    for op in ops:
        p = dense.match_pauli(op, code.n)
        if p is None:
            return None
        out.append(p)
    return out


def dual_rep_from_ops(code: StabilizerCode, ops: Sequence, source: str = "") -> DualRep:
    """Wrap operators (matrices, Paulis or text) given per character."""
    from .pauli_core import parse
    mats, paulis = [], []
    for op in ops:
        if isinstance(op, str):
            op = parse(op)
        if isinstance(op, Pauli):
            paulis.append(op)
            mats.append(dense.pauli_matrix(op))
        else:
            mats.append(np.asarray(op, dtype=complex))
    if len(mats) != code.order:
        raise DualityError(f"need {code.order} operators, got {len(mats)}")
    rec = paulis if len(paulis) == len(mats) else _recognize(code, mats)
    return DualRep(code, mats, rec, source)


def dual_rep_from_basis(frame: LocalFrame) -> DualRep:
    """Uhat^chi = sum_g chi(g) |g><g|_R (x) I_S."""
    B = frame.orientation_basis
    if not dense.is_close(dense.dagger(B) @ B, np.eye(frame.order)):
        raise FrameError("orientation basis is not orthonormal")
    ops = []
    for c in range(frame.order):
        diag = np.array([chi(c, g) for g in range(frame.order)], dtype=complex)
        on_r = B @ np.diag(diag) @ dense.dagger(B)
        ops.append(frame.embed_operator(np.kron(on_r, np.eye(1 << frame.k))))
    return DualRep(frame.code, ops, _recognize(frame.code, ops), "orientation basis")


# checks ----------------------------------------------------------------

@dataclass
class DualityVerdict:
    ok: bool
    violation: Optional[Tuple[int, int]] = None   # (g, chi)
    max_dev: float = 0.0


def check_duality(code: StabilizerCode, rep: DualRep, tol: float = dense.TOL,
                  exhaustive: bool = False) -> DualityVerdict:
    """Weyl relation on generator pairs (or on every pair)."""
    gs = range(code.order) if exhaustive else [1 << i for i in range(code.m)]
    cs = range(code.order) if exhaustive else [1 << i for i in range(code.m)]
    if rep.paulis is not None:
        for g in gs:
            u = code.element(g)
            for c in cs:
                expected = chi(c, g) == 1
                if commutes(u, rep.paulis[c]) != expected:
                    return DualityVerdict(False, (g, c), 2.0)
        return DualityVerdict(True)
    worst = 0.0
    for g in gs:
        U = dense.pauli_matrix(code.element(g))
        for c in cs:
            dev = dense.max_dev(U @ rep.ops[c], chi(c, g) * rep.ops[c] @ U)
            worst = max(worst, dev)
            if dev > tol:
                return DualityVerdict(False, (g, c), dev)
    return DualityVerdict(True, None, worst)


def rep_axiom_deviation(rep: DualRep) -> float:
    """Largest failure of Uhat^1 = I, Uhat^a Uhat^b = Uhat^(a^b) and Uhat^dag = Uhat."""
    dim = rep.ops[0].shape[0]
    worst = dense.max_dev(rep.ops[0], np.eye(dim))
    for a in range(rep.order):
        worst = max(worst, dense.max_dev(rep.ops[a], dense.dagger(rep.ops[a])))
        for b in range(rep.order):
            worst = max(worst, dense.max_dev(rep.ops[a] @ rep.ops[b], rep.ops[a ^ b]))
    return worst


def dual_projector(rep: DualRep, g: int) -> np.ndarray:
    """Phat_g = |G|^{-1} sum_chi chi(g) Uhat^chi."""
    out = np.zeros_like(rep.ops[0])
    for c, op in enumerate(rep.ops):
        out = out + chi(c, g) * op
    return out / rep.order


# gauge-fixing errors ---------------------------------------------------

def default_relabel(c: int, g: int) -> int:
    return g ^ c


def linear_relabel(columns: Sequence[int]) -> Callable[[int, int], int]:
    """h(chi, g) = g + A chi, where column i of A (as group bits) is columns[i]."""
    def h(c: int, g: int) -> int:
        out = g
        for i, col in enumerate(columns):
            if (c >> i) & 1:
                out ^= col
        return out
    return h


@dataclass
class GaugeFixErrorSet:
    rep: DualRep
    projectors: List[np.ndarray]
    unitaries: List[np.ndarray]
    relabel: np.ndarray            # relabel[chi, g] = h(chi, g)
    base_errors: List[Pauli] = field(default_factory=list)

    @property
    def code(self) -> StabilizerCode:
        return self.rep.code


def _relabel_table(order: int, h: Callable[[int, int], int]) -> np.ndarray:
    table = np.array([[h(c, g) for g in range(order)] for c in range(order)], dtype=np.int64)
    for g in range(order):
        if table[0, g] != g:
            raise DualityError(f"relabeling must fix the trivial character, h(1, {g}) = {table[0, g]}")
        if sorted(table[:, g]) != list(range(order)):
            raise DualityError(f"relabeling is not a bijection at g = {g}")
    return table


def gauge_fix_errors(rep: DualRep, base: ErrorSet, h: Optional[Callable[[int, int], int]] = None) -> GaugeFixErrorSet:
    """Ehat_g = sqrt|G| sum_chi Phat_{h(chi, g)} Pi E_chi."""
    code = rep.code
    if not base.is_maximal:
        raise DualityError("base error set must cover every sector once")
    by = base.by_sector()
    ident = by[0]
    if ident.x or ident.z or ident.phase:
        raise DualityError("the trivial-sector error must be I")
    if any(np.isnan(base.kl_matrix).ravel()):
        raise DualityError("base error set is not correctable")
    table = _relabel_table(code.order, h or default_relabel)
    Pi = code_projector(code)
    projs = [dual_projector(rep, g) for g in range(code.order)]
    errs = [dense.pauli_matrix(by[c]) for c in range(code.order)]
    unitaries = []
    for g in range(code.order):
        E = np.zeros_like(Pi)
        for c in range(code.order):
            E += projs[table[c, g]] @ Pi @ errs[c]
        unitaries.append(np.sqrt(code.order) * E)
    return GaugeFixErrorSet(rep, projs, unitaries, table, [by[c] for c in range(code.order)])


def gauge_fix_report(gs: GaugeFixErrorSet) -> Dict[str, float]:
    """Deviations for unitarity, Ehat Pi = sqrt|G| Phat Pi and both KL forms."""
    code = gs.code
    Pi = code_projector(code)
    size = code.order
    dim = Pi.shape[0]
    r = {"unitary": 0.0, "restriction": 0.0, "kl_projectors": 0.0, "kl_unitaries": 0.0,
         "orthogonal_projectors": 0.0, "covariance": 0.0}
    for g in range(size):
        E, P = gs.unitaries[g], gs.projectors[g]
        r["unitary"] = max(r["unitary"], dense.max_dev(dense.dagger(E) @ E, np.eye(dim)))
        r["restriction"] = max(r["restriction"], dense.max_dev(E @ Pi, np.sqrt(size) * P @ Pi))
        for g2 in range(size):
            delta = 1.0 if g == g2 else 0.0
            r["kl_projectors"] = max(r["kl_projectors"],
                                     dense.max_dev(Pi @ P @ gs.projectors[g2] @ Pi, delta / size * Pi))
            r["kl_unitaries"] = max(r["kl_unitaries"],
                                    dense.max_dev(Pi @ dense.dagger(E) @ gs.unitaries[g2] @ Pi, delta * Pi))
            r["orthogonal_projectors"] = max(r["orthogonal_projectors"],
                                             dense.max_dev(P @ gs.projectors[g2], delta * P))
            U = dense.pauli_matrix(code.element(g2))
            r["covariance"] = max(r["covariance"], dense.max_dev(U @ P @ U, gs.projectors[g ^ g2]))
    return r


class AmbiguousSyndrome(ValueError):
    def __init__(self, weights):
        super().__init__(f"state spreads over several dual sectors: {np.round(weights, 6).tolist()}")
        self.weights = weights


def dual_syndrome(gs: GaugeFixErrorSet, state: np.ndarray, tol: float = 1e-8) -> int:
    """The g whose dual projector holds the (normalized) state."""
    v = np.asarray(state, dtype=complex)
    v = v / np.linalg.norm(v)
    weights = np.array([np.real(np.vdot(v, P @ v)) for P in gs.projectors])
    g = int(np.argmax(weights))
    if abs(weights[g] - 1) > tol:
        raise AmbiguousSyndrome(weights)
    return g


def dual_recovery_kraus(gs: GaugeFixErrorSet) -> List[np.ndarray]:
    return [dense.dagger(E) @ P for E, P in zip(gs.unitaries, gs.projectors)]


def dual_recovery(gs: GaugeFixErrorSet, rho: np.ndarray) -> np.ndarray:
    """sum_g Ehat_g^dag Phat_g rho Phat_g Ehat_g."""
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for K in dual_recovery_kraus(gs):
        out += K @ rho @ dense.dagger(K)
    return out


# electric side and twirls ---------------------------------------------

def electric_recovery(code: StabilizerCode, errors_by_sector: Dict[int, Pauli], rho: np.ndarray) -> np.ndarray:
    """sum_chi E_chi^dag P_chi rho P_chi E_chi."""
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for c in range(code.order):
        K = dense.dagger(dense.pauli_matrix(errors_by_sector[c])) @ isotype_projector(code, c)
        out += K @ rho @ dense.dagger(K)
    return out


def group_twirl(code: StabilizerCode, rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for g in range(code.order):
        U = dense.pauli_matrix(code.element(g))
        out += U @ rho @ dense.dagger(U)
    return out / code.order


def charge_measurement(code: StabilizerCode, rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for c in range(code.order):
        P = isotype_projector(code, c)
        out += P @ rho @ P
    return out


def dual_twirl(rep: DualRep, rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for op in rep.ops:
        out += op @ rho @ dense.dagger(op)
    return out / rep.order


def dual_charge_measurement(rep: DualRep, rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for g in range(rep.order):
        P = dual_projector(rep, g)
        out += P @ rho @ P
    return out


def complementarity_deviation(rep: DualRep) -> float:
    """How far charge states twirled by the other group are from I / dim."""
    code = rep.code
    dim = 1 << code.n
    target = np.eye(dim) / dim
    worst = 0.0
    for a in range(code.order):
        charged = code.order / dim * isotype_projector(code, a)
        worst = max(worst, dense.max_dev(dual_twirl(rep, charged), target))
        dual_charged = code.order / dim * dual_projector(rep, a)
        worst = max(worst, dense.max_dev(group_twirl(code, dual_charged), target))
    return worst


def blanket_recovery_min_eigenvalue(code: StabilizerCode) -> float:
    """Smallest eigenvalue of I - |G| Pi; negative whenever n > k."""
    Pi = code_projector(code)
    M = np.eye(Pi.shape[0]) - code.order * Pi
    return float(np.min(np.linalg.eigvalsh((M + dense.dagger(M)) / 2)))


# duals induced by frame fields ----------------------------------------

def dual_rep_from_frame_fields(fields: FrameFields) -> DualRep:
    """Uhat^chi = sum_eta R_{chi eta} R_eta^{-1} P_eta."""
    code = fields.code
    if sorted(fields.errors) != list(range(code.order)):
        raise DualityError("frame fields must cover every character")
    Pi = code_projector(code)
    mats = {c: dense.pauli_matrix(e) for c, e in fields.errors.items()}
    ops = []
    for c in range(code.order):
        op = np.zeros_like(Pi)
        for eta in range(code.order):
            phase = fields.eta[c ^ eta] * np.conj(fields.eta[eta])
            op += phase * mats[c ^ eta] @ Pi @ dense.dagger(mats[eta]) @ isotype_projector(code, eta)
        ops.append(op)
    return DualRep(code, ops, _recognize(code, ops), "frame fields")


def dual_rep_from_factorization(fact: NonlocalFactorization) -> DualRep:
    """Uhat^chi = t^dag (I (x) shift_chi) t, the same rep read off the factorization."""
    code = fact.code
    dk = 1 << code.k
    ops = []
    for c in range(code.order):
        shift = np.zeros((code.order, code.order))
        for eta in range(code.order):
            shift[c ^ eta, eta] = 1
        ops.append(dense.dagger(fact.t) @ np.kron(np.eye(dk), shift) @ fact.t)
    return DualRep(code, ops, _recognize(code, ops), "factorization")


def induced_gauge_fix_restrictions(fields: FrameFields) -> List[np.ndarray]:
    """Ehat_g Pi = |G|^{-1/2} sum_chi chi(g) R_chi Pi."""
    code = fields.code
    out = []
    for g in range(code.order):
        acc = sum(chi(c, g) * fields.matrix(c) for c in range(code.order))
        out.append(acc / np.sqrt(code.order))
    return out


# Fourier relation between the two bases --------------------------------

def fourier_basis_relation(fact: NonlocalFactorization, tol: float = dense.TOL) -> Dict[str, float]:
    """Compare gauge-factor charge and dual-charge bases built from physical operators."""
    code = fact.code
    size = code.order
    dk = 1 << code.k
    rep = dual_rep_from_frame_fields(fact.fields)
    report = {"charge_projectors": 0.0, "dual_projectors": 0.0, "overlap_modulus": 0.0,
              "fourier_kets": 0.0, "product_rule": 0.0}

    def gauge_part(op):
        M = fact.factorize(op)
        A = np.einsum("iaib->ab", M.reshape(dk, size, dk, size)) / dk
        return A, dense.max_dev(np.kron(np.eye(dk), A), M)

    for c in range(size):
        A, dev = gauge_part(isotype_projector(code, c))
        ket = fact.gauge_ket(c)
        report["charge_projectors"] = max(report["charge_projectors"], dev, dense.max_dev(A, np.outer(ket, ket)))
    for g in range(size):
        B, dev = gauge_part(dual_projector(rep, g))
        gk = fact.group_ket(g)
        report["dual_projectors"] = max(report["dual_projectors"], dev, dense.max_dev(B, np.outer(gk, gk.conj())))
        # eigenvector of the measured dual projector, compared with the Fourier ket up to phase
        w, v = np.linalg.eigh(B)
        top = v[:, -1]
        report["fourier_kets"] = max(report["fourier_kets"], 1 - abs(np.vdot(top, gk)))
        for c in range(size):
            report["overlap_modulus"] = max(report["overlap_modulus"],
                                            abs(abs(top[c]) - 1 / np.sqrt(size)))
            lhs = fact.factorize(isotype_projector(code, c) @ dual_projector(rep, g))
            rhs = chi(c, g) / np.sqrt(size) * np.kron(np.eye(dk), np.outer(fact.gauge_ket(c), gk.conj()))
            report["product_rule"] = max(report["product_rule"], dense.max_dev(lhs, rhs))
    return report
