"""Stabilizer codes: group tables, projectors, syndromes and encodings.

Group element ``g`` (an int) names the product of the generators whose bit
is set, with generator i at bit ``1 << i``. Characters use the same
encoding, so the sector of an error is the bit vector of generators it
anticommutes with.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import dense, gf2
from .group_kit import Character, chi, from_signs
from .pauli_core import Pauli, commutes, multiply, parse

TABLE_CAP = 16
LOGICAL_ENUM_CAP = 7


class CodeError(ValueError):
    pass


def _as_pauli(p) -> Pauli:
    return parse(p) if isinstance(p, str) else p


def symplectic_matrix(paulis: Sequence[Pauli]) -> np.ndarray:
    if not paulis:
        return np.zeros((0, 0), dtype=np.uint8)
    return np.array([p.symplectic() for p in paulis], dtype=np.uint8)


def symplectic_inner(a: Pauli, b: Pauli) -> int:
    return 0 if commutes(a, b) else 1


@dataclass
class StabilizerCode:
    n: int
    generators: List[Pauli]
    name: str = ""
    logical_z: List[Pauli] = field(default_factory=list)
    logical_x: List[Pauli] = field(default_factory=list)
    _table: Optional[List[Pauli]] = field(default=None, repr=False)
    _lookup: Optional[Dict[Tuple[int, int], int]] = field(default=None, repr=False)

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def k(self) -> int:
        return self.n - self.m

    @property
    def order(self) -> int:
        return 1 << self.m

    def element(self, g: int) -> Pauli:
        """U^g with its exact phase."""
        if self._table is not None:
            return self._table[g]
        out = Pauli(self.n)
        for i, s in enumerate(self.generators):
            if (g >> i) & 1:
                out = multiply(out, s)
        return out

    @property
    def group_table(self) -> List[Pauli]:
        if self._table is None:
            if self.m > TABLE_CAP:
                raise CodeError(f"group table for m={self.m} exceeds cap {TABLE_CAP}")
            table = [Pauli(self.n)]
            for g in range(1, self.order):
                low = g & -g
                table.append(multiply(table[g ^ low], self.generators[low.bit_length() - 1]))
            self._table = table
        return self._table

    def lookup(self, p: Pauli) -> Optional[Tuple[int, int]]:
        """(g, k) with p = i^k U^g, or None if p's letters are not in the group."""
        if self.m <= TABLE_CAP:
            if self._lookup is None:
                self._lookup = {u.key(): g for g, u in enumerate(self.group_table)}
            g = self._lookup.get(p.key())
            if g is None:
                return None
        else:
            sol = gf2.solve(symplectic_matrix(self.generators).T, p.symplectic())
            if sol is None:
                return None
            g = sum(int(b) << i for i, b in enumerate(sol))
        return g, (p.phase - self.element(g).phase) % 4

    def sign_label(self, g: int) -> str:
        return "".join("-" if (g >> i) & 1 else "+" for i in range(self.m))

    def element_by_signs(self, label: str) -> Pauli:
        return self.element(from_signs(label))


def build_code(n: int, generators: Sequence, logical_z: Sequence = (),
               logical_x: Sequence = (), name: str = "") -> StabilizerCode:
    gens = [_as_pauli(s) for s in generators]
    for s in gens:
        if s.n != n:
            raise CodeError(f"generator {s} has {s.n} qubits, expected {n}")
        if not s.is_hermitian:
            raise CodeError(f"generator {s} is not Hermitian")
        if s.x == 0 and s.z == 0:
            raise CodeError(f"generator {s} is proportional to the identity")
    for i, j in itertools.combinations(range(len(gens)), 2):
        if not commutes(gens[i], gens[j]):
            raise CodeError(f"generators {gens[i]} and {gens[j]} anticommute")
    if gens and gf2.rank(symplectic_matrix(gens)) < len(gens):
        raise CodeError("generators are dependent (symplectic rank deficit)")
    code = StabilizerCode(n, gens, name)
    if code.m <= TABLE_CAP:
        for g, u in enumerate(code.group_table):
            if u.x == 0 and u.z == 0 and u.phase != 0:
                raise CodeError(f"group element {code.sign_label(g)} equals {u}")
    lz = [_as_pauli(p) for p in logical_z]
    lx = [_as_pauli(p) for p in logical_x]
    if not lz and not lx:
        lz, lx = logical_operators(code)
    _check_logicals(code, lz, lx)
    code.logical_z, code.logical_x = lz, lx
    return code


def _check_logicals(code: StabilizerCode, lz: List[Pauli], lx: List[Pauli]) -> None:
    if len(lz) != code.k or len(lx) != code.k:
        raise CodeError(f"need {code.k} logical Z and X operators")
    for p in lz + lx:
        if not p.is_hermitian:
            raise CodeError(f"logical {p} is not Hermitian")
        for s in code.generators:
            if not commutes(p, s):
                raise CodeError(f"logical {p} anticommutes with {s}")
    for i in range(code.k):
        for j in range(code.k):
            if not commutes(lz[i], lz[j]) or not commutes(lx[i], lx[j]):
                raise CodeError("logical operators of one type must commute")
            if commutes(lz[i], lx[j]) != (i != j):
                raise CodeError(f"logical pair ({i}, {j}) has the wrong commutation")


def load_code(spec) -> StabilizerCode:
    """Build from a dict, a JSON file path or a bundled catalog name."""
    if not isinstance(spec, dict):
        path = Path(spec)
        if not path.exists() and path.suffix != ".json":
            root = os.environ.get("QRFCODE_CATALOG")
            path = (Path(root) if root else Path(__file__).parent / "catalog") / f"{spec}.json"
        with open(path) as fh:
            spec = json.load(fh)
    return build_code(spec["n"], spec["generators"], spec.get("logical_z", ()),
                      spec.get("logical_x", ()), spec.get("name", ""))


# logical operators -----------------------------------------------------

def _span_basis(code: StabilizerCode, extra: Sequence[Pauli]) -> np.ndarray:
    rows = [p.symplectic() for p in list(code.generators) + list(extra)]
    return np.array(rows, dtype=np.uint8) if rows else np.zeros((0, 2 * code.n), dtype=np.uint8)


def _candidates(n: int):
    for w in range(1, n + 1):
        for support in itertools.combinations(range(n), w):
            for letters in itertools.product("XYZ", repeat=w):
                s = ["I"] * n
                for q, ch in zip(support, letters):
                    s[q] = ch
                yield parse("".join(s))


def logical_operators(code: StabilizerCode) -> Tuple[List[Pauli], List[Pauli]]:
    """k logical pairs, lowest weight first, ties broken by support then letters."""
    if code.k == 0:
        return [], []
    if code.n <= LOGICAL_ENUM_CAP:
        return _logicals_by_enumeration(code)
    return _logicals_by_reduction(code)


def _in_centralizer(code: StabilizerCode, p: Pauli) -> bool:
    return all(commutes(p, s) for s in code.generators)


def _logicals_by_enumeration(code: StabilizerCode):
    lz: List[Pauli] = []
    lx: List[Pauli] = []
    cands = [p for p in _candidates(code.n) if _in_centralizer(code, p)]
    for i in range(code.k):
        span = _span_basis(code, lz + lx)
        z = next(p for p in cands
                 if not gf2.in_rowspace(p.symplectic(), span)
                 and all(commutes(p, q) for q in lz + lx))
        x = next(p for p in cands
                 if not commutes(p, z)
                 and all(commutes(p, q) for q in lz + lx))
        lz.append(z)
        lx.append(x)
    return lz, lx


def _logicals_by_reduction(code: StabilizerCode):
    n = code.n
    gens = symplectic_matrix(code.generators)
    # centralizer = kernel of the symplectic form against the generators
    swapped = np.concatenate([gens[:, n:], gens[:, :n]], axis=1)
    basis = gf2.kernel(swapped)

    def to_pauli(v):
        return Pauli(n, gf2.bits_to_int(v[:n]), gf2.bits_to_int(v[n:]))

    def form(a, b):
        return int((a[:n] @ b[n:] + a[n:] @ b[:n]) % 2)

    span = gens.copy()
    pool = []
    for v in basis:
        if not gf2.in_rowspace(v, span):
            pool.append(v.copy())
            span = np.vstack([span, v])
    lz: List[Pauli] = []
    lx: List[Pauli] = []
    while pool:
        zv = pool.pop(0)
        j = next(i for i, w in enumerate(pool) if form(zv, w))
        xv = pool.pop(j)
        pool = [(u + form(u, xv) * zv + form(u, zv) * xv) % 2 for u in pool]
        lz.append(to_pauli(zv))
        lx.append(to_pauli(xv))
    return lz, lx


# syndromes and sectors -------------------------------------------------

def syndrome(code: StabilizerCode, e: Pauli, generator_subset: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    e = _as_pauli(e)
    if e.n != code.n:
        raise ValueError(f"error has {e.n} qubits, code has {code.n}")
    idx = range(code.m) if generator_subset is None else generator_subset
    return tuple(1 if commutes(e, code.generators[i]) else -1 for i in idx)


def sector_bits(code: StabilizerCode, e: Pauli) -> int:
    return sum(1 << i for i, s in enumerate(syndrome(code, e)) if s < 0)


def classify_sector(code: StabilizerCode, e: Pauli) -> Character:
    return Character(code.m, sector_bits(code, _as_pauli(e)))


# dense objects ---------------------------------------------------------

def isotype_projector(code: StabilizerCode, character: int = 0) -> np.ndarray:
    """P_chi = (1/|G|) sum_g chi(g) U^g as a matrix (group-sum route)."""
    dense.check_cap(code.n, dense.MATRIX_CAP, "matrix")
    a = character.bits if isinstance(character, Character) else character
    dim = 1 << code.n
    out = np.zeros((dim, dim), dtype=complex)
    for g in range(code.order):
        out += chi(a, g) * dense.pauli_matrix(code.element(g))
    return out / code.order


def code_projector(code: StabilizerCode) -> np.ndarray:
    return isotype_projector(code, 0)


def project_state(code: StabilizerCode, state: np.ndarray, character: int = 0) -> np.ndarray:
    """P_chi applied to a vector via the product of (1 + s_i S_i)/2."""
    dense.check_cap(code.n, dense.STATE_CAP)
    a = character.bits if isinstance(character, Character) else character
    v = np.asarray(state, dtype=complex)
    for i, s in enumerate(code.generators):
        sign = -1 if (a >> i) & 1 else 1
        v = 0.5 * (v + sign * dense.apply_pauli(s, v))
    return v


def apply_group_average(code: StabilizerCode, state: np.ndarray, character: int = 0) -> np.ndarray:
    """(1/|G|) sum_g chi(g) U^g |state> by summing the group (reference route)."""
    dense.check_cap(code.n, dense.STATE_CAP)
    a = character.bits if isinstance(character, Character) else character
    v = np.asarray(state, dtype=complex)
    out = np.zeros_like(v)
    for g in range(code.order):
        out += chi(a, g) * dense.apply_pauli(code.element(g), v)
    return out / code.order


def encode_computational(code: StabilizerCode, logical_state) -> np.ndarray:
    """C_comp: logical amplitudes (length 2^k) to a code state."""
    dense.check_cap(code.n, dense.STATE_CAP)
    amps = np.asarray(logical_state, dtype=complex)
    if amps.shape != (1 << code.k,):
        raise ValueError(f"expected {1 << code.k} logical amplitudes")
    if not np.any(np.abs(amps) > 0):
        raise ValueError("zero logical vector")
    zero = logical_zero(code)
    out = np.zeros(1 << code.n, dtype=complex)
    for j, c in enumerate(amps):
        if c == 0:
            continue
        v = zero
        for i in range(code.k):
            # logical qubit 1 is the most significant bit of j
            if (j >> (code.k - 1 - i)) & 1:
                v = dense.apply_pauli(code.logical_x[i], v)
        out = out + c * v
    return out


def logical_zero(code: StabilizerCode) -> np.ndarray:
    """Joint +1 state of stabilizers and logical Zs, positive on its first basis state."""
    full = build_stateprep(code)
    for b in range(1 << code.n):
        v = dense.basis_state(code.n, b)
        for s in full:
            v = 0.5 * (v + dense.apply_pauli(s, v))
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            v = v / nrm
            return v * (abs(v[b]) / v[b])
    raise CodeError("no basis state overlaps the logical zero state")


def build_stateprep(code: StabilizerCode) -> List[Pauli]:
    return list(code.generators) + list(code.logical_z)


def codewords(code: StabilizerCode) -> List[np.ndarray]:
    return [encode_computational(code, dense.basis_state(code.k, j)) for j in range(1 << code.k)]
