"""The group Z_2^m, its characters and the scalar Fourier transform.

Group elements and characters are both length-m bit vectors packed into an
int. Bit i (value ``1 << i``) is the exponent of the i-th generator, so the
first generator is the least significant bit. The pairing is
chi_a(g) = (-1)^(a . g).

Sign labels such as ``"+-"`` list one character per generator, in order,
with ``-`` meaning exponent 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Sequence

import numpy as np

TABLE_CAP = 10


def parity(v: int) -> int:
    return bin(v).count("1") & 1


def chi(a: int, g: int) -> int:
    """Character value (-1)^(a.g) as an int."""
    return -1 if parity(a & g) else 1


def from_signs(label: str) -> int:
    bits = 0
    for i, ch in enumerate(label):
        if ch == "-":
            bits |= 1 << i
        elif ch != "+":
            raise ValueError(f"bad sign label {label!r}")
    return bits


def to_signs(bits: int, m: int) -> str:
    return "".join("-" if (bits >> i) & 1 else "+" for i in range(m))


def from_bit_list(values: Sequence[int]) -> int:
    return sum((int(b) & 1) << i for i, b in enumerate(values))


def to_bit_list(bits: int, m: int) -> list:
    return [(bits >> i) & 1 for i in range(m)]


@dataclass(frozen=True)
class GroupElement:
    m: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.m:
            raise ValueError("bits wider than m")

    @classmethod
    def from_signs(cls, label: str) -> "GroupElement":
        return cls(len(label), from_signs(label))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        _same_rank(self.m, other.m)
        return GroupElement(self.m, self.bits ^ other.bits)

    def inverse(self) -> "GroupElement":
        return self

    @property
    def signs(self) -> str:
        return to_signs(self.bits, self.m)


@dataclass(frozen=True)
class Character:
    m: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.m:
            raise ValueError("bits wider than m")

    @classmethod
    def from_signs(cls, label: str) -> "Character":
        return cls(len(label), from_signs(label))

    def __call__(self, g: GroupElement) -> int:
        return chi_eval(self, g)

    def __mul__(self, other: "Character") -> "Character":
        _same_rank(self.m, other.m)
        return Character(self.m, self.bits ^ other.bits)

    @property
    def is_trivial(self) -> bool:
        return self.bits == 0


def _same_rank(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"rank mismatch: {a} vs {b}")


def chi_eval(c: Character, g: GroupElement) -> int:
    _same_rank(c.m, g.m)
    return chi(c.bits, g.bits)


def elements(m: int) -> Iterable[GroupElement]:
    return (GroupElement(m, b) for b in range(1 << m))


def characters(m: int) -> Iterable[Character]:
    return (Character(m, b) for b in range(1 << m))


def character_matrix(m: int) -> np.ndarray:
    """Integer matrix M[a, g] = chi_a(g)."""
    idx = np.arange(1 << m)
    pc = np.bitwise_count(idx[:, None] & idx[None, :]) & 1
    return (1 - 2 * pc.astype(np.int64))


@dataclass(frozen=True)
class GroupFunction:
    """A complex function on Z_2^m stored as a length 2^m vector indexed by bits."""

    m: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (1 << self.m,):
            raise ValueError("a group function needs one value per element")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_dict(cls, m: int, values: Dict[int, complex]) -> "GroupFunction":
        vec = np.zeros(1 << m, dtype=complex)
        for g, v in values.items():
            vec[g.bits if isinstance(g, GroupElement) else g] = v
        if len(values) != 1 << m:
            raise ValueError("incomplete domain")
        return cls(m, vec)

    def __call__(self, g) -> complex:
        return self.values[g.bits if isinstance(g, (GroupElement, Character)) else g]

    def norm2(self) -> float:
        return float(np.vdot(self.values, self.values).real)


def fourier(f: GroupFunction) -> GroupFunction:
    """F[f](chi) = 2^{-m/2} sum_g f(g) chi(g)."""
    m = f.m
    return GroupFunction(m, character_matrix(m) @ f.values / np.sqrt(1 << m))


def fourier_inverse(f: GroupFunction) -> GroupFunction:
    # real symmetric and involutive up to normalization
    return fourier(f)


def character_orthogonality_table(m: int) -> np.ndarray:
    """(1/2^m) sum_g chi(g) eta(g) for every pair, as exact integers."""
    if m > TABLE_CAP:
        raise ValueError(f"rank {m} exceeds table cap {TABLE_CAP}")
    M = character_matrix(m)
    gram = M @ M.T
    assert np.all(gram % (1 << m) == 0)
    return gram // (1 << m)
