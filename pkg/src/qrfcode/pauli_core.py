"""Phase-tracked Pauli strings in symplectic form.

A Pauli string on n qubits is stored as two integer bit masks ``x`` and
``z`` plus an exponent ``phase`` so that the operator equals

    i**phase * P_1 (x) P_2 (x) ... (x) P_n

with letter (x_j, z_j) = (0,0) -> I, (1,0) -> X, (1,1) -> Y, (0,1) -> Z.
Qubit 1 (the leftmost letter) sits in the most significant bit, which is
also how the dense module orders computational basis states. Text I/O is
1-based, everything else is 0-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

_PREFIXES = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_FORMAT_PREFIX = {0: "", 1: "+i", 2: "-", 3: "-i"}
_TEXT_RE = re.compile(r"^([+-]?i?)([IXYZ]*)$")


class PauliParseError(ValueError):
    """Malformed Pauli text. ``offset`` is the first bad character."""

    def __init__(self, text: str, offset: int, reason: str):
        super().__init__(f"{reason} at offset {offset} in {text!r}")
        self.text = text
        self.offset = offset


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class Pauli:
    """An n-qubit Pauli operator with an exact i**k prefactor."""

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative qubit count")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise ValueError("bit masks wider than n")
        object.__setattr__(self, "phase", self.phase % 4)

    # construction ----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "Pauli":
        return cls(n)

    @classmethod
    def parse(cls, text: str) -> "Pauli":
        return parse(text)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "Pauli":
        """Single-letter operator on 1-based ``qubit``."""
        if not 1 <= qubit <= n:
            raise IndexError(f"qubit {qubit} out of range 1..{n}")
        letters = ["I"] * n
        letters[qubit - 1] = letter
        return parse("".join(letters))

    @classmethod
    def from_letters(cls, letters: str, phase: int = 0) -> "Pauli":
        p = parse(letters)
        return cls(p.n, p.x, p.z, phase)

    # views -----------------------------------------------------------

    def bit(self, q: int) -> int:
        """Mask for 0-based qubit ``q``."""
        return 1 << (self.n - 1 - q)

    def letter(self, q: int) -> str:
        b = self.bit(q)
        return "IZXY"[(2 if self.x & b else 0) + (1 if self.z & b else 0)]

    @property
    def letters(self) -> str:
        return "".join(self.letter(q) for q in range(self.n))

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def support(self) -> tuple[int, ...]:
        """0-based indices of non-identity letters."""
        return tuple(q for q in range(self.n) if (self.x | self.z) & self.bit(q))

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0 and self.phase == 0

    @property
    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    def unsigned(self) -> "Pauli":
        """Same letters, prefactor dropped."""
        return Pauli(self.n, self.x, self.z, 0)

    def key(self) -> tuple[int, int]:
        return (self.x, self.z)

    def symplectic(self) -> list[int]:
        """(x_1..x_n | z_1..z_n) as a 0/1 list."""
        xs = [1 if self.x & self.bit(q) else 0 for q in range(self.n)]
        zs = [1 if self.z & self.bit(q) else 0 for q in range(self.n)]
        return xs + zs

    # algebra ---------------------------------------------------------

    def __mul__(self, other: "Pauli") -> "Pauli":
        return multiply(self, other)

    def __neg__(self) -> "Pauli":
        return Pauli(self.n, self.x, self.z, self.phase + 2)

    def scaled(self, k: int) -> "Pauli":
        """Multiply by i**k."""
        return Pauli(self.n, self.x, self.z, self.phase + k)

    def dagger(self) -> "Pauli":
        # letters are Hermitian, so only the prefactor conjugates
        return Pauli(self.n, self.x, self.z, -self.phase)

    def commutes(self, other: "Pauli") -> bool:
        return commutes(self, other)

    def tensor(self, other: "Pauli") -> "Pauli":
        """Kronecker product, self on the left."""
        return Pauli(self.n + other.n,
                     (self.x << other.n) | other.x,
                     (self.z << other.n) | other.z,
                     self.phase + other.phase)

    def restrict(self, qubits: Iterable[int], keep_phase: bool = False) -> "Pauli":
        """Letters on the given 0-based qubits, in the given order."""
        qubits = list(qubits)
        x = z = 0
        for q in qubits:
            b = self.bit(q)
            x = (x << 1) | (1 if self.x & b else 0)
            z = (z << 1) | (1 if self.z & b else 0)
        return Pauli(len(qubits), x, z, self.phase if keep_phase else 0)

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"Pauli({format_pauli(self)!r})"


def parse(text: str) -> Pauli:
    """Read ``[+|-|+i|-i]LETTERS``; an empty letter string is the 0-qubit identity."""
    if not isinstance(text, str):
        raise PauliParseError(str(text), 0, "expected a string")
    s = text.strip()
    m = _TEXT_RE.match(s)
    if m is None:
        prefix_len = 0
        while prefix_len < len(s) and s[prefix_len] in "+-i":
            prefix_len += 1
        bad = prefix_len
        while bad < len(s) and s[bad] in "IXYZ":
            bad += 1
        reason = "bad sign prefix" if s[:prefix_len] not in _PREFIXES else "unexpected character"
        raise PauliParseError(text, bad if reason == "unexpected character" else 0, reason)
    prefix, body = m.groups()
    if prefix not in _PREFIXES:
        raise PauliParseError(text, 0, "bad sign prefix")
    n = len(body)
    x = z = 0
    for ch in body:
        x <<= 1
        z <<= 1
        if ch in "XY":
            x |= 1
        if ch in "ZY":
            z |= 1
    return Pauli(n, x, z, _PREFIXES[prefix])


def format_pauli(p: Pauli) -> str:
    return _FORMAT_PREFIX[p.phase] + p.letters


def _check_sizes(a: Pauli, b: Pauli) -> None:
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")


def product_phase(ax: int, az: int, bx: int, bz: int) -> int:
    """Exponent k with (letters a)(letters b) = i**k (letters a xor b)."""
    a_x = ax & ~az
    a_y = ax & az
    a_z = az & ~ax
    b_x = bx & ~bz
    b_y = bx & bz
    b_z = bz & ~bx
    # XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i
    plus = (a_x & b_y) | (a_y & b_z) | (a_z & b_x)
    minus = (a_y & b_x) | (a_z & b_y) | (a_x & b_z)
    return (_popcount(plus) - _popcount(minus)) % 4


def multiply(a: Pauli, b: Pauli) -> Pauli:
    """Exact operator product ab."""
    _check_sizes(a, b)
    k = product_phase(a.x, a.z, b.x, b.z)
    return Pauli(a.n, a.x ^ b.x, a.z ^ b.z, a.phase + b.phase + k)


def commutes(a: Pauli, b: Pauli) -> bool:
    _check_sizes(a, b)
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) % 2 == 0


def truncate(p: Pauli, drop: Iterable[int]) -> Pauli:
    """Set the letters at 1-based indices ``drop`` to I and reset the prefactor to +1."""
    mask = 0
    for q in drop:
        if not 1 <= q <= p.n:
            raise IndexError(f"qubit {q} out of range 1..{p.n}")
        mask |= 1 << (p.n - q)
    return Pauli(p.n, p.x & ~mask, p.z & ~mask, 0)


def all_paulis(n: int):
    """Every phase-free n-qubit string, in (x, z) counting order."""
    for x in range(1 << n):
        for z in range(1 << n):
            yield Pauli(n, x, z)


def paulis_by_weight(n: int):
    """Phase-free strings ordered by weight, then by text."""
    return sorted(all_paulis(n), key=lambda p: (p.weight, p.letters))
