"""Two-bit labels for products of Bell states and the local Pauli action on them.

Each Bell state is a two-bit symbol::

    Phi+ -> 00    Phi- -> 01    Psi+ -> 10    Psi- (singlet) -> 11

and a single-qubit Pauli applied to Alice's half acts on the label by XOR
(I -> 00, Z -> 01, X -> 10, Y -> 11).  A word of ``n`` symbols is packed
into an integer with symbol 0 in the most significant pair, so integer order
and lexicographic order coincide.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator

PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS = 0, 1, 2, 3
SINGLET = PSI_MINUS

SYMBOL_TEXT = ("00", "01", "10", "11")
BELL_NAMES = ("Phi+", "Phi-", "Psi+", "Psi-")
PAULI_CODES = {"I": 0, "Z": 1, "X": 2, "Y": 3}

ENUMERATION_CAP = 10


class CapExceeded(ValueError):
    """Requested size is beyond an enumeration or dense-matrix cap."""


class _TwoBitWord(tuple):
    __slots__ = ()

    def __new__(cls, symbols: Iterable[int]):
        symbols = tuple(int(x) for x in symbols)
        if not symbols:
            raise ValueError(f"{cls.__name__} needs at least one symbol")
        for x in symbols:
            if not 0 <= x <= 3:
                raise ValueError(f"symbol {x} is not a two-bit code")
        return super().__new__(cls, symbols)

    @classmethod
    def parse(cls, text: str):
        """Parse the dotted text form, e.g. ``"11.01.11"``."""
        parts = text.strip().split(".")
        try:
            return cls(SYMBOL_TEXT.index(p) for p in parts)
        except ValueError:
            raise ValueError(f"malformed {cls.__name__}: {text!r}") from None

    @classmethod
    def from_index(cls, index: int, n: int):
        if not 0 <= index < 4**n:
            raise ValueError(f"index {index} out of range for n={n}")
        return cls((index >> (2 * (n - 1 - i))) & 3 for i in range(n))

    @property
    def n(self) -> int:
        return len(self)

    @property
    def index(self) -> int:
        out = 0
        for x in self:
            out = (out << 2) | x
        return out

    def __str__(self) -> str:
        return ".".join(SYMBOL_TEXT[x] for x in self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r})"

    def __add__(self, other):
        return type(self)(tuple(self) + tuple(other))


class BellString(_TwoBitWord):
    """A product of ``n`` Bell states, one symbol per pair."""

    __slots__ = ()


class PauliString(_TwoBitWord):
    """Local Paulis on Alice's qubits, one two-bit code per pair."""

    __slots__ = ()

    @classmethod
    def from_letters(cls, letters: str) -> "PauliString":
        return cls(PAULI_CODES[c] for c in letters.upper())


def singlet_count(s: Iterable[int]) -> int:
    """Number of singlet (``11``) symbols."""
    return sum(1 for x in s if x == SINGLET)


def singlet_count_index(index: int, n: int) -> int:
    return sum(1 for i in range(n) if (index >> (2 * i)) & 3 == SINGLET)


def pauli_act(s: BellString, m: PauliString) -> BellString:
    if len(s) != len(m):
        raise ValueError(f"length mismatch: string has {len(s)} symbols, Pauli has {len(m)}")
    return BellString(a ^ b for a, b in zip(s, m))


def _check_cap(n: int, cap: int | None) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    cap = ENUMERATION_CAP if cap is None else cap
    if n > cap:
        raise CapExceeded(f"n={n} exceeds enumeration cap {cap}")


def iter_strings(n: int, cap: int | None = None) -> Iterator[BellString]:
    _check_cap(n, cap)
    for symbols in itertools.product(range(4), repeat=n):
        yield BellString(symbols)


def enumerate_strings(n: int, cap: int | None = None) -> list[BellString]:
    """All ``4**n`` strings in lexicographic order."""
    return list(iter_strings(n, cap))


def parity_class_size(n: int, parity: int) -> int:
    """Number of length-``n`` strings whose singlet count has the given parity."""
    if n < 1:
        raise ValueError("n must be positive")
    if parity not in (0, 1):
        raise ValueError("parity must be 0 (even) or 1 (odd)")
    if parity == 0:
        return (4**n + 2**n) // 2
    return (4**n - 2**n) // 2


def alternating_sum(n: int, cap: int | None = None) -> int:
    """Sum of ``(-1)**singlet_count(s)`` over all strings of length ``n``.

    Enumerated up to the cap, closed form ``2**n`` beyond it.
    """
    if n < 1:
        raise ValueError("n must be positive")
    limit = ENUMERATION_CAP if cap is None else cap
    if n > limit:
        return 2**n
    return sum(-1 if singlet_count_index(i, n) % 2 else 1 for i in range(4**n))
