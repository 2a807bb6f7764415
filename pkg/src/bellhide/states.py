"""The two hiding ensembles as exact Bell-diagonal distributions.

``hiding_state(n, b)`` is the uniform mixture of all length-``n`` Bell
strings whose singlet count has parity ``b``.  The same states are rebuilt
by the one-block recursion (:func:`recurrence_state`) and described in
Werner form ``a*I + c*H`` (:func:`werner_form`), where ``H`` is the partial
transpose of the ``n``-fold Phi+ projector.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

from . import rational
from .bellcode import (
    ENUMERATION_CAP,
    SINGLET,
    BellString,
    CapExceeded,
    iter_strings,
    parity_class_size,
    singlet_count,
)


@dataclass(frozen=True)
class BellDiagonalState:
    """Exact distribution over Bell strings of a fixed length.

    Only the support is stored; ``weight`` returns 0 elsewhere.
    """

    n: int
    weights: Mapping[BellString, Fraction] = field(repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        clean = {}
        for s, w in self.weights.items():
            s = s if isinstance(s, BellString) else BellString(s)
            w = Fraction(w)
            if len(s) != self.n:
                raise ValueError(f"string {s} does not have length {self.n}")
            if w < 0:
                raise ValueError(f"negative weight {w} on {s}")
            if w:
                clean[s] = clean.get(s, Fraction(0)) + w
        total = sum(clean.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        ordered = dict(sorted(clean.items(), key=lambda kv: kv[0].index))
        object.__setattr__(self, "weights", MappingProxyType(ordered))

    def weight(self, s) -> Fraction:
        if not isinstance(s, BellString):
            s = BellString.parse(s) if isinstance(s, str) else BellString(s)
        return self.weights.get(s, Fraction(0))

    @property
    def support(self) -> tuple[BellString, ...]:
        return tuple(self.weights)

    def tensor(self, other: "BellDiagonalState") -> "BellDiagonalState":
        """Product state with ``other`` appended as the highest-index blocks."""
        return BellDiagonalState(
            self.n + other.n,
            {s + t: w * v for s, w in self.weights.items() for t, v in other.weights.items()},
        )

    def mix(self, p: Fraction, other: "BellDiagonalState") -> "BellDiagonalState":
        """``p * self + (1 - p) * other``."""
        if self.n != other.n:
            raise ValueError("cannot mix states of different sizes")
        out: dict[BellString, Fraction] = {}
        for s, w in self.weights.items():
            out[s] = out.get(s, Fraction(0)) + p * w
        for s, w in other.weights.items():
            out[s] = out.get(s, Fraction(0)) + (1 - p) * w
        return BellDiagonalState(self.n, out)

    def to_json(self, bit: int | None = None) -> dict:
        doc = {"n": self.n}
        if bit is not None:
            doc["bit"] = bit
        doc["weights"] = [{"string": str(s), **rational.to_json(w)} for s, w in self.weights.items()]
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "BellDiagonalState":
        weights = {}
        for rec in doc["weights"]:
            s = BellString.parse(rec["string"])
            if s in weights:
                raise ValueError(f"duplicate string {s}")
            weights[s] = rational.from_json(rec)
        return cls(int(doc["n"]), weights)


@dataclass(frozen=True)
class WernerForm:
    """``identity_coeff * I + h_coeff * H`` on ``n`` Bell pairs."""

    n: int
    identity_coeff: Fraction
    h_coeff: Fraction

    @property
    def trace(self) -> Fraction:
        # Tr I = 4**n, Tr H = 1
        return self.identity_coeff * 4**self.n + self.h_coeff


def _check_bit(b: int) -> None:
    if b not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {b!r}")


def hiding_state(n: int, b: int, cap: int | None = None) -> BellDiagonalState:
    """Uniform mixture over strings whose singlet-count parity equals ``b``."""
    _check_bit(b)
    w = Fraction(1, parity_class_size(n, b))
    return BellDiagonalState(n, {s: w for s in iter_strings(n, cap) if singlet_count(s) % 2 == b})


def mixing_coefficients(n: int) -> tuple[Fraction, Fraction]:
    """``(q_n, p_n)``: probability of the singlet-appended branch for b=0 and b=1."""
    if n < 1:
        raise ValueError("n must be positive")
    q = Fraction(2 ** (n - 1) - 1, 2 * (2**n + 1))
    p = Fraction(2 ** (n - 1) + 1, 2 * (2**n - 1))
    return q, p


def recurrence_state(n: int, b: int, cap: int | None = None) -> BellDiagonalState:
    """Build ``hiding_state(n, b)`` by appending one block at a time.

    Even: ``q_n rho1(n-1) x singlet + (1-q_n) rho0(n-1) x rho0(1)``.
    Odd:  ``p_n rho0(n-1) x singlet + (1-p_n) rho1(n-1) x rho0(1)``.
    """
    _check_bit(b)
    limit = ENUMERATION_CAP if cap is None else cap
    if n > limit:
        raise CapExceeded(f"n={n} exceeds enumeration cap {limit}")
    single = (hiding_state(1, 0), hiding_state(1, 1))
    even, odd = single
    for k in range(2, n + 1):
        q, p = mixing_coefficients(k)
        even, odd = (
            odd.tensor(single[1]).mix(q, even.tensor(single[0])),
            even.tensor(single[1]).mix(p, odd.tensor(single[0])),
        )
    return odd if b else even


def werner_form(n: int, b: int) -> WernerForm:
    """Werner coefficients: ``(I + 2**n H)/(4**n + 2**n)`` for b=0, ``(I - 2**n H)/(4**n - 2**n)`` for b=1."""
    _check_bit(b)
    if n < 1:
        raise ValueError("n must be positive")
    sign = -1 if b else 1
    norm = 4**n + sign * 2**n
    return WernerForm(n, Fraction(1, norm), Fraction(sign * 2**n, norm))


def state_overlap(a: BellDiagonalState, b: BellDiagonalState) -> Fraction:
    """``Tr(a b)`` for two states diagonal in the same Bell basis."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    return sum((w * b.weight(s) for s, w in a.weights.items()), Fraction(0))


def singlet_point_mass(n: int = 1) -> BellDiagonalState:
    return BellDiagonalState(n, {BellString([SINGLET] * n): 1})
