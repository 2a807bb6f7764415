"""Hiding ``k`` bits in ``k`` independent blocks, and the block-size scaling rule."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bellcode import BellString
from .locc import bell_unlock
from .prep import draw_parity_string, sample_rng
from .states import BellDiagonalState, hiding_state

LOG_BASE = 2


@dataclass(frozen=True)
class MultibitEncoding:
    """Bit ``i`` hidden in block ``i``, an independent ``hiding_state(n, bits[i])``.

    Block states are built on demand (``block_state``) since ``n`` may be far
    beyond the enumeration cap; sampled strings are stored when present.
    """

    k: int
    n: int
    bits: tuple[int, ...]
    strings: tuple[BellString, ...] | None = None

    def block_state(self, i: int) -> BellDiagonalState:
        return hiding_state(self.n, self.bits[i])

    @property
    def qubits_per_share(self) -> int:
        return self.k * self.n

    def to_json(self) -> dict:
        if self.strings is not None:
            blocks = [{"bit": b, "string": str(s)} for b, s in zip(self.bits, self.strings)]
        else:
            blocks = [{"bit": b, "n": self.n, "parity": "odd" if b else "even"} for b in self.bits]
        return {"k": self.k, "n": self.n, "bits": list(self.bits), "blocks": blocks}

    @classmethod
    def from_json(cls, doc: dict) -> "MultibitEncoding":
        bits = tuple(int(b) for b in doc["bits"])
        strings = None
        if doc["blocks"] and all("string" in blk for blk in doc["blocks"]):
            strings = tuple(BellString.parse(blk["string"]) for blk in doc["blocks"])
        enc = cls(int(doc["k"]), int(doc["n"]), bits, strings)
        if enc.k != len(bits) or (strings is not None and len(strings) != enc.k):
            raise ValueError("encoding block count does not match k")
        return enc


def encode(bits, n: int) -> MultibitEncoding:
    bits = tuple(int(b) for b in bits)
    if not bits:
        raise ValueError("need at least one bit")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    if n < 1:
        raise ValueError("n must be positive")
    return MultibitEncoding(len(bits), n, bits)


def sample(encoding: MultibitEncoding, seed: int) -> MultibitEncoding:
    """Draw one Bell string per block; block ``i`` uses its own stream ``(seed, i)``."""
    strings = tuple(draw_parity_string(encoding.n, b, sample_rng(seed, i)) for i, b in enumerate(encoding.bits))
    return MultibitEncoding(encoding.k, encoding.n, encoding.bits, strings)


def unlock_all(encoding: MultibitEncoding) -> tuple[int, ...]:
    if encoding.strings is None:
        raise ValueError("encoding has no sampled strings to measure")
    return tuple(bell_unlock(s) for s in encoding.strings)


def block_size_terms(k: int, epsilon: float) -> dict[str, float]:
    if k < 1:
        raise ValueError("k must be at least 1")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie strictly between 0 and 1, got {epsilon}")
    return {
        "2k": 2.0 * k,
        "log k": math.log2(k),
        "log log e": math.log2(math.log2(math.e)),
        "log 1/epsilon": -math.log2(epsilon),
    }


def required_block_size(k: int, epsilon: float) -> int:
    """``ceil(2k + log k + log log e + log 1/epsilon)``, base-2 logs.

    This is the large-``k`` asymptotic form, used as guidance rather than a
    finite-``k`` guarantee.
    """
    return math.ceil(sum(block_size_terms(k, epsilon).values()))


def random_bits(k: int, seed: int) -> tuple[int, ...]:
    return tuple(int(b) for b in np.random.default_rng(seed).integers(0, 2, size=k))
