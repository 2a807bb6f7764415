"""Exact simulation of local-measurement attacks on the hiding states.

Alice and Bob measure each pair in a Pauli basis, possibly choosing later
bases from earlier (publicly announced) outcomes.  Given the Bell symbol of
a pair, the joint outcome law depends only on the two bases: for equal bases
the product of the two +/-1 outcomes has mean equal to a fixed correlation
(``CORRELATION`` below), for different bases the outcomes are independent
and uniform.  Enumerating the decision tree with these exact rationals gives
the full transcript distribution.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import rational
from .bellcode import SINGLET, BellString, CapExceeded, parity_class_size, singlet_count
from .povmopt import mutual_info_bound
from .states import BellDiagonalState

BASES = ("X", "Y", "Z")
TRANSCRIPT_CAP = 5
INFO_TOL = 1e-9

# <P (x) P> for each Bell symbol (Phi+, Phi-, Psi+, Psi-) and basis P
CORRELATION = {
    0: {"X": 1, "Y": -1, "Z": 1},
    1: {"X": -1, "Y": 1, "Z": 1},
    2: {"X": 1, "Y": 1, "Z": -1},
    3: {"X": -1, "Y": -1, "Z": -1},
}


class BlockRecord(NamedTuple):
    alice_basis: str | None
    bob_basis: str | None
    alice_outcome: int
    bob_outcome: int


Transcript = tuple[BlockRecord, ...]
BasisRule = Callable[[int, Transcript], Sequence[tuple[Fraction, str | None, str | None]]]


@dataclass(frozen=True)
class MeasurementStrategy:
    """Per-pair basis rule: given the pair index and the public history, a distribution over basis pairs.

    Both parties see every announced basis and outcome, so any rule of the
    history is implementable with local measurements and classical messages.
    """

    name: str
    rule: BasisRule
    description: str = ""

    def options(self, block: int, history: Transcript):
        opts = tuple((Fraction(p), a, b) for p, a, b in self.rule(block, history))
        if sum(p for p, _, _ in opts) != 1:
            raise ValueError(f"strategy {self.name!r} basis probabilities do not sum to 1")
        for _, a, b in opts:
            if a not in (None, *BASES) or b not in (None, *BASES):
                raise ValueError(f"strategy {self.name!r} chose an unknown basis")
        return opts


def _outcomes(basis: str | None) -> tuple[int, ...]:
    return (0,) if basis is None else (1, -1)


def record_probability(sym: int, rec: BlockRecord) -> Fraction:
    """P(outcomes | Bell symbol, bases) for one pair."""
    a_basis, b_basis, a, b = rec
    if a_basis is None and b_basis is None:
        return Fraction(1)
    if a_basis is None or b_basis is None:
        return Fraction(1, 2)
    if a_basis == b_basis:
        return Fraction(1 + CORRELATION[sym][a_basis] * a * b, 4)
    return Fraction(1, 4)


def _expand(strategy: MeasurementStrategy, n: int, init, step):
    """Walk the decision tree pair by pair; ``step(acc, block, record, p)`` returns the new accumulator or None."""
    frontier: dict[Transcript, object] = {(): init}
    for block in range(n):
        nxt: dict[Transcript, object] = {}
        for prefix, acc in frontier.items():
            for p, a_basis, b_basis in strategy.options(block, prefix):
                if p == 0:
                    continue
                for a in _outcomes(a_basis):
                    for b in _outcomes(b_basis):
                        rec = BlockRecord(a_basis, b_basis, a, b)
                        new = step(acc, block, rec, p)
                        if new is not None:
                            nxt[prefix + (rec,)] = new
        frontier = nxt
    return frontier


def outcome_distribution(strategy: MeasurementStrategy, state: BellDiagonalState) -> dict[Transcript, Fraction]:
    """Exact transcript distribution for an arbitrary Bell-diagonal state."""
    if state.n > TRANSCRIPT_CAP:
        raise CapExceeded(f"n={state.n} exceeds transcript cap {TRANSCRIPT_CAP}")

    def step(acc, block, rec, p):
        out = {}
        for s, w in acc.items():
            v = w * p * record_probability(s[block], rec)
            if v:
                out[s] = v
        return out or None

    frontier = _expand(strategy, state.n, dict(state.weights), step)
    return {t: sum(acc.values(), Fraction(0)) for t, acc in frontier.items()}


def hiding_conditionals(strategy: MeasurementStrategy, n: int) -> dict[Transcript, tuple[Fraction, Fraction]]:
    """``P(transcript | b)`` for both hiding states at once.

    Carries, per transcript prefix, the summed likelihood over prefixes with
    an even and with an odd number of singlets, which is all the uniform
    parity mixtures need.
    """
    if n > TRANSCRIPT_CAP:
        raise CapExceeded(f"n={n} exceeds transcript cap {TRANSCRIPT_CAP}")

    def step(acc, block, rec, p):
        even, odd = acc
        e = p * sum((record_probability(sym, rec) for sym in range(4) if sym != SINGLET), Fraction(0))
        o = p * record_probability(SINGLET, rec)
        new = (even * e + odd * o, even * o + odd * e)
        return new if new != (0, 0) else None

    frontier = _expand(strategy, n, (Fraction(1), Fraction(0)), step)
    ne, no = parity_class_size(n, 0), parity_class_size(n, 1)
    return {t: (even / ne, odd / no) for t, (even, odd) in frontier.items()}


def ml_guess(p0: Fraction, p1: Fraction, prior: Fraction) -> int:
    """Maximum-likelihood bit; ties go to 0."""
    return 1 if (1 - prior) * p1 > prior * p0 else 0


def _mutual_information(joint: dict, prior: Fraction) -> float:
    """I(B; Y) in bits from ``{y: (P(y|0), P(y|1))}``."""
    pri = (float(prior), float(1 - prior))
    total = 0.0
    for p0, p1 in joint.values():
        py = pri[0] * float(p0) + pri[1] * float(p1)
        for pb, pyb in zip(pri, (float(p0), float(p1))):
            if pyb > 0:
                total += pb * pyb * math.log2(pyb / py)
    return max(total, 0.0)


@dataclass(frozen=True)
class InfoReport:
    strategy: str
    n: int
    prior: Fraction
    mutual_info_bits: float
    bound_bits: float
    guess_info_bits: float
    advantage: Fraction

    @property
    def satisfied(self) -> bool:
        return self.mutual_info_bits <= self.bound_bits + INFO_TOL

    def to_json(self) -> dict:
        return {
            "strategy": self.strategy,
            "n": self.n,
            "prior": rational.to_json(self.prior),
            "mutual_info_bits": self.mutual_info_bits,
            "bound_bits": self.bound_bits,
            "satisfied": self.satisfied,
            "guess_mutual_info_bits": self.guess_info_bits,
            "guess_advantage": rational.to_json(self.advantage),
        }


def mutual_information(strategy: MeasurementStrategy, n: int, prior=Fraction(1, 2)) -> InfoReport:
    """Information a strategy's full transcript carries about the hidden bit.

    ``prior`` is P(b = 0).  Also scores the maximum-likelihood guess: its
    information and its advantage ``p(0|0) + p(1|1) - 1``.
    """
    prior = Fraction(prior)
    bound = mutual_info_bound(n, prior)
    cond = hiding_conditionals(strategy, n)
    guessed = {0: [Fraction(0), Fraction(0)], 1: [Fraction(0), Fraction(0)]}
    for p0, p1 in cond.values():
        g = ml_guess(p0, p1, prior)
        guessed[g][0] += p0
        guessed[g][1] += p1
    advantage = guessed[0][0] + guessed[1][1] - 1
    return InfoReport(
        strategy=strategy.name,
        n=n,
        prior=prior,
        mutual_info_bits=_mutual_information(cond, prior),
        bound_bits=bound,
        guess_info_bits=_mutual_information({g: tuple(v) for g, v in guessed.items()}, prior),
        advantage=advantage,
    )


def bell_unlock(s: BellString) -> int:
    """Joint Bell measurement: parity of the singlet count."""
    return singlet_count(s) % 2


@dataclass(frozen=True)
class StrategyTranscript:
    records: Transcript
    guess: int


def simulate(strategy: MeasurementStrategy, s: BellString, prior=Fraction(1, 2), seed: int = 0) -> StrategyTranscript:
    """One seeded run of ``strategy`` on the Bell string ``s``, with the maximum-likelihood guess."""
    rng = np.random.default_rng(seed)
    history: Transcript = ()
    for block, sym in enumerate(s):
        opts = strategy.options(block, history)
        k = rng.choice(len(opts), p=[float(p) for p, _, _ in opts])
        _, a_basis, b_basis = opts[k]
        recs = [BlockRecord(a_basis, b_basis, a, b) for a in _outcomes(a_basis) for b in _outcomes(b_basis)]
        probs = np.array([float(record_probability(sym, r)) for r in recs])
        history = history + (recs[rng.choice(len(recs), p=probs / probs.sum())],)
    p0, p1 = hiding_conditionals(strategy, len(s)).get(history, (Fraction(0), Fraction(0)))
    return StrategyTranscript(history, ml_guess(p0, p1, Fraction(prior)))


# --- built-in strategies ---------------------------------------------------


def _fixed(basis: str) -> BasisRule:
    return lambda block, history: ((1, basis, basis),)


def _matched_random(block, history):
    return tuple((Fraction(1, 3), p, p) for p in BASES)


def _adaptive(block, history):
    # switch to X after an anticorrelated Z result, otherwise stay in Z
    if history and history[-1].alice_basis == "Z" and history[-1].alice_outcome != history[-1].bob_outcome:
        return ((1, "X", "X"),)
    return ((1, "Z", "Z"),)


def _mismatched(block, history):
    return ((1, "Z", "X"),)


def _silent(block, history):
    return ((1, None, None),)


def built_in_strategies() -> list[MeasurementStrategy]:
    return [
        MeasurementStrategy("all-z", _fixed("Z"), "both measure every pair in Z"),
        MeasurementStrategy("all-x", _fixed("X"), "both measure every pair in X"),
        MeasurementStrategy("all-y", _fixed("Y"), "both measure every pair in Y"),
        MeasurementStrategy("matched-random-basis", _matched_random, "shared uniformly random basis per pair"),
        MeasurementStrategy("adaptive-zx", _adaptive, "Z, switching to X after an anticorrelated Z result"),
        MeasurementStrategy("mismatched-zx", _mismatched, "Alice measures Z, Bob measures X"),
        MeasurementStrategy("no-measurement", _silent, "measure nothing; constant guess"),
    ]


def get_strategy(name: str) -> MeasurementStrategy:
    for strat in built_in_strategies():
        if strat.name == name:
            return strat
    raise KeyError(f"unknown strategy {name!r}; choose from {[s.name for s in built_in_strategies()]}")
