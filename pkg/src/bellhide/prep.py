"""The hider's preparation procedures and their exact checks.

Two ways to make the hiding states with little entanglement:

* odd parity from a single singlet: flip a coin with bias ``p_k``; on 0
  emit an (unentangled) even block of size ``k-1`` followed by the singlet,
  on 1 recurse to size ``k-1`` and append an unentangled even single pair;
* even parity as ``U (x) U |0..0>|0..0>`` for a uniformly random Clifford ``U``.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import clifford
from .bellcode import SINGLET, BellString, singlet_count
from .densematrix import from_ab_order, realize, trace_distance
from .states import BellDiagonalState, hiding_state, mixing_coefficients

CLASSICAL = "classical"
RECURSIVE = "recursive"
CLIFFORD = "clifford"


@dataclass(frozen=True)
class PrepSample:
    bit: int
    string: BellString | None
    ebits_consumed: int
    coin_trace: tuple[tuple[Fraction, int], ...] = ()
    path: str = CLASSICAL
    stabilizer_pair: tuple[clifford.StabilizerState, clifford.StabilizerState] | None = field(default=None, repr=False)

    def to_json(self, seed: int, index: int) -> dict:
        rec = {"bit": self.bit, "path": self.path}
        if self.string is not None:
            rec["string"] = str(self.string)
        else:
            alice, bob = self.stabilizer_pair
            rec["stabilizers"] = {"alice": alice.to_json(), "bob": bob.to_json()}
        rec["ebits"] = self.ebits_consumed
        rec["seed"] = seed
        rec["index"] = index
        if self.coin_trace:
            rec["coins"] = [[str(bias), out] for bias, out in self.coin_trace]
        return rec


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index`` of the stream seeded by ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def draw_parity_string(n: int, parity: int, rng: np.random.Generator) -> BellString:
    """Uniform string of the requested singlet parity (rejection from uniform strings)."""
    while True:
        s = BellString(rng.integers(0, 4, size=n))
        if singlet_count(s) % 2 == parity:
            return s


def _odd_recipe(n: int, flip: Callable[[Fraction], int]):
    """Segments ``("even", size)`` / ``("singlet",)`` produced by the one-singlet recursion."""
    tail = []
    trace = []
    k = n
    while True:
        p = mixing_coefficients(k)[1]
        outcome = flip(p)
        trace.append((p, outcome))
        if outcome == 0:
            head = [("even", k - 1)] if k > 1 else []
            return head + [("singlet",)] + tail, tuple(trace)
        tail.insert(0, ("even", 1))
        k -= 1


def sample_recursive(n: int, b: int, seed: int | np.random.Generator) -> PrepSample:
    """One draw from ``hiding_state(n, b)``.

    ``b = 1`` uses the one-singlet recursion and consumes exactly one ebit;
    ``b = 0`` is a direct draw from the even class (an unentangled state).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if b not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if b == 0:
        return PrepSample(0, draw_parity_string(n, 0, rng), 0, path=CLASSICAL)

    def flip(p: Fraction) -> int:
        return 0 if rng.random() < p else 1

    segments, trace = _odd_recipe(n, flip)
    symbols: list[int] = []
    ebits = 0
    for seg in segments:
        if seg[0] == "singlet":
            symbols.append(SINGLET)
            ebits += 1
        else:
            symbols.extend(draw_parity_string(seg[1], 0, rng) if seg[1] else ())
    return PrepSample(1, BellString(symbols), ebits, trace, RECURSIVE)


def recursive_distribution(n: int, b: int) -> tuple[BellDiagonalState, dict[int, Fraction]]:
    """Exact output distribution of :func:`sample_recursive` by expanding every coin outcome.

    Returns the state and the distribution of ebits consumed.
    """
    if b == 0:
        return hiding_state(n, 0), {0: Fraction(1)}
    total: dict[BellString, Fraction] = {}
    ebit_dist: dict[int, Fraction] = {}
    # the recursion stops at the first 0; enumerate the number of leading 1s
    for ones in range(n):
        script = [1] * ones + [0]
        pos = iter(script)
        prob = Fraction(1)

        def flip(p: Fraction) -> int:
            nonlocal prob
            out = next(pos)
            prob *= p if out == 0 else 1 - p
            return out

        segments, _ = _odd_recipe(n, flip)
        if prob == 0:
            continue
        dist = {(): Fraction(1)}
        ebits = 0
        for seg in segments:
            if seg[0] == "singlet":
                block = {(SINGLET,): Fraction(1)}
                ebits += 1
            elif seg[1] == 0:
                continue
            else:
                block = {tuple(s): w for s, w in hiding_state(seg[1], 0).weights.items()}
            dist = {s + t: w * v for s, w in dist.items() for t, v in block.items()}
        for s, w in dist.items():
            key = BellString(s)
            total[key] = total.get(key, Fraction(0)) + prob * w
        ebit_dist[ebits] = ebit_dist.get(ebits, Fraction(0)) + prob
    return BellDiagonalState(n, total), ebit_dist


def clifford_prep_state(u: clifford.Clifford, n: int | None = None):
    """Both shares hold ``U|0..0>``; the joint state is a product (no ebits)."""
    if n is not None and n != u.n:
        raise ValueError("Clifford size does not match n")
    psi = clifford.image_of_zero(u)
    return psi, psi


def sample_clifford(n: int, seed: int | np.random.Generator) -> PrepSample:
    u = clifford.random_clifford(n, seed)
    return PrepSample(0, None, 0, path=CLIFFORD, stabilizer_pair=clifford_prep_state(u))


def pair_operator(state: clifford.StabilizerState) -> np.ndarray:
    """``|psi><psi| (x) |psi><psi|`` rearranged into the interleaved pair layout."""
    p = state.projector()
    return from_ab_order(np.kron(p, p))


def stabilizer_orbit(n: int) -> dict[bytes, tuple[clifford.StabilizerState, int]]:
    """Distinct images of ``|0..0>`` under the whole Clifford group, with multiplicities."""
    by_generators: Counter = Counter()
    for u in clifford.enumerate_cliffords(n):
        by_generators[clifford.image_of_zero(u)] += 1
    orbit: dict[bytes, tuple[clifford.StabilizerState, int]] = {}
    for psi, count in by_generators.items():
        key = clifford.state_key(psi)
        prev = orbit.get(key)
        orbit[key] = (prev[0], prev[1] + count) if prev else (psi, count)
    return orbit


@dataclass(frozen=True)
class CliffordAverageReport:
    n: int
    mode: str
    samples: int
    seed: int | None
    distinct_states: int
    trace_distance: float

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "samples": self.samples,
            "seed": self.seed,
            "distinct_states": self.distinct_states,
            "trace_distance": self.trace_distance,
        }


def verify_clifford_average(n: int, mode: str = "exact", samples: int = 0, seed: int | None = None) -> CliffordAverageReport:
    """Trace distance between the ``U (x) U`` average and the even hiding state."""
    target = realize(hiding_state(n, 0))
    if mode == "exact":
        if n > 2:
            raise ValueError("exact Clifford average limited to n <= 2")
        orbit = stabilizer_orbit(n)
        avg = sum(pair_operator(psi) for psi, _ in orbit.values()) / len(orbit)
        return CliffordAverageReport(n, mode, len(orbit), None, len(orbit), trace_distance(avg, target))
    if mode == "sampled":
        if n > 3:
            raise ValueError("sampled Clifford average limited to n <= 3")
        if seed is None:
            raise ValueError("sampled mode needs a seed")
        if samples < 1:
            raise ValueError("sampled mode needs at least one sample")
        rng = np.random.default_rng(seed)
        drawn: Counter = Counter()
        for _ in range(samples):
            drawn[clifford.image_of_zero(clifford.random_clifford(n, rng))] += 1
        counts: Counter[bytes] = Counter()
        states = {}
        for psi, c in drawn.items():
            key = clifford.state_key(psi)
            counts[key] += c
            states.setdefault(key, psi)
        avg = sum(c * pair_operator(states[k]) for k, c in sorted(counts.items())) / samples
        return CliffordAverageReport(n, mode, samples, seed, len(counts), trace_distance(avg, target))
    raise ValueError(f"unknown mode {mode!r}")
