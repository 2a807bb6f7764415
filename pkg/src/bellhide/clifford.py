"""Clifford group elements as binary symplectic tableaux, and their stabilizer states.

A Pauli is a vector ``(x | z)`` in GF(2)^(2n) plus a sign; the hermitian
operator is ``(-1)**sign * prod_k i**(x_k z_k) X**x_k Z**z_k``.  A Clifford
``U`` (modulo global phase) is the list of images ``U X_k U^dag`` and
``U Z_k U^dag``: a symplectic ``2n x 2n`` matrix (rows are images) and a
sign bit per row.  Any symplectic matrix with any signs is a valid element.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from .densematrix import PAULI

CLIFFORD_CAP = 8


def symplectic_form(u: np.ndarray, v: np.ndarray) -> int:
    n = len(u) // 2
    return int((u[:n] @ v[n:] + u[n:] @ v[:n]) % 2)


def _lambda(n: int) -> np.ndarray:
    lam = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    lam[:n, n:] = np.eye(n, dtype=np.uint8)
    lam[n:, :n] = np.eye(n, dtype=np.uint8)
    return lam


def is_symplectic(s: np.ndarray) -> bool:
    n = s.shape[0] // 2
    s = s.astype(np.int64)
    return bool(np.array_equal((s @ _lambda(n) @ s.T) % 2, _lambda(n)))


@dataclass(frozen=True)
class Clifford:
    n: int
    symplectic: np.ndarray
    signs: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.symplectic, dtype=np.uint8) % 2
        r = np.asarray(self.signs, dtype=np.uint8) % 2
        if s.shape != (2 * self.n, 2 * self.n) or r.shape != (2 * self.n,):
            raise ValueError("tableau shape does not match n")
        if not is_symplectic(s):
            raise ValueError("matrix is not symplectic")
        s.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "symplectic", s)
        object.__setattr__(self, "signs", r)

    @classmethod
    def identity(cls, n: int) -> "Clifford":
        return cls(n, np.eye(2 * n, dtype=np.uint8), np.zeros(2 * n, dtype=np.uint8))

    def key(self) -> bytes:
        return self.symplectic.tobytes() + self.signs.tobytes()


@dataclass(frozen=True)
class StabilizerState:
    """Pure state fixed by ``n`` independent commuting signed Paulis."""

    n: int
    generators: tuple[tuple[int, tuple[int, ...], tuple[int, ...]], ...]

    def __post_init__(self):
        if len(self.generators) != self.n:
            raise ValueError("need exactly n generators")
        vecs = np.array([list(x) + list(z) for _, x, z in self.generators], dtype=np.uint8)
        for a, b in itertools.combinations(vecs, 2):
            if symplectic_form(a, b):
                raise ValueError("generators do not commute")
        if _rank_gf2(vecs) != self.n:
            raise ValueError("generators are not independent")

    def to_json(self) -> list[str]:
        letters = "IZXY"
        out = []
        for sign, x, z in self.generators:
            out.append(("-" if sign else "+") + "".join(letters[2 * a + b] for a, b in zip(x, z)))
        return out

    def projector(self) -> np.ndarray:
        d = 2**self.n
        p = np.eye(d, dtype=complex)
        for sign, x, z in self.generators:
            g = np.ones((1, 1), dtype=complex)
            for a, b in zip(x, z):
                g = np.kron(g, PAULI[2 * a + b])
            if sign:
                g = -g
            p = p @ (np.eye(d) + g) / 2
        return p


def _rank_gf2(rows: np.ndarray) -> int:
    m = rows.copy() % 2
    rank = 0
    for col in range(m.shape[1]):
        pivot = next((r for r in range(rank, m.shape[0]) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(m.shape[0]):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def _symplectic_basis(vectors: list[np.ndarray]) -> list[tuple[np.ndarray, np.ndarray]]:
    """Symplectic Gram-Schmidt: hyperbolic pairs spanning the same (nondegenerate) space."""
    vecs = [v.copy() for v in vectors if v.any()]
    pairs = []
    while vecs:
        a = vecs.pop(0)
        k = next((i for i, v in enumerate(vecs) if symplectic_form(a, v)), None)
        if k is None:
            raise ValueError("degenerate span")
        b = vecs.pop(k)
        pairs.append((a, b))
        rest = []
        for w in vecs:
            w = (w + symplectic_form(w, b) * a + symplectic_form(w, a) * b) % 2
            if w.any():
                rest.append(w.astype(np.uint8))
        vecs = rest
    return pairs


def _combine(pairs, coeffs) -> np.ndarray:
    out = np.zeros(len(pairs[0][0]), dtype=np.uint8)
    for (u, v), (cu, cv) in zip(pairs, coeffs):
        if cu:
            out ^= u
        if cv:
            out ^= v
    return out


def _complement(pairs, a, b) -> list[tuple[np.ndarray, np.ndarray]]:
    span = [a, b] + [w for p in pairs for w in p]
    return _symplectic_basis(span)[1:]


def _build(n: int, choose_a, choose_b, choose_signs) -> Clifford:
    """Pick images of ``X_k`` then ``Z_k`` one hyperbolic pair at a time."""
    eye = np.eye(2 * n, dtype=np.uint8)
    pairs = [(eye[k], eye[n + k]) for k in range(n)]
    xs, zs = [], []
    for _ in range(n):
        a = choose_a(pairs)
        b = choose_b(pairs, a)
        xs.append(a)
        zs.append(b)
        pairs = _complement(pairs, a, b)
    return Clifford(n, np.array(xs + zs, dtype=np.uint8), choose_signs(n))


def _coeff_vector(bits: int, m: int) -> list[tuple[int, int]]:
    return [((bits >> (2 * i)) & 1, (bits >> (2 * i + 1)) & 1) for i in range(m)]


def random_clifford(n: int, seed: int | np.random.Generator | None) -> Clifford:
    """Uniform Clifford element modulo phase.

    ``seed=None`` returns the identity.  Each step draws a uniform nonzero
    vector ``a`` of the current symplectic subspace and a uniform ``b`` with
    ``<a, b> = 1``, then continues in their symplectic complement.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > CLIFFORD_CAP:
        raise ValueError(f"n={n} exceeds Clifford sampling cap {CLIFFORD_CAP}")
    if seed is None:
        return Clifford.identity(n)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    def choose_a(pairs):
        m = len(pairs)
        bits = int(rng.integers(1, 4**m))
        return _combine(pairs, _coeff_vector(bits, m))

    def choose_b(pairs, a):
        m = len(pairs)
        while True:
            b = _combine(pairs, _coeff_vector(int(rng.integers(0, 4**m)), m))
            if symplectic_form(a, b):
                return b

    def choose_signs(n):
        return rng.integers(0, 2, size=2 * n).astype(np.uint8)

    return _build(n, choose_a, choose_b, choose_signs)


def enumerate_cliffords(n: int) -> Iterator[Clifford]:
    """Every Clifford element modulo phase (24 for n=1, 11520 for n=2)."""
    if n > 2:
        raise ValueError("exhaustive enumeration limited to n <= 2")

    def rec(pairs, xs, zs):
        if len(xs) == n:
            s = np.array(xs + zs, dtype=np.uint8)
            for signs in itertools.product((0, 1), repeat=2 * n):
                yield Clifford(n, s, np.array(signs, dtype=np.uint8))
            return
        m = len(pairs)
        for abits in range(1, 4**m):
            a = _combine(pairs, _coeff_vector(abits, m))
            for bbits in range(4**m):
                b = _combine(pairs, _coeff_vector(bbits, m))
                if symplectic_form(a, b):
                    yield from rec(_complement(pairs, a, b), xs + [a], zs + [b])

    eye = np.eye(2 * n, dtype=np.uint8)
    yield from rec([(eye[k], eye[n + k]) for k in range(n)], [], [])


def image_of_zero(u: Clifford) -> StabilizerState:
    """``U |0...0>``: stabilized by the images of ``Z_1 .. Z_n``."""
    n = u.n
    gens = []
    for k in range(n):
        row = u.symplectic[n + k]
        gens.append((int(u.signs[n + k]), tuple(int(v) for v in row[:n]), tuple(int(v) for v in row[n:])))
    return StabilizerState(n, tuple(gens))


def state_key(state: StabilizerState) -> bytes:
    """Canonical key: the rounded dense projector (small n only)."""
    p = np.round(state.projector(), 10) + 0.0
    return p.tobytes()
