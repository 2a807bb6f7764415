"""Security certification: best two-outcome PPT measurement against the hiding states.

A Bell-diagonal measurement is fixed by ``alpha[s] = <s|M0|s>``.  Both
``M0`` and ``M1 = I - M0`` must stay positive under partial transpose, which
for diagonal operators is the family of linear inequalities

    0 <= sum_s alpha[s ^ m] * (-1)**N11(s) <= 2**n      for every m.

Maximizing (or minimizing) ``p(0|0) + p(1|1) - 1`` under these constraints
is a linear program.  :func:`optimize` solves it over all ``4**n`` diagonal
entries in floating point; :func:`optimize_reduced` solves the symmetric
version with one variable per singlet count in exact arithmetic.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog

from . import rational, simplex
from .bellcode import (
    SINGLET,
    BellString,
    CapExceeded,
    PauliString,
    parity_class_size,
    singlet_count_index,
)
from .densematrix import DENSE_CAP, PPT_TOL, bell_diagonal, eigenvalues

FULL_LP_CAP = 4
FEAS_TOL = 1e-9


class LPFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class BellDiagonalPOVM:
    """Diagonal of ``M0`` in the Bell product basis, indexed by string index."""

    n: int
    alpha: tuple

    def __post_init__(self):
        alpha = tuple(self.alpha)
        if len(alpha) != 4**self.n:
            raise ValueError(f"expected {4**self.n} entries, got {len(alpha)}")
        for a in alpha:
            if not -FEAS_TOL <= a <= 1 + FEAS_TOL:
                raise ValueError(f"alpha entry {a} outside [0, 1]")
        object.__setattr__(self, "alpha", alpha)

    def __getitem__(self, s: BellString):
        return self.alpha[s.index]

    @property
    def beta(self) -> tuple:
        return tuple(1 - a for a in self.alpha)

    @classmethod
    def constant(cls, n: int, value=Fraction(1, 2)) -> "BellDiagonalPOVM":
        return cls(n, (Fraction(value),) * 4**n)

    @classmethod
    def from_singlet_counts(cls, n: int, by_count: Sequence) -> "BellDiagonalPOVM":
        if len(by_count) != n + 1:
            raise ValueError(f"expected {n + 1} values, got {len(by_count)}")
        return cls(n, tuple(by_count[singlet_count_index(i, n)] for i in range(4**n)))


@dataclass(frozen=True)
class SecurityCertificate:
    """LP optimum of ``p(0|0) + p(1|1) - 1`` over PPT Bell-diagonal measurements."""

    n: int
    lp_optimum: Fraction | float
    lp_minimum: Fraction | float
    delta: Fraction
    witness: tuple
    min_witness: tuple
    method: str
    solver_stats: dict = field(default_factory=dict, compare=False)
    full_alpha: tuple | None = field(default=None, compare=False, repr=False)

    @property
    def certified(self) -> bool:
        return self.lp_optimum <= self.delta + FEAS_TOL and self.lp_minimum >= -self.delta - FEAS_TOL

    @property
    def gap(self):
        return self.delta - self.lp_optimum

    @property
    def tight(self) -> bool:
        if isinstance(self.lp_optimum, Fraction):
            return self.lp_optimum == self.delta
        return abs(self.lp_optimum - float(self.delta)) <= FEAS_TOL

    def to_json(self) -> dict:
        def enc(x):
            return rational.to_json(x) if isinstance(x, Fraction) else float(x)

        return {
            "n": self.n,
            "delta": rational.to_json(self.delta),
            "lp_optimum_minus_1": enc(self.lp_optimum),
            "lp_minimum_minus_1": enc(self.lp_minimum),
            "tight": self.tight,
            "certified": self.certified,
            "method": self.method,
            "witness_by_N11": [enc(x) for x in self.witness],
            "min_witness_by_N11": [enc(x) for x in self.min_witness],
            "solver_stats": self.solver_stats,
        }


def security_bound(n: int) -> Fraction:
    """``1 / 2**(n-1)``."""
    if n < 1:
        raise ValueError("n must be positive")
    return Fraction(1, 2 ** (n - 1))


def binary_entropy(p: float) -> float:
    p = float(p)
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def mutual_info_bound(n: int, prior) -> float:
    """``security_bound(n) * H(prior)`` in bits; ``prior`` is P(b = 0)."""
    if not 0 < prior < 1:
        raise ValueError(f"prior must lie strictly between 0 and 1, got {prior}")
    return float(security_bound(n)) * binary_entropy(prior)


def _alpha_vector(alpha) -> tuple:
    return alpha.alpha if isinstance(alpha, BellDiagonalPOVM) else tuple(alpha)


def ppt_constraint(alpha, m: PauliString):
    """``sum_s alpha[s ^ m] * (-1)**N11(s)``; must lie in ``[0, 2**n]``."""
    a = _alpha_vector(alpha)
    n = len(m)
    if len(a) != 4**n:
        raise ValueError("alpha and m have different sizes")
    mi = m.index
    total = 0
    for s in range(4**n):
        term = a[s ^ mi]
        total += -term if singlet_count_index(s, n) % 2 else term
    return total


def success_probabilities(alpha, n: int):
    """``(p(0|0), p(1|1))`` against the even and odd hiding states."""
    a = _alpha_vector(alpha)
    if len(a) != 4**n:
        raise ValueError("alpha has the wrong size")
    even = sum(a[i] for i in range(4**n) if singlet_count_index(i, n) % 2 == 0)
    odd = sum(1 - a[i] for i in range(4**n) if singlet_count_index(i, n) % 2)
    exact = all(isinstance(x, (int, Fraction)) for x in a)
    if exact:
        return Fraction(even, parity_class_size(n, 0)), Fraction(odd, parity_class_size(n, 1))
    return even / parity_class_size(n, 0), odd / parity_class_size(n, 1)


def twirl(m: np.ndarray, tol: float = PPT_TOL) -> BellDiagonalPOVM:
    """Keep only the Bell-basis diagonal of a POVM element ``0 <= M <= I``."""
    m = np.asarray(m)
    ev = eigenvalues(m)
    if ev[0] < -tol or ev[-1] > 1 + tol:
        raise ValueError(f"operator is not between 0 and I (spectrum [{ev[0]:.3g}, {ev[-1]:.3g}])")
    d = bell_diagonal(m)
    n = int(round(math.log(m.shape[0], 4)))
    return BellDiagonalPOVM(n, tuple(float(min(1.0, max(0.0, x))) for x in d))


# --- full LP ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _count_table(n: int) -> np.ndarray:
    return np.array([singlet_count_index(i, n) for i in range(4**n)])


def constraint_matrix(n: int) -> np.ndarray:
    """Row ``m``, column ``t``: ``(-1)**N11(t ^ m)``."""
    if n > FULL_LP_CAP:
        raise CapExceeded(f"full LP limited to n <= {FULL_LP_CAP}")
    idx = np.arange(4**n)
    counts = _count_table(n)
    return np.where(counts[idx[:, None] ^ idx[None, :]] % 2, -1, 1)


def objective_vector(n: int) -> np.ndarray:
    """Coefficients ``w`` with ``p(0|0) + p(1|1) - 1 = w @ alpha``."""
    counts = _count_table(n)
    return np.where(counts % 2, -1.0 / parity_class_size(n, 1), 1.0 / parity_class_size(n, 0))


def _linprog(n: int, maximize: bool):
    k = constraint_matrix(n).astype(float)
    w = objective_vector(n)
    res = linprog(
        -w if maximize else w,
        A_ub=np.vstack([k, -k]),
        b_ub=np.concatenate([np.full(4**n, 2.0**n), np.zeros(4**n)]),
        bounds=(0, 1),
        method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status != 0:
        raise LPFailure(f"full LP at n={n} failed: {res.message}")
    return float(w @ res.x), res.x, int(res.nit)


def class_average(alpha, n: int) -> tuple:
    """Average of ``alpha`` over each singlet-count class."""
    a = np.asarray(_alpha_vector(alpha), dtype=float)
    counts = _count_table(n)
    return tuple(float(a[counts == j].mean()) for j in range(n + 1))


def optimize(n: int) -> SecurityCertificate:
    """Full LP over all ``4**n`` diagonal entries (double precision, ``n <= 4``)."""
    if n < 1:
        raise ValueError("n must be positive")
    hi, x_hi, it_hi = _linprog(n, True)
    lo, x_lo, it_lo = _linprog(n, False)
    return SecurityCertificate(
        n=n,
        lp_optimum=hi,
        lp_minimum=lo,
        delta=security_bound(n),
        witness=class_average(x_hi, n),
        min_witness=class_average(x_lo, n),
        method="full",
        solver_stats={"solver": "highs", "variables": 4**n, "constraints": 2 * 4**n, "iterations": it_hi + it_lo},
        full_alpha=tuple(float(x) for x in x_hi),
    )


# --- symmetry-reduced LP ---------------------------------------------------


def _kernel_polynomial(m_symbol: int) -> tuple[int, int]:
    """Coefficients of ``sum_t (-1)**[t == 11] x**[t ^ m == 11]`` for one pair."""
    coeffs = [0, 0]
    for t in range(4):
        coeffs[int(t ^ m_symbol == SINGLET)] += -1 if t == SINGLET else 1
    return tuple(coeffs)


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def reduced_constraints(n: int) -> tuple[tuple[tuple, tuple[int, ...]], ...]:
    """One ``(signature, coefficients)`` row per orbit of shifts ``m``.

    ``coefficients[j]`` multiplies the common value of ``alpha`` on strings
    with ``j`` singlets.  Shifts whose per-pair kernels form the same
    multiset give the same row, so only one representative is kept.
    """
    kernels: dict[tuple[int, int], list[int]] = {}
    for sym in range(4):
        kernels.setdefault(_kernel_polynomial(sym), []).append(sym)
    classes = sorted(kernels.items(), key=lambda kv: kv[1][0])
    rows = []
    for combo in itertools.combinations_with_replacement(range(len(classes)), n):
        poly = [1]
        for c in combo:
            poly = _poly_mul(poly, classes[c][0])
        signature = tuple(combo.count(c) for c in range(len(classes)))
        representative = tuple(classes[c][1][0] for c in combo)
        rows.append(((signature, representative), tuple(poly)))
    return tuple(rows)


def class_sizes(n: int) -> tuple[int, ...]:
    """Number of strings with ``j`` singlets, ``j = 0..n``."""
    return tuple(math.comb(n, j) * 3 ** (n - j) for j in range(n + 1))


def reduced_objective(n: int) -> tuple[Fraction, ...]:
    even, odd = parity_class_size(n, 0), parity_class_size(n, 1)
    return tuple(Fraction(size, even) if j % 2 == 0 else Fraction(-size, odd) for j, size in enumerate(class_sizes(n)))


def _reduced_system(n: int):
    a_ub, b_ub = [], []
    for _, coeffs in reduced_constraints(n):
        a_ub.append(list(coeffs))
        b_ub.append(2**n)
        a_ub.append([-c for c in coeffs])
        b_ub.append(0)
    for j in range(n + 1):
        row = [0] * (n + 1)
        row[j] = 1
        a_ub.append(row)
        b_ub.append(1)
    return a_ub, b_ub


def _solve_reduced(n: int, maximize: bool):
    c = reduced_objective(n)
    a_ub, b_ub = _reduced_system(n)
    res = simplex.solve(c, a_ub, b_ub, maximize=maximize)
    if res.status != simplex.OPTIMAL:
        # alpha = 1/2 everywhere is always feasible and the box bounds the objective
        raise LPFailure(f"reduced LP at n={n} returned {res.status}")
    lex = simplex.lexicographic_min(c, a_ub, b_ub, res.value)
    return res.value, lex.x, res.pivots + lex.pivots


def optimize_reduced(n: int) -> SecurityCertificate:
    """Exact LP with one variable per singlet count (``n + 1`` variables)."""
    if n < 1:
        raise ValueError("n must be positive")
    hi, w_hi, p_hi = _solve_reduced(n, True)
    lo, w_lo, p_lo = _solve_reduced(n, False)
    return SecurityCertificate(
        n=n,
        lp_optimum=hi,
        lp_minimum=lo,
        delta=security_bound(n),
        witness=w_hi,
        min_witness=w_lo,
        method="reduced",
        solver_stats={
            "solver": "exact-simplex",
            "variables": n + 1,
            "constraint_orbits": len(reduced_constraints(n)),
            "pivots": p_hi + p_lo,
        },
    )


# --- symmetry group --------------------------------------------------------


def _relabelings() -> list[tuple[int, int, int, int]]:
    """Permutations of the three non-singlet symbols, singlet fixed."""
    out = []
    for perm in itertools.permutations((0, 1, 2)):
        out.append(tuple(perm) + (SINGLET,))
    return out


def symmetrize(alpha, n: int) -> tuple[float, ...]:
    """Average ``alpha`` over block permutations and per-pair non-singlet relabelings."""
    a = _alpha_vector(alpha)
    if len(a) != 4**n:
        raise ValueError("alpha has the wrong size")
    if n > DENSE_CAP:
        raise CapExceeded(f"symmetrization limited to n <= {DENSE_CAP}")
    strings = [BellString.from_index(i, n) for i in range(4**n)]
    total = np.zeros(4**n)
    count = 0
    for order in itertools.permutations(range(n)):
        for labels in itertools.product(_relabelings(), repeat=n):
            for i, s in enumerate(strings):
                image = BellString(labels[p][s[order[p]]] for p in range(n))
                total[i] += float(a[image.index])
            count += 1
    return tuple(total / count)


def singlet_class_of(alpha, n: int) -> tuple:
    """Check ``alpha`` is constant on singlet-count classes and return the class values."""
    a = _alpha_vector(alpha)
    out = [None] * (n + 1)
    for i, x in enumerate(a):
        j = singlet_count_index(i, n)
        if out[j] is None:
            out[j] = x
        elif out[j] != x:
            raise ValueError(f"alpha is not constant on the {j}-singlet class")
    return tuple(out)


def is_feasible(alpha, n: int, tol: float = FEAS_TOL) -> bool:
    a = _alpha_vector(alpha)
    if any(not -tol <= x <= 1 + tol for x in a):
        return False
    vals = constraint_matrix(n) @ np.asarray(a, dtype=float)
    return bool(np.all(vals >= -tol) and np.all(vals <= 2**n + tol))


__all__ = [
    "BellDiagonalPOVM",
    "SecurityCertificate",
    "binary_entropy",
    "class_average",
    "class_sizes",
    "constraint_matrix",
    "is_feasible",
    "mutual_info_bound",
    "objective_vector",
    "optimize",
    "optimize_reduced",
    "ppt_constraint",
    "reduced_constraints",
    "reduced_objective",
    "security_bound",
    "singlet_class_of",
    "success_probabilities",
    "symmetrize",
    "twirl",
]
