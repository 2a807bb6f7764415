"""Dense-tableau two-phase simplex over exact rationals.

Small problems only (tens of variables).  Bland's rule guarantees
termination; all arithmetic is :class:`fractions.Fraction`, so optimal
values and vertices are exact.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPError(RuntimeError):
    pass


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None
    value: Fraction | None
    pivots: int


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    row = tab[r]
    p = row[c]
    if p != 1:
        tab[r] = row = [v / p for v in row]
    for i, other in enumerate(tab):
        if i == r:
            continue
        f = other[c]
        if f:
            tab[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _run(tab: list[list[Fraction]], basis: list[int], allowed: int, max_pivots: int) -> tuple[str, int]:
    """Maximize the objective stored (negated) in the last row; columns >= ``allowed`` never enter."""
    obj = tab[-1]
    pivots = 0
    while True:
        obj = tab[-1]
        entering = next((j for j in range(allowed) if obj[j] < 0), None)
        if entering is None:
            return OPTIMAL, pivots
        best = None
        for i in range(len(tab) - 1):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED, pivots
        _pivot(tab, basis, best[1], entering)
        pivots += 1
        if pivots > max_pivots:
            raise LPError(f"simplex exceeded {max_pivots} pivots")


def solve(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    *,
    maximize: bool = True,
    max_pivots: int = 100_000,
) -> LPResult:
    """Optimize ``c @ x`` subject to ``a_ub @ x <= b_ub``, ``a_eq @ x == b_eq``, ``x >= 0``."""
    nvar = len(c)
    rows: list[tuple[list[Fraction], Fraction, str]] = []
    for coeffs, rhs in zip(a_ub, b_ub, strict=True):
        rows.append(([Fraction(v) for v in coeffs], Fraction(rhs), "le"))
    for coeffs, rhs in zip(a_eq, b_eq, strict=True):
        rows.append(([Fraction(v) for v in coeffs], Fraction(rhs), "eq"))
    for coeffs, _, _ in rows:
        if len(coeffs) != nvar:
            raise ValueError("constraint row length does not match objective")

    # column layout: structural | slack/surplus | artificial | rhs
    n_slack = sum(1 for _, _, kind in rows if kind == "le")
    slack_at = nvar
    art_at = nvar + n_slack
    n_art = 0
    plan = []
    k = 0
    for coeffs, rhs, kind in rows:
        sign = -1 if rhs < 0 else 1
        slack = None
        if kind == "le":
            slack = (slack_at + k, sign)
            k += 1
        needs_art = kind == "eq" or sign < 0
        plan.append((coeffs, rhs, sign, slack, needs_art))
        n_art += needs_art
    width = art_at + n_art + 1

    tab: list[list[Fraction]] = []
    basis: list[int] = []
    j_art = art_at
    for coeffs, rhs, sign, slack, needs_art in plan:
        row = [Fraction(0)] * width
        for j, v in enumerate(coeffs):
            row[j] = sign * v
        if slack is not None:
            row[slack[0]] = Fraction(slack[1])
        row[-1] = sign * rhs
        if needs_art:
            row[j_art] = Fraction(1)
            basis.append(j_art)
            j_art += 1
        else:
            basis.append(slack[0])
        tab.append(row)

    pivots = 0
    if n_art:
        # phase 1: maximize -sum(artificials)
        obj = [Fraction(0)] * width
        for j in range(art_at, art_at + n_art):
            obj[j] = Fraction(1)
        for i, b in enumerate(basis):
            if b >= art_at:
                obj = [o - v for o, v in zip(obj, tab[i])]
        tab.append(obj)
        status, p = _run(tab, basis, art_at + n_art, max_pivots)
        pivots += p
        if tab[-1][-1] != 0:
            return LPResult(INFEASIBLE, None, None, pivots)
        tab.pop()
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab):
            if basis[i] >= art_at:
                j = next((j for j in range(art_at) if tab[i][j] != 0), None)
                if j is None:
                    del tab[i], basis[i]
                    continue
                _pivot(tab, basis, i, j)
                pivots += 1
            i += 1

    sense = 1 if maximize else -1
    obj = [Fraction(0)] * width
    for j, v in enumerate(c):
        obj[j] = -sense * Fraction(v)
    for i, b in enumerate(basis):
        if obj[b]:
            f = obj[b]
            obj = [o - f * v for o, v in zip(obj, tab[i])]
    tab.append(obj)
    status, p = _run(tab, basis, art_at, max_pivots)
    pivots += p
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, None, pivots)
    x = [Fraction(0)] * nvar
    for i, b in enumerate(basis):
        if b < nvar:
            x[b] = tab[i][-1]
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, tuple(x), value, pivots)


def lexicographic_min(
    c: Sequence,
    a_ub: Sequence[Sequence],
    b_ub: Sequence,
    optimum: Fraction,
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Lexicographically smallest ``x`` among the points with ``c @ x == optimum``."""
    a_eq = [list(r) for r in a_eq] + [list(c)]
    b_eq = list(b_eq) + [optimum]
    nvar = len(c)
    pivots = 0
    last = None
    for j in range(nvar):
        unit = [0] * nvar
        unit[j] = 1
        res = solve(unit, a_ub, b_ub, a_eq, b_eq, maximize=False)
        pivots += res.pivots
        if res.status != OPTIMAL:
            raise LPError(f"lexicographic stage {j} returned {res.status}")
        a_eq.append(unit)
        b_eq.append(res.value)
        last = res
    return LPResult(OPTIMAL, last.x, Fraction(optimum), pivots)
