"""Exact rational simplex method with Bland's rule.

Every question the polytope layer asks about ``{x : A x <= b}`` is answered
through the dual standard-form problem

    minimize  b . y   subject to  A^T y = c,  y >= 0,

whose tableau has only ``dim`` constraint rows.  That keeps pivots cheap even
when the inequality list is long, which is the common case here (hundreds of
Horn or Weyl-orbit inequalities in at most a handful of variables).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

try:  # gmpy2 rationals are an order of magnitude faster than Fraction
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    solution: tuple[Fraction, ...] | None = None


def _q(v) -> object:
    if isinstance(v, Fraction):
        return _Q(v.numerator, v.denominator)
    return _Q(v)


def _frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def _pivot(tab: list[list], row: int, col: int) -> None:
    prow = tab[row]
    p = prow[col]
    if p != 1:
        prow = [v / p for v in prow]
        tab[row] = prow
    nz = [j for j, v in enumerate(prow) if v != 0]
    for i, r in enumerate(tab):
        if i == row:
            continue
        f = r[col]
        if f != 0:
            for j in nz:
                r[j] -= f * prow[j]


def _run(tab: list[list], basis: list[int], allowed: int) -> str:
    """Bland's-rule iterations on a tableau whose last row is the cost row.

    Columns ``>= allowed`` (besides the rhs) may not enter the basis.
    """
    cost = tab[-1]
    m = len(tab) - 1
    while True:
        enter = next((j for j in range(allowed) if cost[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED
        _pivot(tab, best[1], enter)
        basis[best[1]] = enter


def simplex(m_rows: Sequence[Sequence], rhs: Sequence, cost: Sequence) -> LPResult:
    """Minimize ``cost . y`` subject to ``m_rows y = rhs`` and ``y >= 0``."""
    nvar = len(cost)
    rows = [[_q(v) for v in r] for r in m_rows]
    r = [_q(v) for v in rhs]
    for i in range(len(rows)):
        if r[i] < 0:
            rows[i] = [-v for v in rows[i]]
            r[i] = -r[i]
    m = len(rows)
    zero, one = _Q(0), _Q(1)
    # phase one: artificial columns nvar .. nvar+m-1
    tab = [rows[i] + [one if k == i else zero for k in range(m)] + [r[i]] for i in range(m)]
    phase1 = [zero] * (nvar + m + 1)
    for i in range(m):
        for j in range(nvar):
            phase1[j] -= tab[i][j]
        phase1[-1] -= tab[i][-1]
    tab.append(phase1)
    basis = [nvar + i for i in range(m)]
    _run(tab, basis, nvar)
    if tab[-1][-1] != 0:
        return LPResult(INFEASIBLE)
    # drive artificial variables out of the basis; drop redundant rows
    i = 0
    while i < len(basis):
        if basis[i] >= nvar:
            col = next((j for j in range(nvar) if tab[i][j] != 0), None)
            if col is None:
                del tab[i]
                del basis[i]
                continue
            _pivot(tab, i, col)
            basis[i] = col
        i += 1
    tab.pop()
    tab = [row[:nvar] + [row[-1]] for row in tab]
    c = [_q(v) for v in cost]
    obj = c[:] + [zero]
    for i, b in enumerate(basis):
        cb = c[b]
        if cb != 0:
            row = tab[i]
            for j in range(nvar + 1):
                obj[j] -= cb * row[j]
    tab.append(obj)
    status = _run(tab, basis, nvar)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    y = [zero] * nvar
    for i, b in enumerate(basis):
        y[b] = tab[i][-1]
    return LPResult(OPTIMAL, _frac(-tab[-1][-1]), tuple(_frac(v) for v in y))


def _dual_rows(a: Sequence[Sequence], extra: Sequence[Sequence] = ()) -> list[list]:
    dim = len(a[0]) if a else 0
    return [[row[k] for row in a] for k in range(dim)] + [list(e) for e in extra]


def is_feasible(a: Sequence[Sequence], b: Sequence) -> bool:
    """Is ``{x : a x <= b}`` nonempty?  (Farkas: no y >= 0 with y a = 0, y b < 0.)"""
    if not a:
        return True
    rows = _dual_rows(a, [[1] * len(a)])
    rhs = [0] * (len(rows) - 1) + [1]
    res = simplex(rows, rhs, list(b))
    return res.status == INFEASIBLE or res.value >= 0


def maximize(a: Sequence[Sequence], b: Sequence, c: Sequence) -> LPResult:
    """Maximize ``c . x`` over a polyhedron that the caller knows to be nonempty.

    Returns ``UNBOUNDED`` when the objective is unbounded above.
    """
    dim = len(c)
    if not a:
        if all(v == 0 for v in c):
            return LPResult(OPTIMAL, Fraction(0))
        return LPResult(UNBOUNDED)
    res = simplex(_dual_rows(a), list(c), list(b))
    if res.status == INFEASIBLE:
        return LPResult(UNBOUNDED)
    if res.status == UNBOUNDED:  # dual unbounded means primal empty
        return LPResult(INFEASIBLE)
    return LPResult(OPTIMAL, res.value, res.solution)


def implies(a: Sequence[Sequence], b: Sequence, normal: Sequence, offset) -> bool:
    """Does ``a x <= b`` (assumed nonempty) imply ``normal . x <= offset``?"""
    res = maximize(a, b, normal)
    return res.status == OPTIMAL and res.value <= offset


def in_cone(generators: Sequence[Sequence], target: Sequence) -> bool:
    """Is ``target`` a nonnegative combination of ``generators``?"""
    if not generators:
        return all(v == 0 for v in target)
    rows = [[g[k] for g in generators] for k in range(len(target))]
    return simplex(rows, list(target), [0] * len(generators)).status == OPTIMAL
