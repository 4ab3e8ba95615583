"""Independent brute-force references.

Nothing here imports the algorithms under test; each oracle recomputes its
answer from definitions (explicit root lists, matrix groups, monomial
expansions, exhaustive vertex enumeration, Chevalley's definition of the
Bruhat order).
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction


# -- root systems ---------------------------------------------------------


def classical_roots(family: str, n: int) -> set[tuple[Fraction, ...]]:
    """All roots listed by their defining forms (``n`` coordinates)."""

    def e(*terms):
        v = [Fraction(0)] * n
        for i, c in terms:
            v[i] += c
        return tuple(v)

    out = set()
    for i, j in itertools.permutations(range(n), 2):
        out.add(e((i, 1), (j, -1)))
        if family in ("B", "C", "D", "BC"):
            out.add(e((i, 1), (j, 1)))
            out.add(e((i, -1), (j, -1)))
    for i in range(n):
        if family in ("B", "BC"):
            out |= {e((i, 1)), e((i, -1))}
        if family in ("C", "BC"):
            out |= {e((i, 2)), e((i, -2))}
    return out


def positive_by_chamber(roots) -> set:
    """Positive roots as the ones pairing positively with ``(n, n-1, ..., 1)``."""
    roots = list(roots)
    n = len(roots[0])
    probe = [n - i for i in range(n)]
    return {r for r in roots if sum(a * b for a, b in zip(r, probe)) > 0}


def reflect(alpha, x):
    c = 2 * sum(a * b for a, b in zip(alpha, x)) / sum(a * a for a in alpha)
    return tuple(b - c * a for a, b in zip(alpha, x))


def closed_under_reflections(roots) -> bool:
    roots = set(roots)
    return all(reflect(a, b) in roots for a in roots for b in roots)


def signed_permutations(n: int, even_signs: bool = False):
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            if even_signs and signs.count(-1) % 2:
                continue
            yield perm, signs


def brute_orbit(family: str, x) -> set[tuple]:
    """Weyl orbit by applying every (signed) permutation directly."""
    n = len(x)
    x = tuple(Fraction(v) for v in x)
    if family == "A":
        return {tuple(x[p] for p in perm) for perm in itertools.permutations(range(n))}
    even = family == "D"
    return {tuple(s * x[p] for p, s in zip(perm, signs)) for perm, signs in signed_permutations(n, even)}


def brute_dominant(family: str, x) -> tuple:
    """Dominant representative from the orbit: the lexicographically largest
    point, which for these realizations is the chamber point."""
    return max(brute_orbit(family, x))


# -- Bruhat order from Chevalley's definition ------------------------------


def matmul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))) for i in range(len(a)))


def reflection_matrix(alpha):
    n = len(alpha)
    na = sum(a * a for a in alpha)
    return tuple(tuple(Fraction(int(i == j)) - 2 * alpha[i] * alpha[j] / na for j in range(n)) for i in range(n))


def bruhat_oracle(simple_roots, positive_roots):
    """Return ``(elements, length, leq)`` for the group generated by ``simple_roots``.

    Length is the number of positive roots sent to negative roots;
    ``v <= w`` is the transitive closure of ``x -> x t`` for reflections
    ``t`` with ``length(x t) > length(x)``.
    """
    n = len(simple_roots[0])
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    gens = [reflection_matrix(a) for a in simple_roots]
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = matmul(g, s)
                if h not in elems:
                    elems.add(h)
                    nxt.append(h)
        frontier = nxt
    pos = {tuple(r) for r in positive_roots}

    def apply(m, v):
        return tuple(sum(m[i][j] * v[j] for j in range(n)) for i in range(n))

    def length(m):
        return sum(1 for r in pos if apply(m, r) not in pos)

    lengths = {g: length(g) for g in elems}
    refl = {reflection_matrix(r) for r in pos}
    up = {g: {matmul(g, t) for t in refl if lengths[matmul(g, t)] > lengths[g]} for g in elems}
    above: dict = {}
    for g in sorted(elems, key=lambda x: -lengths[x]):
        s = {g}
        for h in up[g]:
            s |= above[h]
        above[g] = s

    def leq(v, w):
        return w in above[v]

    return elems, lengths, leq


# -- Schur polynomials by monomial expansion -------------------------------


def ssyt(shape, nvars: int):
    """All semistandard tableaux of ``shape`` with entries in ``1..nvars``."""
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    fill: dict = {}

    def rec(i):
        if i == len(cells):
            yield dict(fill)
            return
        r, c = cells[i]
        lo = 1
        if c > 0:
            lo = max(lo, fill[(r, c - 1)])
        if r > 0:
            lo = max(lo, fill[(r - 1, c)] + 1)
        for v in range(lo, nvars + 1):
            fill[(r, c)] = v
            yield from rec(i + 1)
        fill.pop((r, c), None)

    yield from rec(0)


def schur_poly(shape, nvars: int) -> Counter:
    out: Counter = Counter()
    for t in ssyt(shape, nvars):
        exp = [0] * nvars
        for v in t.values():
            exp[v - 1] += 1
        out[tuple(exp)] += 1
    return out


def poly_mul(a: Counter, b: Counter) -> Counter:
    out: Counter = Counter()
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return out


def schur_expand(poly: Counter, nvars: int) -> dict[tuple, int]:
    """Coefficients in the Schur basis, peeling off the dominant monomial."""
    poly = Counter({k: v for k, v in poly.items() if v})
    out: dict[tuple, int] = {}
    while poly:
        lead = max(e for e in poly if list(e) == sorted(e, reverse=True))
        c = poly[lead]
        shape = tuple(p for p in lead if p)
        out[shape] = c
        for e, v in schur_poly(shape, nvars).items():
            poly[e] -= c * v
            if poly[e] == 0:
                del poly[e]
    return out


def lr_by_expansion(lam, mu, nvars: int = 3) -> dict[tuple, int]:
    return schur_expand(poly_mul(schur_poly(lam, nvars), schur_poly(mu, nvars)), nvars)


# -- polytopes ------------------------------------------------------------


def _solve(a, b):
    """Gauss-Jordan over Fractions; None if singular."""
    n = len(a)
    m = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def brute_vertices(a, b) -> set[tuple]:
    """Vertices of ``{x : a x <= b}`` by trying every square subsystem."""
    d = len(a[0])
    out = set()
    for rows in itertools.combinations(range(len(a)), d):
        x = _solve([a[i] for i in rows], [b[i] for i in rows])
        if x is None:
            continue
        if all(sum(ai * xi for ai, xi in zip(a[k], x)) <= b[k] for k in range(len(a))):
            out.add(x)
    return out


def brute_max(a, b, c):
    """Max of ``c . x`` over a bounded nonempty polytope, by its vertices."""
    vs = brute_vertices(a, b)
    if not vs:
        return None
    return max(sum(ci * xi for ci, xi in zip(c, v)) for v in vs)


def monotone_chain(points) -> list[tuple]:
    """Extreme points of a planar point set in counterclockwise order."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]
