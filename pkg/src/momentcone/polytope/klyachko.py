"""Horn-Klyachko systems and their restriction to symmetric pairs.

The SU(n) Horn system lives on ``3n`` coordinates ``(lam, mu, nu)``.  For a
pair whose ambient group is SU(n) (AI, AIII) it is pulled back through the
pair's embedding of ``a*``; real singular values (BDI with p < q) reuse the
complex AIII system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

from momentcone.errors import ParameterError, UnsupportedOperationError
from momentcone.polytope.core import (
    MAX_VERTEX_DIM,
    Inequality,
    Polytope,
    remove_redundant,
    substitute,
    vertices,
)
from momentcone.rootsys import RationalVector
from momentcone.schubert import all_horn_triples, triple_to_inequality
from momentcone.sympair import SymmetricPair, aiii_embedding


@lru_cache(maxsize=None)
def horn_system(n: int) -> Polytope:
    """All Horn inequalities for SU(n) plus the trace equality, on ``(lam, mu, nu)``."""
    rows = [triple_to_inequality(t) for t in all_horn_triples(n)] if n >= 2 else []
    trace = [-1] * (2 * n) + [1] * n
    rows.append(Inequality.make(trace, 0))
    rows.append(Inequality.make([-v for v in trace], 0))
    return Polytope(3 * n, tuple(dict.fromkeys(rows)))


def type_a_embedding(pair: SymmetricPair) -> tuple[int, list[list[Fraction]]]:
    """``(n, E)`` with ``E`` mapping ``a*`` into the diagonal of SU(n)."""
    if pair.kind == "AI":
        n = pair.params[0]
        return n, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    if pair.kind == "AIII":
        p, q = pair.params
        return p + q, aiii_embedding(p, q)
    if pair.kind == "BDI":
        p, q = pair.params
        if p == q:
            raise UnsupportedOperationError(
                "BDI(p,p) has a type-D restricted chamber (signed singular values); "
                "no Horn-type system is available for it"
            )
        return p + q, aiii_embedding(p, q)
    raise UnsupportedOperationError(f"no Horn-Klyachko system for {pair.label}")


def chamber_inequalities(pair: SymmetricPair, offset_dims: int = 0, total: int | None = None) -> list[Inequality]:
    """``alpha_i . y >= 0`` for the restricted simple roots, optionally placed
    at coordinates ``offset_dims .. offset_dims + a_dim`` of a longer vector."""
    d = pair.a_dim
    total = d if total is None else total
    out = []
    for alpha in pair.restricted.simple_roots:
        normal = [Fraction(0)] * total
        normal[offset_dims:offset_dims + d] = [-a for a in alpha]
        out.append(Inequality.make(normal, 0))
    return out


def _block_map(n: int, embed: list[list[Fraction]], blocks: Sequence[bool]) -> list[list[Fraction]]:
    """Map from the concatenated free blocks to ``(lam, mu, nu)``; fixed blocks map to zero."""
    d = len(embed[0])
    k = sum(blocks) * d
    rows = []
    col = 0
    for free in blocks:
        for i in range(n):
            row = [Fraction(0)] * k
            if free:
                row[col:col + d] = embed[i]
            rows.append(row)
        if free:
            col += d
    return rows


def klyachko_polytope(pair: SymmetricPair, lam: Sequence, mu: Sequence, reduce: bool = True) -> Polytope:
    """Minimal system for the moment polytope of ``K lam x K mu`` in ``a*`` coordinates."""
    lam, mu = RationalVector(lam), RationalVector(mu)
    if pair.kind not in ("AI", "AIII", "BDI"):
        raise UnsupportedOperationError(f"no Horn-Klyachko system for {pair.label}")
    for name, x in (("lambda", lam), ("mu", mu)):
        if len(x) != pair.a_dim:
            raise ParameterError(f"{name} needs {pair.a_dim} coordinates for {pair.label}, got {len(x)}")
        if not pair.restricted.is_dominant(x):
            raise ParameterError(f"{name}={x!r} is not dominant for {pair.label}")
    n, embed = type_a_embedding(pair)
    big_lam = [sum((r[j] * lam[j] for j in range(pair.a_dim)), Fraction(0)) for r in embed]
    big_mu = [sum((r[j] * mu[j] for j in range(pair.a_dim)), Fraction(0)) for r in embed]
    matrix = _block_map(n, embed, (False, False, True))
    shift = big_lam + big_mu + [Fraction(0)] * n
    P = substitute(horn_system(n), matrix, shift)
    P = Polytope(P.dim, P.hrep + tuple(chamber_inequalities(pair)))
    if not reduce:
        return P
    P = remove_redundant(P)
    if not P.empty and P.dim <= MAX_VERTEX_DIM and P.bounded:
        P = Polytope(P.dim, P.hrep, vrep=tuple(vertices(P)), reduced=True, bounded=True)
    return P


def symbolic_restricted_system(pair: SymmetricPair) -> Polytope:
    """Horn system pulled back with ``lam``, ``mu`` and ``nu`` all free in ``a*``.

    The result is a polyhedral cone on ``3 * a_dim`` coordinates, reduced and
    including the three chamber blocks.
    """
    n, embed = type_a_embedding(pair)
    d = pair.a_dim
    P = substitute(horn_system(n), _block_map(n, embed, (True, True, True)))
    chambers = [q for b in range(3) for q in chamber_inequalities(pair, b * d, 3 * d)]
    return remove_redundant(Polytope(3 * d, P.hrep + tuple(chambers)))


def golden_text(name: str) -> str:
    """Contents of a shipped fixture under ``momentcone/data``."""
    return resources.files("momentcone").joinpath("data", name).read_text()


@dataclass(frozen=True)
class SU22Table:
    inequalities: tuple[Inequality, ...]  # minimal system without the chamber rows
    chamber: tuple[Inequality, ...]
    golden: tuple[Inequality, ...]

    @property
    def matches(self) -> bool:
        return set(self.inequalities) == set(self.golden) and len(self.inequalities) == len(self.golden)

    @property
    def missing(self) -> list[Inequality]:
        return [q for q in self.golden if q not in set(self.inequalities)]

    @property
    def extra(self) -> list[Inequality]:
        return [q for q in self.inequalities if q not in set(self.golden)]


SU22_NAMES = ("l1", "l2", "m1", "m2", "n1", "n2")


def su22_table() -> SU22Table:
    """Symbolic minimal system for SU(2,2), split into chamber and non-chamber rows,
    together with the shipped reference list."""
    from momentcone.sympair import build_pair

    pair = build_pair("AIII:2,2")
    P = symbolic_restricted_system(pair)
    chamber = {q for b in range(3) for q in chamber_inequalities(pair, b * 2, 6)}
    ineqs = tuple(q for q in P.hrep if q not in chamber)
    found = tuple(q for q in P.hrep if q in chamber)
    golden = Polytope.from_text(golden_text("su22_inequalities.txt"), 6).hrep
    return SU22Table(ineqs, found, golden)


def restricted_triple_inequality(pair: SymmetricPair, triple) -> Inequality:
    """Inequality of a Horn triple pulled back to ``(lam, mu, nu)`` in ``3 * a_dim`` coordinates."""
    n, embed = type_a_embedding(pair)
    if triple.n != n:
        raise ParameterError(f"triple for SU({triple.n}) does not fit {pair.label}")
    P = substitute(Polytope(3 * n, (triple_to_inequality(triple),)), _block_map(n, embed, (True, True, True)))
    return P.hrep[0]
