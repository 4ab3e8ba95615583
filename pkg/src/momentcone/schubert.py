"""Grassmannian Schubert combinatorics: Littlewood-Richardson numbers and
Horn triples for SU(n).

Index subsets are 1-based and strictly increasing.  A triple prints as
``(1,2)(2,4)(2,4)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from momentcone.errors import ParameterError
from momentcone.polytope.core import Inequality


class Partition(tuple):
    """Weakly decreasing tuple of nonnegative ints with trailing zeros trimmed."""

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        if any(p < 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ParameterError(f"not a partition: {parts}")
        while parts and parts[-1] == 0:
            parts.pop()
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def part(self, i: int) -> int:
        return self[i] if i < len(self) else 0

    def contains(self, other: "Partition") -> bool:
        return len(other) <= len(self) and all(self.part(i) >= other.part(i) for i in range(len(other)))

    def __repr__(self):
        return "(" + ",".join(map(str, self)) + ")"


def partitions_in_box(rows: int, cols: int) -> list[Partition]:
    """All partitions with at most ``rows`` parts, each at most ``cols``."""
    out = []

    def rec(prefix, bound):
        if len(prefix) == rows:
            out.append(Partition(prefix))
            return
        for v in range(bound, -1, -1):
            rec(prefix + [v], v)

    rec([], cols)
    return sorted(set(out))


@lru_cache(maxsize=None)
def _lr(lam: Partition, mu: Partition, nu: Partition) -> int:
    rows = len(nu)
    # cells of nu/lam, row by row, listed right to left (reverse reading order)
    cells = [(r, c) for r in range(rows) for c in range(nu.part(r) - 1, lam.part(r) - 1, -1)]
    filling: dict[tuple[int, int], int] = {}
    counts = [0] * (len(mu) + 1)
    total = 0

    def rec(idx: int) -> None:
        nonlocal total
        if idx == len(cells):
            total += 1
            return
        r, c = cells[idx]
        hi = len(mu)
        right = filling.get((r, c + 1))
        if right is not None:
            hi = min(hi, right)
        above = filling.get((r - 1, c))
        lo = 1 if above is None else above + 1
        for v in range(lo, hi + 1):
            if counts[v] >= mu[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            counts[v] += 1
            filling[(r, c)] = v
            rec(idx + 1)
            del filling[(r, c)]
            counts[v] -= 1

    rec(0)
    return total


def lr_coefficient(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int]) -> int:
    """Number of LR skew tableaux of shape ``nu/lam`` and content ``mu``."""
    lam, mu, nu = Partition(lam), Partition(mu), Partition(nu)
    if nu.size != lam.size + mu.size or not nu.contains(lam) or not nu.contains(mu):
        return 0
    return _lr(lam, mu, nu)


def _check_subset(I: Sequence[int], n: int, k: int | None = None) -> tuple[int, ...]:
    I = tuple(int(i) for i in I)
    if k is not None and len(I) != k:
        raise ParameterError(f"subset {I} should have {k} elements")
    if any(not 1 <= i <= n for i in I) or any(a >= b for a, b in zip(I, I[1:])):
        raise ParameterError(f"subset {I} is not strictly increasing inside 1..{n}")
    return I


def subset_to_partition(I: Sequence[int], k: int, n: int) -> Partition:
    """``lam_a = i_{k+1-a} - (k+1-a)``."""
    I = _check_subset(I, n, k)
    return Partition(I[k - 1 - a] - (k - a) for a in range(k))


def _fmt(I: Sequence[int]) -> str:
    return "(" + ",".join(map(str, I)) + ")"


@dataclass(frozen=True, order=True)
class HornTriple:
    """Index subsets ``(I, J, K)`` of ``{1..n}`` of a common size ``k``."""

    I: tuple[int, ...]
    J: tuple[int, ...]
    K: tuple[int, ...]
    n: int

    def __post_init__(self):
        k = len(self.I)
        if not 1 <= k < self.n:
            raise ParameterError(f"need 1 <= k < n, got k={k}, n={self.n}")
        for S in (self.I, self.J, self.K):
            _check_subset(S, self.n, k)

    @property
    def k(self) -> int:
        return len(self.I)

    def swapped(self) -> "HornTriple":
        return HornTriple(self.J, self.I, self.K, self.n)

    def sort_key(self):
        return (self.k, self.I, self.J, self.K)

    def __str__(self):
        return _fmt(self.I) + _fmt(self.J) + _fmt(self.K)

    @classmethod
    def parse(cls, text: str, n: int) -> "HornTriple":
        groups = re.findall(r"\(([\d,\s]*)\)", text)
        if len(groups) != 3:
            raise ParameterError(f"cannot parse triple {text!r}")
        I, J, K = (tuple(int(t) for t in g.split(",") if t.strip()) for g in groups)
        return cls(I, J, K, n)


def is_horn_triple(t: HornTriple) -> bool:
    k, n = t.k, t.n
    return lr_coefficient(subset_to_partition(t.I, k, n), subset_to_partition(t.J, k, n), subset_to_partition(t.K, k, n)) > 0


def horn_triples(n: int, k: int) -> list[HornTriple]:
    """All triples with ``c^{lam(K)}_{lam(I), lam(J)} > 0``, sorted by K, then I, then J."""
    if not 1 <= k < n:
        raise ParameterError(f"need 1 <= k < n, got k={k}, n={n}")
    subsets = list(itertools.combinations(range(1, n + 1), k))
    parts = {S: subset_to_partition(S, k, n) for S in subsets}
    out = []
    for K in subsets:
        nu = parts[K]
        for I in subsets:
            lam = parts[I]
            if not nu.contains(lam):
                continue
            for J in subsets:
                mu = parts[J]
                if lam.size + mu.size != nu.size or not nu.contains(mu):
                    continue
                if _lr(lam, mu, nu) > 0:
                    out.append(HornTriple(I, J, K, n))
    return out


def all_horn_triples(n: int) -> list[HornTriple]:
    return [t for k in range(1, n) for t in horn_triples(n, k)]


def dual_subset(I: Sequence[int], n: int) -> tuple[int, ...]:
    """``I* = (n+1-i_n, ..., n+1-i_{k+1})`` from the complement of ``I``."""
    comp = [i for i in range(1, n + 1) if i not in set(I)]
    return tuple(n + 1 - i for i in reversed(comp))


def dual_triple(t: HornTriple) -> HornTriple:
    return HornTriple(dual_subset(t.I, t.n), dual_subset(t.J, t.n), dual_subset(t.K, t.n), t.n)


def triple_to_inequality(t: HornTriple) -> Inequality:
    """``sum_K nu - sum_I lam - sum_J mu <= 0`` on coordinates ``(lam, mu, nu)``."""
    n = t.n
    normal = [0] * (3 * n)
    for i in t.I:
        normal[i - 1] -= 1
    for j in t.J:
        normal[n + j - 1] -= 1
    for k in t.K:
        normal[2 * n + k - 1] += 1
    return Inequality.make(normal, 0)


def horn_table(n: int) -> list[tuple[HornTriple, HornTriple | None]]:
    """Rows ``(triple, dual)`` with one row per orbit of {I<->J swap, duality}.

    The row representative is the orbit minimum under ``(k, I, J, K)``; the
    dual entry is ``None`` for self-dual representatives.
    """
    if n < 2:
        return []
    triples = all_horn_triples(n)
    done: set[HornTriple] = set()
    rows = []
    for t in sorted(triples, key=HornTriple.sort_key):
        if t in done:
            continue
        d = dual_triple(t)
        orbit = {t, t.swapped(), d, d.swapped()}
        done |= orbit
        rep = min(orbit, key=HornTriple.sort_key)
        dual = dual_triple(rep)
        rows.append((rep, None if dual == rep else dual))
    return rows


def format_horn_table(n: int) -> str:
    rows = horn_table(n)
    lines = [f"# Horn-Klyachko triples for SU({n})"]
    current = None
    for rep, dual in rows:
        if rep.k != current:
            current = rep.k
            lines.append(f"# k={current}")
        lines.append(f"{rep} | {dual if dual is not None else ''}".rstrip())
    return "\n".join(lines) + "\n"
