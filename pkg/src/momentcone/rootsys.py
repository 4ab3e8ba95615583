"""Exact root systems of the classical families and their Weyl groups.

All arithmetic is over :class:`fractions.Fraction`.  Roots live in the
standard coordinate realization; type ``A_{n-1}`` uses ``n`` coordinates with
the sum-zero hyperplane understood rather than quotiented out.

Simple roots follow Bourbaki order::

    A_{n-1}: e1-e2, ..., e_{n-1}-e_n
    B_n:     e1-e2, ..., e_{n-1}-e_n, e_n
    C_n:     e1-e2, ..., e_{n-1}-e_n, 2e_n
    D_n:     e1-e2, ..., e_{n-1}-e_n, e_{n-1}+e_n
    BC_n:    e1-e2, ..., e_{n-1}-e_n, e_n        (2e_n is a root, not simple)

Reflection indices are 1-based, matching the ``s1``, ``s2`` notation.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

from momentcone import _exact
from momentcone.errors import ParameterError

FAMILIES = ("A", "B", "C", "D", "BC")


class RationalVector(tuple):
    """Immutable exact-rational coordinate vector.

    Behaves as a tuple of :class:`Fraction` for hashing and indexing, but
    ``+``, ``-`` and scalar ``*`` are the vector-space operations.
    """

    __slots__ = ()

    def __new__(cls, coords: Iterable = ()):
        return super().__new__(cls, (Fraction(c) for c in coords))

    @property
    def dim(self) -> int:
        return len(self)

    def _check(self, other) -> None:
        if len(other) != len(self):
            raise ParameterError(f"dimension mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other):
        self._check(other)
        return RationalVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        self._check(other)
        return RationalVector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return RationalVector(-a for a in self)

    def __mul__(self, scalar):
        return RationalVector(a * scalar for a in self)

    __rmul__ = __mul__

    def dot(self, other) -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self, other)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self)

    def __repr__(self) -> str:
        return "(" + ", ".join(str(a) for a in self) + ")"


def vec(*coords) -> RationalVector:
    """Shorthand: ``vec(1, '1/2')`` or ``vec([1, 2])``."""
    if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)):
        coords = tuple(coords[0])
    return RationalVector(Fraction(c) for c in coords)


def unit(n: int, i: int, scale=1) -> RationalVector:
    return RationalVector(Fraction(scale) if j == i else Fraction(0) for j in range(n))


def _reflect(alpha: Sequence[Fraction], x: Sequence[Fraction]) -> RationalVector:
    # roots are sparse; touch only their support
    support = [(i, a) for i, a in enumerate(alpha) if a]
    na = sum(a * a for _, a in support)
    c = 2 * sum(a * x[i] for i, a in support) / na
    if not c:
        return x if isinstance(x, RationalVector) else RationalVector(x)
    out = list(x)
    for i, a in support:
        out[i] = out[i] - c * a
    return tuple.__new__(RationalVector, (Fraction(v) for v in out))


def _reflection_matrix(alpha: Sequence[Fraction]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(alpha)
    na = sum(a * a for a in alpha)
    return tuple(
        tuple(Fraction(int(i == j)) - 2 * alpha[i] * alpha[j] / na for j in range(n))
        for i in range(n)
    )


def _matmul(a, b):
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


@dataclass(frozen=True, eq=False)
class WeylElement:
    """A Weyl group element as an exact matrix plus a reduced word.

    ``matrix == s_{word[0]} @ s_{word[1]} @ ...``, so the last letter acts
    first on a vector.
    """

    matrix: tuple[tuple[Fraction, ...], ...]
    word: tuple[int, ...]
    group: "RootSystem" = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    @property
    def length(self) -> int:
        return len(self.word)

    def act(self, x: Sequence) -> RationalVector:
        if len(x) != len(self.matrix):
            raise ParameterError(f"dimension mismatch: {len(x)} vs {len(self.matrix)}")
        return RationalVector(sum((a * Fraction(b) for a, b in zip(row, x)), Fraction(0)) for row in self.matrix)

    __call__ = act

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return self.group.element(_matmul(self.matrix, other.matrix))

    def inverse(self) -> "WeylElement":
        return self.group.element(tuple(zip(*self.matrix)))

    def word_str(self) -> str:
        return "".join(f"s{i}" for i in self.word) or "e"

    def __repr__(self):
        return f"WeylElement({self.word_str()})"


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Positive and simple roots of a (possibly reducible) root system."""

    family: str
    rank: int
    ambient_dim: int
    positive_roots: tuple[RationalVector, ...]
    simple_roots: tuple[RationalVector, ...]

    @property
    def roots(self) -> tuple[RationalVector, ...]:
        return self.positive_roots + tuple(-a for a in self.positive_roots)

    @property
    def is_reduced(self) -> bool:
        pos = set(self.positive_roots)
        return not any(a * 2 in pos for a in self.positive_roots)

    def reflect(self, i: int, x: Sequence) -> RationalVector:
        """Apply the simple reflection ``s_i`` (1-based)."""
        self._check_dim(x)
        return _reflect(self.simple_roots[i - 1], x)

    def reflect_root(self, alpha: Sequence, x: Sequence) -> RationalVector:
        self._check_dim(x)
        return _reflect(alpha, x)

    def _check_dim(self, x: Sequence) -> None:
        if len(x) != self.ambient_dim:
            raise ParameterError(f"expected a vector of length {self.ambient_dim}, got {len(x)}")

    def pairings(self, x: Sequence) -> list[Fraction]:
        """Inner products of ``x`` with the simple roots."""
        self._check_dim(x)
        return [a.dot(x) for a in self.simple_roots]

    def is_dominant(self, x: Sequence) -> bool:
        return all(p >= 0 for p in self.pairings(x))

    def is_strictly_dominant(self, x: Sequence) -> bool:
        return all(p > 0 for p in self.pairings(x))

    @cached_property
    def span_complement(self) -> tuple[RationalVector, ...]:
        """Basis of the orthogonal complement of the root span."""
        rows = [list(a) for a in self.simple_roots]
        return tuple(RationalVector(v) for v in _exact.nullspace(rows, self.ambient_dim))

    @cached_property
    def coweights(self) -> tuple[RationalVector, ...]:
        """Dual basis to the simple roots inside their span.

        ``coweights[i] . simple_roots[j] == delta_ij``.  A vector ``x`` in the
        root span lies in the root cone iff every ``coweights[i] . x >= 0``.
        """
        if self.rank == 0:
            return ()
        gram = [[a.dot(b) for b in self.simple_roots] for a in self.simple_roots]
        ginv = _exact.inverse(gram)
        out = []
        for i in range(self.rank):
            w = RationalVector([0] * self.ambient_dim)
            for j, a in enumerate(self.simple_roots):
                w = w + a * ginv[i][j]
            out.append(w)
        return tuple(out)

    # -- Weyl group -----------------------------------------------------

    @cached_property
    def _simple_matrices(self):
        return tuple(_reflection_matrix(a) for a in self.simple_roots)

    @cached_property
    def _elements(self) -> dict:
        """All group elements keyed by matrix, built breadth first."""
        n = self.ambient_dim
        ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
        found = {ident: WeylElement(ident, (), self)}
        queue = deque([found[ident]])
        while queue:
            g = queue.popleft()
            for i, s in enumerate(self._simple_matrices, start=1):
                m = _matmul(g.matrix, s)
                if m not in found:
                    found[m] = WeylElement(m, g.word + (i,), self)
                    queue.append(found[m])
        return found

    def weyl_group(self) -> list[WeylElement]:
        """Group elements in order of nondecreasing length."""
        return list(self._elements.values())

    @property
    def weyl_order(self) -> int:
        return len(self._elements)

    def element(self, matrix) -> WeylElement:
        try:
            return self._elements[matrix]
        except KeyError:
            raise ParameterError("matrix is not an element of this Weyl group") from None

    def identity(self) -> WeylElement:
        return self.weyl_group()[0]

    def longest_element(self) -> WeylElement:
        return max(self.weyl_group(), key=lambda g: g.length)

    def from_word(self, word: Sequence[int]) -> WeylElement:
        m = self.identity().matrix
        for i in word:
            if not 1 <= i <= self.rank:
                raise ParameterError(f"reflection index {i} out of range 1..{self.rank}")
            m = _matmul(m, self._simple_matrices[i - 1])
        return self._elements[m]

    def parse_word(self, text: str) -> WeylElement:
        """Parse ``"s2s1"``, ``"2,1"`` or ``"e"`` into a group element."""
        text = text.strip()
        if text in ("", "e", "1", "id"):
            return self.identity()
        if re.fullmatch(r"(s\d+)+", text):
            word = [int(t) for t in re.findall(r"s(\d+)", text)]
        elif re.fullmatch(r"\d+(,\d+)*", text):
            word = [int(t) for t in text.split(",")]
        else:
            raise ParameterError(f"cannot parse Weyl word {text!r}")
        return self.from_word(word)

    def expected_weyl_order(self) -> int:
        """Closed-form group order for the irreducible classical families."""
        n = self.rank
        if self.family == "A":
            return factorial(n + 1)
        if self.family in ("B", "C", "BC"):
            return 2**n * factorial(n)
        if self.family == "D":
            return 2 ** (n - 1) * factorial(n)
        if self.family == "T":
            return 1
        raise ParameterError(f"no closed form for family {self.family}")

    def __repr__(self):
        return f"RootSystem({self.family}, rank={self.rank}, dim={self.ambient_dim})"


def _e(n: int, *terms: tuple[int, int]) -> RationalVector:
    v = [Fraction(0)] * n
    for idx, c in terms:
        v[idx] += c
    return RationalVector(v)


def build_root_system(family: str, rank: int) -> RootSystem:
    """Standard realization of a classical root system.

    For family ``A`` the second argument is the number of coordinates ``n``
    and the result is ``A_{n-1}``; for the other families it is the rank.
    """
    family = str(family).upper()
    if family not in FAMILIES:
        raise ParameterError(f"unsupported root system family {family!r}")
    if not isinstance(rank, int) or rank < 1:
        raise ParameterError(f"rank must be a positive integer, got {rank!r}")
    if family == "D" and rank < 2:
        raise ParameterError("family D needs rank >= 2")
    n = rank
    pos: list[RationalVector] = []
    for i in range(n):
        for j in range(i + 1, n):
            pos.append(_e(n, (i, 1), (j, -1)))
    if family != "A":
        for i in range(n):
            for j in range(i + 1, n):
                pos.append(_e(n, (i, 1), (j, 1)))
    if family in ("B", "BC"):
        pos.extend(_e(n, (i, 1)) for i in range(n))
    if family in ("C", "BC"):
        pos.extend(_e(n, (i, 2)) for i in range(n))

    simple = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
    if family in ("B", "BC"):
        simple.append(_e(n, (n - 1, 1)))
    elif family == "C":
        simple.append(_e(n, (n - 1, 2)))
    elif family == "D":
        simple.append(_e(n, (n - 2, 1), (n - 1, 1)))
    lie_rank = n - 1 if family == "A" else n
    return RootSystem(family, lie_rank, n, tuple(pos), tuple(simple))


def trivial_root_system(dim: int) -> RootSystem:
    """Empty root system on ``dim`` coordinates (the torus case)."""
    if dim < 1:
        raise ParameterError("dimension must be positive")
    return RootSystem("T", 0, dim, (), ())


def product_root_system(first: RootSystem, second: RootSystem) -> RootSystem:
    """Orthogonal direct sum on concatenated coordinates."""
    z1 = [0] * first.ambient_dim
    z2 = [0] * second.ambient_dim
    pos = tuple(RationalVector(list(a) + z2) for a in first.positive_roots) + tuple(
        RationalVector(z1 + list(a)) for a in second.positive_roots
    )
    simple = tuple(RationalVector(list(a) + z2) for a in first.simple_roots) + tuple(
        RationalVector(z1 + list(a)) for a in second.simple_roots
    )
    return RootSystem(
        f"{first.family}x{second.family}",
        first.rank + second.rank,
        first.ambient_dim + second.ambient_dim,
        pos,
        simple,
    )


def root_system_from_type(text: str) -> RootSystem:
    """Parse Cartan-type notation such as ``"A3"``, ``"BC2"``, ``"D4"``.

    Unlike :func:`build_root_system`, ``A3`` here means the rank-3 system
    ``A_3`` on four coordinates.
    """
    m = re.fullmatch(r"\s*(BC|[A-Za-z]+)\s*_?(\d+)\s*", text)
    if not m:
        raise ParameterError(f"cannot parse root system type {text!r}")
    family, r = m.group(1).upper(), int(m.group(2))
    if family == "A":
        return build_root_system("A", r + 1)
    return build_root_system(family, r)


def weyl_orbit(rs: RootSystem, lam: Sequence) -> set[RationalVector]:
    """Closure of ``{lam}`` under the simple reflections."""
    start = RationalVector(lam)
    rs._check_dim(start)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for a in rs.simple_roots:
            y = _reflect(a, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def dominant_representative(rs: RootSystem, xi: Sequence) -> tuple[RationalVector, WeylElement]:
    """Return ``(lam, w)`` with ``lam = w(xi)`` in the closed dominant chamber."""
    x = RationalVector(xi)
    rs._check_dim(x)
    applied: list[int] = []
    while True:
        bad = next((i for i, a in enumerate(rs.simple_roots, start=1) if a.dot(x) < 0), None)
        if bad is None:
            break
        x = _reflect(rs.simple_roots[bad - 1], x)
        applied.append(bad)
    # x = s_{applied[-1]} ... s_{applied[0]} xi
    w = rs.from_word(tuple(reversed(applied))) if rs.rank else rs.identity()
    return x, w


def cone_coefficients(rs: RootSystem, xi: Sequence) -> list[Fraction] | None:
    """Coordinates of ``xi`` in the simple-root basis, or None if outside the span."""
    x = RationalVector(xi)
    rs._check_dim(x)
    if rs.rank == 0:
        return [] if x.is_zero() else None
    cols = [[a[i] for a in rs.simple_roots] for i in range(rs.ambient_dim)]
    return _exact.solve_any(cols, list(x), rs.rank)


def cone_member(rs: RootSystem, xi: Sequence) -> bool:
    """Is ``xi`` a nonnegative combination of positive roots?"""
    coeffs = cone_coefficients(rs, xi)
    return coeffs is not None and all(c >= 0 for c in coeffs)


def dominance_leq(rs: RootSystem, xi: Sequence, lam: Sequence) -> bool:
    """Partial order ``xi <= lam`` defined by the root cone."""
    return cone_member(rs, RationalVector(lam) - RationalVector(xi))
