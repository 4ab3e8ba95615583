"""Exact rational convex polyhedra in H- and V-representation."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from momentcone import _exact
from momentcone.errors import ParameterError, UnsupportedOperationError
from momentcone.polytope import lp
from momentcone.rootsys import RationalVector

MAX_VERTEX_DIM = 4
MAX_HULL_DIM = 3


@dataclass(frozen=True)
class Inequality:
    """``normal . x <= offset``, scaled so ``(normal, offset)`` is a primitive integer vector."""

    normal: RationalVector
    offset: Fraction

    @classmethod
    def make(cls, normal: Iterable, offset) -> "Inequality":
        normal = RationalVector(normal)
        offset = Fraction(offset)
        ints = _exact.primitive_integer(list(normal) + [offset])
        if all(v == 0 for v in ints[:-1]):
            # trivial: 0 <= offset, keep only its truth value
            return cls(RationalVector([0] * len(normal)), Fraction(1 if offset >= 0 else -1))
        return cls(RationalVector(ints[:-1]), Fraction(ints[-1]))

    @property
    def dim(self) -> int:
        return len(self.normal)

    @property
    def is_trivial(self) -> bool:
        return self.normal.is_zero()

    def value(self, x: Sequence) -> Fraction:
        """Slack ``offset - normal . x`` (nonnegative iff satisfied)."""
        return self.offset - self.normal.dot(x)

    def satisfied_by(self, x: Sequence) -> bool:
        return self.value(x) >= 0

    def to_text(self) -> str:
        return " ".join(str(int(a)) for a in self.normal) + " | " + str(int(self.offset))

    @classmethod
    def from_text(cls, line: str) -> "Inequality":
        lhs, _, rhs = line.partition("|")
        if not _:
            raise ParameterError(f"malformed inequality line {line!r}")
        return cls.make([Fraction(t) for t in lhs.split()], Fraction(rhs.strip()))

    def pretty(self, names: Sequence[str]) -> str:
        """Human-readable ``lhs <= rhs`` with positive coefficients on both sides."""
        left = [(a, n) for a, n in zip(self.normal, names) if a > 0]
        right = [(-a, n) for a, n in zip(self.normal, names) if a < 0]

        def side(terms, const=Fraction(0)):
            parts = [(n if c == 1 else f"{c}{n}") for c, n in terms]
            if const or not parts:
                parts.append(str(const))
            return " + ".join(parts)

        b = self.offset
        if not left and b > 0:
            return f"{-b} <= {side(right)}"
        if b >= 0 or not right:
            return f"{side(left)} <= {side(right, b)}"
        return f"{side(left, -b)} <= {side(right)}"


@dataclass(frozen=True)
class Polytope:
    """Closed convex polyhedron ``{x : normal_i . x <= offset_i}``.

    ``vrep`` (when present) is the exact vertex list.  ``empty`` marks the
    distinguished empty result of :func:`remove_redundant`.
    """

    dim: int
    hrep: tuple[Inequality, ...]
    vrep: tuple[RationalVector, ...] | None = None
    reduced: bool = False
    bounded: bool | None = None
    empty: bool = False

    @classmethod
    def from_inequalities(cls, dim: int, rows: Iterable[tuple[Iterable, object]], **kw) -> "Polytope":
        ineqs = tuple(Inequality.make(a, b) for a, b in rows)
        for q in ineqs:
            if q.dim != dim:
                raise ParameterError(f"inequality of dimension {q.dim} in a {dim}-dimensional polytope")
        return cls(dim, ineqs, **kw)

    @classmethod
    def empty_set(cls, dim: int) -> "Polytope":
        return cls(dim, (Inequality.make([0] * dim, -1),), vrep=(), reduced=True, bounded=True, empty=True)

    @classmethod
    def point(cls, p: Sequence) -> "Polytope":
        p = RationalVector(p)
        d = len(p)
        rows = []
        for i in range(d):
            e = [0] * d
            e[i] = 1
            rows.append((e, p[i]))
            rows.append(([-v for v in e], -p[i]))
        return cls.from_inequalities(d, rows, vrep=(p,), reduced=True, bounded=True)

    @classmethod
    def interval(cls, lo, hi) -> "Polytope":
        lo, hi = Fraction(lo), Fraction(hi)
        if lo == hi:
            return cls.point([lo])
        return cls.from_inequalities(1, [([1], hi), ([-1], -lo)], vrep=(RationalVector([lo]), RationalVector([hi])), reduced=True, bounded=True)

    @property
    def matrix(self) -> list[list[Fraction]]:
        return [list(q.normal) for q in self.hrep]

    @property
    def offsets(self) -> list[Fraction]:
        return [q.offset for q in self.hrep]

    def contains(self, x: Sequence) -> bool:
        return membership(self, x)

    def tight(self, x: Sequence) -> list[Inequality]:
        return [q for q in self.hrep if not q.is_trivial and q.value(x) == 0]

    def with_inequalities(self, extra: Iterable[Inequality]) -> "Polytope":
        return Polytope(self.dim, self.hrep + tuple(extra))

    def to_text(self) -> str:
        return "\n".join(q.to_text() for q in self.hrep)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "empty": self.empty,
            "hrep": [{"normal": [int(a) for a in q.normal], "offset": int(q.offset)} for q in self.hrep],
            "vrep": None if self.vrep is None else [[str(c) for c in v] for v in self.vrep],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Polytope":
        if isinstance(data, str):
            data = json.loads(data)
        hrep = tuple(Inequality.make(q["normal"], q["offset"]) for q in data["hrep"])
        vrep = data.get("vrep")
        if vrep is not None:
            vrep = tuple(RationalVector(Fraction(c) for c in v) for v in vrep)
        return cls(data["dim"], hrep, vrep=vrep, empty=data.get("empty", False))

    @classmethod
    def from_text(cls, text: str, dim: int | None = None) -> "Polytope":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        ineqs = tuple(Inequality.from_text(ln) for ln in lines)
        if dim is None:
            if not ineqs:
                raise ParameterError("cannot infer dimension of an empty inequality list")
            dim = ineqs[0].dim
        return cls(dim, ineqs)


def _check_dim(P: Polytope, x: Sequence) -> None:
    if len(x) != P.dim:
        raise ParameterError(f"dimension mismatch: point of length {len(x)}, polytope of dim {P.dim}")


def membership(P: Polytope, x: Sequence) -> bool:
    """Exact evaluation of every inequality at ``x``."""
    _check_dim(P, x)
    if P.empty:
        return False
    x = [Fraction(v) for v in x]
    return all(q.satisfied_by(x) for q in P.hrep)


def is_empty(P: Polytope) -> bool:
    if P.empty:
        return True
    if any(q.is_trivial and q.offset < 0 for q in P.hrep):
        return True
    return not lp.is_feasible(P.matrix, P.offsets)


def is_bounded(P: Polytope) -> bool:
    """Bounded iff the rows' conic hull is the whole space (P assumed nonempty)."""
    rows = [list(q.normal) for q in P.hrep if not q.is_trivial]
    for i in range(P.dim):
        for s in (1, -1):
            e = [0] * P.dim
            e[i] = s
            if not lp.in_cone(rows, e):
                return False
    return True


def substitute(P: Polytope, matrix: Sequence[Sequence], shift: Sequence | None = None) -> Polytope:
    """Pull ``P`` back through the affine map ``y -> matrix y + shift``.

    ``matrix`` has ``P.dim`` rows; the result lives in ``len(matrix[0])``
    coordinates and is not reduced.
    """
    if len(matrix) != P.dim:
        raise ParameterError(f"map has {len(matrix)} output coordinates, polytope has dim {P.dim}")
    k = len(matrix[0]) if matrix else 0
    shift = [Fraction(0)] * P.dim if shift is None else [Fraction(v) for v in shift]
    if len(shift) != P.dim:
        raise ParameterError("shift has the wrong length")
    cols = [[Fraction(matrix[r][c]) for r in range(P.dim)] for c in range(k)]
    out = []
    for q in P.hrep:
        normal = [_exact.dot(q.normal, col) for col in cols]
        out.append(Inequality.make(normal, q.offset - q.normal.dot(shift)))
    return Polytope(k, tuple(out))


def remove_redundant(P: Polytope) -> Polytope:
    """Minimal H-representation; inequality ``i`` survives iff the others allow
    ``normal_i . x`` to exceed ``offset_i`` (decided by exact LP).

    Returns :meth:`Polytope.empty_set` for an empty polyhedron.
    """
    if P.empty:
        return P
    seen: dict[Inequality, None] = {}
    for q in P.hrep:
        if q.is_trivial:
            if q.offset < 0:
                return Polytope.empty_set(P.dim)
            continue
        seen.setdefault(q)
    cur = list(seen)
    if not lp.is_feasible([list(q.normal) for q in cur], [q.offset for q in cur]):
        return Polytope.empty_set(P.dim)
    i = 0
    while i < len(cur):
        others = cur[:i] + cur[i + 1:]
        a = [list(q.normal) for q in others]
        b = [q.offset for q in others]
        if others and lp.implies(a, b, list(cur[i].normal), cur[i].offset):
            del cur[i]
        else:
            i += 1
    out = Polytope(P.dim, tuple(cur), vrep=P.vrep, reduced=True)
    return replace(out, bounded=is_bounded(out))


def vertices(P: Polytope) -> list[RationalVector]:
    """All vertices by intersecting ``dim``-tuples of facets (dim <= 4)."""
    if P.dim > MAX_VERTEX_DIM:
        raise UnsupportedOperationError(f"vertex enumeration is limited to dim <= {MAX_VERTEX_DIM}")
    if P.empty or is_empty(P):
        return []
    if not P.reduced:
        P = remove_redundant(P)
    if P.bounded is False or (P.bounded is None and not is_bounded(P)):
        raise UnsupportedOperationError("vertex enumeration needs a bounded polytope")
    d = P.dim
    ineqs = [q for q in P.hrep if not q.is_trivial]
    found: set[RationalVector] = set()
    for combo in itertools.combinations(ineqs, d):
        x = _exact.solve([list(q.normal) for q in combo], [q.offset for q in combo])
        if x is None:
            continue
        x = RationalVector(x)
        if x not in found and all(q.satisfied_by(x) for q in ineqs):
            found.add(x)
    return sorted(found)


def hull_from_points(points: Iterable[Sequence]) -> Polytope:
    """Minimal H-representation of the convex hull of finitely many points.

    Works for any ambient dimension as long as the affine hull of the points
    has dimension at most 3: candidate facets are hyperplanes (inside the
    affine hull) spanned by point subsets, kept when every point lies weakly
    on one side.
    """
    pts = sorted({RationalVector(p) for p in points})
    if not pts:
        raise ParameterError("convex hull of an empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ParameterError("points of different dimensions")
    p0 = pts[0]
    if len(pts) == 1:
        return Polytope.point(p0)
    diffs = [list(p - p0) for p in pts[1:]]
    basis, _ = _exact.rref(diffs)
    k = len(basis)
    if k > MAX_HULL_DIM:
        raise UnsupportedOperationError(f"generic hull is limited to affine dimension <= {MAX_HULL_DIM}")
    rows: list[Inequality] = []
    for n in _exact.nullspace(basis, d):
        c = _exact.dot(n, p0)
        rows.append(Inequality.make(n, c))
        rows.append(Inequality.make([-v for v in n], -c))
    facets: dict[Inequality, None] = {}
    for combo in itertools.combinations(pts, k):
        # normal = basis^T c with (basis^T c) . (q_j - q_0) = 0
        eqs = [[_exact.dot(b, list(q - combo[0])) for b in basis] for q in combo[1:]]
        null = _exact.nullspace(eqs, k) if eqs else [[Fraction(1)]]
        if len(null) != 1:
            continue
        coef = null[0]
        normal = [sum((coef[i] * basis[i][j] for i in range(k)), Fraction(0)) for j in range(d)]
        level = _exact.dot(normal, combo[0])
        vals = [_exact.dot(normal, p) - level for p in pts]
        if all(v <= 0 for v in vals):
            facets.setdefault(Inequality.make(normal, level))
        elif all(v >= 0 for v in vals):
            facets.setdefault(Inequality.make([-v for v in normal], -level))
    hull = Polytope(d, tuple(rows) + tuple(facets), reduced=True, bounded=True)
    verts = tuple(p for p in pts if _is_extreme(hull, p, k))
    return replace(hull, vrep=verts)


def _is_extreme(P: Polytope, p: RationalVector, k: int) -> bool:
    tight = [list(q.normal) for q in P.hrep if q.value(p) == 0]
    return _exact.rank(tight) == P.dim if tight else k == 0


def contains_polytope(P: Polytope, Q: Polytope) -> bool:
    """Is ``Q`` a subset of ``P``?"""
    if P.dim != Q.dim:
        raise ParameterError(f"dimension mismatch: {P.dim} vs {Q.dim}")
    if Q.empty or is_empty(Q):
        return True
    if P.empty:
        return False
    a, b = Q.matrix, Q.offsets
    for q in P.hrep:
        if q.is_trivial:
            if q.offset < 0:
                return False
            continue
        if not lp.implies(a, b, list(q.normal), q.offset):
            return False
    return True


def equal(P: Polytope, Q: Polytope) -> bool:
    """Set equality by mutual inclusion."""
    return contains_polytope(P, Q) and contains_polytope(Q, P)


def intersect(P: Polytope, Q: Polytope) -> Polytope:
    if P.dim != Q.dim:
        raise ParameterError(f"dimension mismatch: {P.dim} vs {Q.dim}")
    return Polytope(P.dim, P.hrep + Q.hrep)


def maximize(P: Polytope, objective: Sequence) -> Fraction | None:
    """Maximum of a linear functional over a nonempty ``P``; None if unbounded."""
    res = lp.maximize(P.matrix, P.offsets, [Fraction(v) for v in objective])
    if res.status == lp.INFEASIBLE:
        raise ParameterError("maximize over an empty polytope")
    return res.value if res.status == lp.OPTIMAL else None


def vertex_centroid(P: Polytope) -> RationalVector:
    verts = P.vrep if P.vrep is not None else vertices(P)
    if not verts:
        raise ParameterError("centroid of an empty polytope")
    d = len(verts[0])
    return RationalVector(sum((v[i] for v in verts), Fraction(0)) / len(verts) for i in range(d))


def scale_about(P: Polytope, factor, center: Sequence | None = None) -> Polytope:
    """Image of ``P`` under ``x -> c + factor (x - c)``; ``c`` defaults to the vertex centroid."""
    factor = Fraction(factor)
    if factor <= 0:
        raise ParameterError("scale factor must be positive")
    c = vertex_centroid(P) if center is None else RationalVector(center)
    rows = tuple(
        q if q.is_trivial else Inequality.make(q.normal, factor * q.offset + (1 - factor) * q.normal.dot(c))
        for q in P.hrep
    )
    vrep = None if P.vrep is None else tuple(c + (v - c) * factor for v in P.vrep)
    return Polytope(P.dim, rows, vrep=vrep, reduced=P.reduced, bounded=P.bounded, empty=P.empty)
