"""Catalog of compact symmetric pairs with restricted root data.

Each pair carries exact linear maps between ``t*`` (ambient coordinates) and
``a*`` (restricted coordinates): ``embed`` realizes ``a*`` inside ``t*`` and
``restrict`` is the orthogonal projection back, so ``restrict(embed(y)) == y``.

Labels parse from ``"AI:4"``, ``"AIII:2,2"``, ``"BDI:2,3"``, ``"Torus:3"`` and
``"Diag:A3"`` (Cartan-type notation after ``Diag:``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from momentcone import _exact
from momentcone.errors import InvariantError, ParameterError, PreconditionError, UnsupportedOperationError
from momentcone.polytope import lp
from momentcone.polytope.core import (
    MAX_HULL_DIM,
    Inequality,
    Polytope,
    hull_from_points,
    remove_redundant,
    vertices,
)
from momentcone.rootsys import (
    RationalVector,
    RootSystem,
    WeylElement,
    build_root_system,
    product_root_system,
    root_system_from_type,
    trivial_root_system,
    weyl_orbit,
)

KINDS = ("AI", "AIII", "BDI", "Torus", "Diag")


@dataclass(frozen=True, eq=False)
class SymmetricPair:
    label: str
    kind: str
    params: tuple
    ambient: RootSystem
    restricted: RootSystem
    embed_matrix: tuple[tuple[Fraction, ...], ...]  # ambient_dim rows, a_dim columns
    restrict_matrix: tuple[tuple[Fraction, ...], ...]  # a_dim rows, ambient_dim columns
    weyl: "RestrictedWeylGroup" = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "weyl", RestrictedWeylGroup(self))

    @property
    def a_dim(self) -> int:
        return self.restricted.ambient_dim

    def embed(self, y: Sequence) -> RationalVector:
        if len(y) != self.a_dim:
            raise ParameterError(f"{self.label}: expected {self.a_dim} restricted coordinates, got {len(y)}")
        return RationalVector(_exact.dot(row, [Fraction(v) for v in y]) for row in self.embed_matrix)

    def restrict(self, x: Sequence) -> RationalVector:
        if len(x) != self.ambient.ambient_dim:
            raise ParameterError(f"{self.label}: expected {self.ambient.ambient_dim} ambient coordinates, got {len(x)}")
        return RationalVector(_exact.dot(row, [Fraction(v) for v in x]) for row in self.restrict_matrix)

    @cached_property
    def _image_complement(self) -> list[list[Fraction]]:
        # normals to the image of embed; restrict is the orthogonal-projection
        # left inverse, so x is fixed by embed . restrict iff it is orthogonal to these
        return _exact.nullspace(_exact.transpose([list(r) for r in self.embed_matrix]), self.ambient.ambient_dim)

    def in_embedded_subspace(self, x: Sequence) -> bool:
        if len(x) != self.ambient.ambient_dim:
            raise ParameterError(f"{self.label}: expected {self.ambient.ambient_dim} ambient coordinates, got {len(x)}")
        return all(_exact.dot(n, x) == 0 for n in self._image_complement)

    def restriction_scale(self) -> Fraction | None:
        """Common positive factor ``c`` with ``{restrict(alpha)} = c * R^a_+``."""
        images = {self.restrict(a) for a in self.ambient.positive_roots}
        images.discard(RationalVector([0] * self.a_dim))
        target = set(self.restricted.positive_roots)
        if not images and not target:
            return Fraction(1)
        if not images or not target:
            return None
        probe = next(iter(target))
        for img in images:
            ratios = {x / y for x, y in zip(img, probe) if y != 0}
            if len(ratios) == 1 and all((x == 0) == (y == 0) for x, y in zip(img, probe)):
                c = ratios.pop()
                if c > 0 and {v * (1 / c) for v in images} == target:
                    return c
        return None

    def check(self) -> None:
        """Construction-time invariants; raises :class:`InvariantError`."""
        for j in range(self.a_dim):
            e = [Fraction(int(i == j)) for i in range(self.a_dim)]
            if self.restrict(self.embed(e)) != RationalVector(e):
                raise InvariantError(f"{self.label}: restrict . embed is not the identity")
        for n in self._image_complement:
            if not self.restrict(n).is_zero():
                raise InvariantError(f"{self.label}: restrict is not the orthogonal projection onto the embedded space")
        if self.restriction_scale() is None:
            raise InvariantError(f"{self.label}: restricted roots are not the restrictions of ambient roots")
        # each ambient simple-root pairing, pulled back, must lie in the dual cone of the restricted chamber
        gens = [list(a) for a in self.restricted.simple_roots]
        for c in self.restricted.span_complement:
            gens.append(list(c))
            gens.append([-v for v in c])
        for alpha in self.ambient.simple_roots:
            pulled = [sum((alpha[i] * self.embed_matrix[i][j] for i in range(len(alpha))), Fraction(0)) for j in range(self.a_dim)]
            if not lp.in_cone(gens, pulled):
                raise InvariantError(f"{self.label}: embedded restricted chamber leaves the ambient chamber")

    def __repr__(self):
        return f"SymmetricPair({self.label})"


class RestrictedWeylGroup:
    """Restricted Weyl group of a pair, with the Bruhat order.

    Lower Bruhat intervals are memoized; the memo is filled on first use
    and only ever grows, so concurrent readers see consistent data.
    """

    def __init__(self, pair: SymmetricPair):
        self.pair = pair
        self.system = pair.restricted
        self._below: dict[WeylElement, frozenset[WeylElement]] = {}

    @property
    def order(self) -> int:
        return self.system.weyl_order

    def elements(self) -> list[WeylElement]:
        return self.system.weyl_group()

    def generators(self) -> list[WeylElement]:
        return [self.system.from_word((i,)) for i in range(1, self.system.rank + 1)]

    def parse(self, text: str) -> WeylElement:
        return self.system.parse_word(text)

    def longest(self) -> WeylElement:
        return self.system.longest_element()

    def _own(self, w: WeylElement) -> WeylElement:
        if w.group is not self.system:
            try:
                return self.system.element(w.matrix)
            except ParameterError:
                raise ParameterError(f"{w!r} is not an element of the restricted Weyl group of {self.pair.label}") from None
        return w

    def interval_below(self, w: WeylElement) -> frozenset[WeylElement]:
        """``{v : v <= w}`` as all products of subwords of one reduced word of ``w``."""
        w = self._own(w)
        got = self._below.get(w)
        if got is None:
            current = {self.system.identity()}
            for i in w.word:
                s = self.system.from_word((i,))
                current |= {x * s for x in current}
            got = frozenset(current)
            self._below[w] = got
        return got

    def leq(self, v: WeylElement, w: WeylElement) -> bool:
        return self._own(v) in self.interval_below(w)


def _identity(n: int):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _projection_left_inverse(embed: list[list[Fraction]]):
    """``(E^T E)^{-1} E^T`` for a full-column-rank ``E``."""
    et = _exact.transpose(embed)
    gram = _exact.matmul(et, embed)
    return _exact.matmul(_exact.inverse(gram), et)


def _freeze(m):
    return tuple(tuple(Fraction(v) for v in row) for row in m)


def aiii_embedding(p: int, q: int) -> list[list[Fraction]]:
    """Columns ``e_i - e_{n+1-i}``: ``y -> (y_1..y_p, 0^{q-p}, -y_p..-y_1)``."""
    n = p + q
    return [[Fraction(1 if i == j else -1 if i == n - 1 - j else 0) for j in range(p)] for i in range(n)]


def parse_label(label: str) -> tuple[str, tuple]:
    text = label.strip()
    m = re.fullmatch(r"(AIII|AI|BDI|Torus|Diag)\s*[:(]\s*([^)]*?)\s*\)?", text, flags=re.IGNORECASE)
    if not m:
        raise ParameterError(f"unknown pair label {label!r}")
    kind = next(k for k in KINDS if k.lower() == m.group(1).lower())
    arg = m.group(2)
    if kind == "Diag":
        return kind, (arg.replace(" ", "").upper(),)
    try:
        nums = tuple(int(t) for t in arg.split(","))
    except ValueError:
        raise ParameterError(f"bad parameters in pair label {label!r}") from None
    want = 2 if kind in ("AIII", "BDI") else 1
    if len(nums) != want:
        raise ParameterError(f"{kind} takes {want} parameter(s), got {len(nums)}")
    if any(v < 1 for v in nums):
        raise ParameterError(f"pair parameters must be positive: {label!r}")
    return kind, nums


def build_pair(label: str | tuple) -> SymmetricPair:
    """Build and verify a catalog pair from a label string or ``(kind, *params)``."""
    if isinstance(label, str):
        kind, params = parse_label(label)
    else:
        kind, params = parse_label(f"{label[0]}:{','.join(map(str, label[1:]))}")

    if kind == "AI":
        (n,) = params
        if n < 2:
            raise ParameterError("AI(n) needs n >= 2")
        rs = build_root_system("A", n)
        pair = SymmetricPair(f"AI({n})", kind, params, rs, rs, _identity(n), _identity(n))
    elif kind == "AIII":
        p, q = params
        if p > q:
            raise ParameterError(f"AIII(p,q) needs p <= q, got p={p}, q={q}")
        embed = aiii_embedding(p, q)
        restricted = build_root_system("BC" if p < q else "C", p)
        pair = SymmetricPair(
            f"AIII({p},{q})", kind, params, build_root_system("A", p + q), restricted,
            _freeze(embed), _freeze(_projection_left_inverse(embed)),
        )
    elif kind == "BDI":
        p, q = params
        if p > q:
            raise ParameterError(f"BDI(p,q) needs p <= q, got p={p}, q={q}")
        n = p + q
        m = n // 2
        if n % 2:
            ambient = build_root_system("B", m)
        elif m >= 2:
            ambient = build_root_system("D", m)
        else:
            raise ParameterError("BDI(1,1) has no roots; use Torus:1")
        if p < q:
            restricted = build_root_system("B", p)
        elif p >= 2:
            restricted = build_root_system("D", p)
        else:
            raise ParameterError("BDI(1,1) has no roots; use Torus:1")
        embed = [[Fraction(int(i == j)) for j in range(p)] for i in range(m)]
        pair = SymmetricPair(
            f"BDI({p},{q})", kind, params, ambient, restricted,
            _freeze(embed), _freeze(_exact.transpose(embed)),
        )
    elif kind == "Torus":
        (n,) = params
        rs = trivial_root_system(n)
        pair = SymmetricPair(f"Torus({n})", kind, params, rs, rs, _identity(n), _identity(n))
    else:
        (typ,) = params
        small = root_system_from_type(typ)
        d = small.ambient_dim
        half = Fraction(1, 2)
        embed = [[half if i % d == j else Fraction(0) for j in range(d)] for i in range(2 * d)]
        restrict = [[Fraction(1) if i % d == j else Fraction(0) for i in range(2 * d)] for j in range(d)]
        pair = SymmetricPair(
            f"Diag({typ})", kind, params, product_root_system(small, small), small,
            _freeze(embed), _freeze(restrict),
        )
    pair.check()
    return pair


CATALOG = (
    "AI:2", "AI:3", "AI:4", "AI:5",
    "AIII:1,2", "AIII:1,3", "AIII:1,4", "AIII:2,2", "AIII:2,3", "AIII:3,3",
    "BDI:1,2", "BDI:1,3", "BDI:2,2", "BDI:2,3", "BDI:3,4", "BDI:4,4",
    "Torus:2", "Torus:3", "Diag:A2", "Diag:B2", "Diag:C2", "Diag:A3",
)


def restricted_orbit(pair: SymmetricPair, lam: Sequence) -> set[RationalVector]:
    """Orbit of ``lam`` under the restricted Weyl group."""
    if len(lam) != pair.a_dim:
        raise ParameterError(f"{pair.label}: expected {pair.a_dim} restricted coordinates, got {len(lam)}")
    return weyl_orbit(pair.restricted, lam)


def weyl_hull_inequalities(rs: RootSystem, lam: Sequence) -> Polytope:
    """Unreduced H-representation of ``hull(W lam)`` for dominant ``lam``.

    ``x`` lies in the hull iff ``w x`` is below ``lam`` in dominance order for
    every ``w``: one inequality per Weyl image of each fundamental coweight,
    plus equalities fixing the component orthogonal to the root span.
    """
    lam = RationalVector(lam)
    rows: list[Inequality] = []
    for c in rs.span_complement:
        level = c.dot(lam)
        rows.append(Inequality.make(c, level))
        rows.append(Inequality.make(-c, -level))
    for cw in rs.coweights:
        level = cw.dot(lam)
        for eta in weyl_orbit(rs, cw):
            rows.append(Inequality.make(eta, level))
    return Polytope(rs.ambient_dim, tuple(dict.fromkeys(rows)))


def kostant_polytope(pair: SymmetricPair, lam: Sequence) -> Polytope:
    """``hull(W^a lam)`` in both representations."""
    lam = RationalVector(lam)
    if len(lam) != pair.a_dim:
        raise ParameterError(f"{pair.label}: expected {pair.a_dim} restricted coordinates, got {len(lam)}")
    if not pair.restricted.is_dominant(lam):
        raise ParameterError(f"{lam!r} is not dominant for {pair.label}; use dominant_representative first")
    P = remove_redundant(weyl_hull_inequalities(pair.restricted, lam))
    orbit = tuple(sorted(restricted_orbit(pair, lam)))
    return Polytope(P.dim, P.hrep, vrep=orbit, reduced=True, bounded=True)


def bruhat_leq(pair: SymmetricPair, v: WeylElement, w: WeylElement) -> bool:
    return pair.weyl.leq(v, w)


def dominant_points(pair: SymmetricPair, lam: Sequence, mu: Sequence, below: WeylElement | None = None) -> set[RationalVector]:
    """``{u(lam + v mu) dominant : u, v in W^a, v <= below}`` (all ``v`` if ``below`` is None)."""
    lam, mu = RationalVector(lam), RationalVector(mu)
    W = pair.weyl.elements()
    vs = W if below is None else [v for v in W if pair.weyl.leq(v, below)]
    out = set()
    for v in vs:
        base = lam + v.act(mu)
        for u in W:
            x = u.act(base)
            if pair.restricted.is_dominant(x):
                out.add(x)
    return out


def orbit_closure_polytope(pair: SymmetricPair, lam: Sequence, mu: Sequence, w: WeylElement) -> Polytope:
    """Moment polytope of the closure of the orbit ``O_w`` in ``K lam x K mu``.

    Requires the full product polytope to sit in the open chamber; otherwise
    raises :class:`PreconditionError` naming the wall it touches.
    """
    from momentcone.polytope.klyachko import klyachko_polytope

    lam, mu = RationalVector(lam), RationalVector(mu)
    for name, x in (("lambda", lam), ("mu", mu)):
        if len(x) != pair.a_dim or not pair.restricted.is_dominant(x):
            raise ParameterError(f"{name}={x!r} is not a dominant restricted weight for {pair.label}")
    w = pair.weyl._own(w)
    if pair.a_dim > MAX_HULL_DIM:
        raise UnsupportedOperationError(f"orbit-closure hulls are limited to rank <= {MAX_HULL_DIM}")
    full = klyachko_polytope(pair, lam, mu)
    for vert in full.vrep or vertices(full):
        for i, alpha in enumerate(pair.restricted.simple_roots, start=1):
            if alpha.dot(vert) <= 0:
                raise PreconditionError(
                    f"product polytope touches the wall of alpha_{i}={alpha!r} at vertex {vert!r}; "
                    "orbit-closure polytopes need it inside the open chamber"
                )
    return hull_from_points(dominant_points(pair, lam, mu, below=w))
