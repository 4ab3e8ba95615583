"""Exact checks of the structural identities linking a pair's restricted data
to its ambient root system.  Each check returns True/False on one input and
never raises for a mathematically valid input.

Used by the test suite and by the ``check`` command.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from momentcone.polytope.core import equal, remove_redundant, substitute
from momentcone.rootsys import RationalVector, cone_member, dominant_representative, weyl_orbit
from momentcone.sympair import SymmetricPair, kostant_polytope, restricted_orbit, weyl_hull_inequalities


def random_rational(rng: random.Random, bound: int = 9, den: int = 6) -> Fraction:
    return Fraction(rng.randint(-bound * den, bound * den), rng.randint(1, den))


def random_vector(rng: random.Random, dim: int, **kw) -> RationalVector:
    return RationalVector(random_rational(rng, **kw) for _ in range(dim))


def random_dominant(pair: SymmetricPair, rng: random.Random, **kw) -> RationalVector:
    """Random rational point of the closed restricted chamber.

    Points are drawn uniformly from a box and folded into the chamber; every
    fifth draw has a repeated coordinate so that walls are exercised too.
    """
    x = list(random_vector(rng, pair.a_dim, **kw))
    if pair.a_dim > 1 and rng.random() < 0.2:
        i = rng.randrange(pair.a_dim - 1)
        x[i + 1] = x[i]
    lam, _ = dominant_representative(pair.restricted, x)
    return lam


def random_root_cone_probe(pair: SymmetricPair, rng: random.Random) -> RationalVector:
    """Point of the restricted root span with random-signed simple-root coefficients,
    biased toward the cone so both answers occur."""
    simple = pair.restricted.simple_roots
    if not simple or rng.random() < 0.15:
        return random_vector(rng, pair.a_dim)
    out = RationalVector([0] * pair.a_dim)
    for alpha in simple:
        c = Fraction(rng.randint(-2, 12), rng.randint(1, 4))
        out = out + alpha * c
    return out


def chambers_identity(pair: SymmetricPair, lam) -> bool:
    """Dominant restricted weights embed into the closed ambient chamber."""
    return pair.ambient.is_dominant(pair.embed(lam))


def cone_identity(pair: SymmetricPair, xi) -> bool:
    """Restricted cone membership agrees with ambient cone membership after embedding."""
    return cone_member(pair.restricted, xi) == cone_member(pair.ambient, pair.embed(xi))


def orbit_identity(pair: SymmetricPair, lam) -> bool:
    """Restricted orbit = restrictions of ambient-orbit points lying in the embedded subspace."""
    lifted = {pair.restrict(x) for x in weyl_orbit(pair.ambient, pair.embed(lam)) if pair.in_embedded_subspace(x)}
    return lifted == restricted_orbit(pair, lam)


def kostant_identity(pair: SymmetricPair, lam) -> bool:
    """hull(W^a lam) equals the ambient hull of W lam pulled back to the restricted space."""
    ambient = weyl_hull_inequalities(pair.ambient, pair.embed(lam))
    pulled = remove_redundant(substitute(ambient, pair.embed_matrix))
    return equal(kostant_polytope(pair, lam), pulled)


CHECKS = {
    "chambers": (chambers_identity, random_dominant),
    "cone": (cone_identity, random_root_cone_probe),
    "orbit": (orbit_identity, random_dominant),
    "kostant": (kostant_identity, random_dominant),
}


@dataclass
class LemmaReport:
    pair: str
    seed: int
    points: int
    failures: dict[str, list[list[str]]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def to_json(self) -> dict:
        return {"pair": self.pair, "seed": self.seed, "points": self.points, "ok": self.ok, "failures": self.failures}


def run_checks(pair: SymmetricPair, points: int, seed: int, names=None) -> LemmaReport:
    """Run the named checks (all by default) on ``points`` random inputs each."""
    rng = random.Random(seed)
    report = LemmaReport(pair.label, seed, points)
    for name in names or CHECKS:
        check, draw = CHECKS[name]
        bad = []
        for _ in range(points):
            x = draw(pair, rng)
            if not check(pair, x):
                bad.append([str(c) for c in x])
        report.failures[name] = bad
    return report
