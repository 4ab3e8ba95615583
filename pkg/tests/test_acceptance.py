"""End-to-end acceptance run.

Each criterion is one test; ``criterion`` records its outcome and the
terminal summary hook in conftest prints one PASS/FAIL line per criterion.
Running this file directly does the same without pytest's own output.
"""

import contextlib
import itertools
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from momentcone.lemmas import kostant_identity, random_dominant, run_checks
from momentcone.polytope import Polytope, contains_polytope, equal, hull_from_points, scale_about
from momentcone.polytope.klyachko import golden_text, klyachko_polytope, su22_table
from momentcone.rootsys import vec
from momentcone.schubert import format_horn_table, horn_table, lr_coefficient, partitions_in_box
from momentcone.spectra import make_rng, monte_carlo_check, sample_eigen_sum, sample_singular_sum
from momentcone.sympair import CATALOG, build_pair, dominant_points, orbit_closure_polytope
from oracles import lr_by_expansion

F = Fraction
SEED = 20240611
TRIALS = 10_000

# number -> (title, passed, detail, seconds)
RESULTS: dict = {}

MC_CONFIGS = [
    ("AIII:2,2", [F(3, 2), 1], [8, 4]),
    ("AIII:1,3", [2], [5]),
    ("AI:3", [1, 0, -1], [1, 0, -1]),
    ("BDI:2,3", [2, 1], [1, 1]),
]


@contextlib.contextmanager
def criterion(number: int, title: str):
    t0 = time.perf_counter()
    detail = []
    try:
        yield detail
    except BaseException as e:
        RESULTS[number] = (title, False, f"{type(e).__name__}: {str(e).splitlines()[0] if str(e) else ''}", time.perf_counter() - t0)
        raise
    RESULTS[number] = (title, True, "; ".join(detail), time.perf_counter() - t0)


def summary_lines() -> list[str]:
    out = []
    for n in sorted(RESULTS):
        title, ok, detail, dt = RESULTS[n]
        out.append(f"C{n} {'PASS' if ok else 'FAIL'} {title} ({dt:.1f} s){': ' + detail if detail else ''}")
    return out


def test_c1_table_for_su4():
    with criterion(1, "Horn table for SU(4) matches reference") as d:
        t0 = time.perf_counter()
        text = format_horn_table(4)
        dt = time.perf_counter() - t0
        assert text == golden_text("horn_su4.txt")
        rows = horn_table(4)
        assert sum(t.k == 1 for t, _ in rows) == 6 and sum(t.k == 2 for t, _ in rows) == 9
        assert dt < 1.0
        d.append(f"exact match in {dt:.3f} s")


def test_c2_su22_minimal_system():
    with criterion(2, "SU(2,2) minimal system, 18 inequalities") as d:
        t0 = time.perf_counter()
        T = su22_table()
        dt = time.perf_counter() - t0
        assert len(T.chamber) == 6 and len(T.inequalities) == 18
        assert T.matches, (T.missing, T.extra)
        names = ("l1", "l2", "m1", "m2", "n1", "n2")
        pretty = {q.pretty(names) for q in T.inequalities}
        # nu2 >= -lam1 + mu2 and both halves of nu1 + nu2 >= |lam1 + lam2 - mu1 - mu2|
        assert "m2 <= l1 + n2" in pretty
        assert "l1 + l2 <= m1 + m2 + n1 + n2" in pretty
        assert "m1 + m2 <= l1 + l2 + n1 + n2" in pretty
        # nu1 <= lam1 + mu1 and nu1 + nu2 >= |lam1 - lam2 - mu1 + mu2|
        assert "n1 <= l1 + m1" in pretty
        assert "l2 + m1 <= l1 + m2 + n1 + n2" in pretty and "l1 + m2 <= l2 + m1 + n1 + n2" in pretty
        assert dt < 10
        d.append(f"{dt:.2f} s")


def test_c3_kostant_identity():
    with criterion(3, "Kostant identity, 50 weights per pair") as d:
        rng = random.Random(SEED)
        bad = []
        for label in CATALOG:
            pair = build_pair(label)
            assert pair.restricted.rank <= 4
            for _ in range(50):
                lam = random_dominant(pair, rng)
                if not kostant_identity(pair, lam):
                    bad.append((label, lam))
        assert not bad, bad[:5]
        d.append(f"{len(CATALOG)} pairs x 50")


def test_c4_lemma_suite():
    with criterion(4, "chambers / cone / orbit identities, 100 points per pair") as d:
        failures = {}
        for label in CATALOG:
            rep = run_checks(build_pair(label), 100, SEED, names=("chambers", "cone", "orbit"))
            if not rep.ok:
                failures[label] = {k: v[:3] for k, v in rep.failures.items() if v}
        assert not failures, failures
        d.append(f"{len(CATALOG)} pairs x 3 identities x 100")


def test_c5_lorentz_interval():
    with criterion(5, "rank-one interval [|a-b|, a+b]") as d:
        rng = random.Random(SEED + 5)
        for q in (2, 3, 4):
            pair = build_pair(f"AIII:1,{q}")
            for _ in range(20):
                a = F(rng.randint(0, 60), rng.randint(1, 9))
                b = F(rng.randint(0, 60), rng.randint(1, 9))
                P = klyachko_polytope(pair, [a], [b])
                assert equal(P, Polytope.interval(abs(a - b), a + b)), (q, a, b)
        d.append("60 cases")


def test_c6_figure_data():
    with criterion(6, "figure weights: vertex lambda+mu, s2s1 subpolytope, two hulls agree") as d:
        pair = build_pair("AIII:2,2")
        lam, mu = [F(3, 2), 1], [8, 4]
        P = klyachko_polytope(pair, lam, mu)
        top = vec(F(19, 2), 5)
        assert top == vec(*(a + b for a, b in zip(lam, mu)))
        assert top in P.vrep
        Q = orbit_closure_polytope(pair, lam, mu, pair.weyl.parse("s2s1"))
        assert contains_polytope(P, Q) and Q.contains(top)
        H = hull_from_points(dominant_points(pair, lam, mu))
        assert equal(P, H) and set(P.vrep) == set(H.vrep)
        d.append(f"{len(P.vrep)} vertices, subpolytope has {len(Q.vrep)}")


def _aligned_value(pair, lam, mu):
    rng = make_rng(SEED)
    kind = "eigen" if pair.kind == "AI" else "singular"
    lf, mf = [float(x) for x in lam], [float(x) for x in mu]
    if kind == "eigen":
        return sample_eigen_sum(lf, mf, "real", rng, aligned=True).values
    p, q = pair.params
    field = "complex" if pair.kind == "AIII" else "real"
    return sample_singular_sum(lf, mf, p, q, field, rng, aligned=True).values


def test_c7_monte_carlo_soundness():
    with criterion(7, "Monte-Carlo soundness, 4 configurations x 10^4") as d:
        t0 = time.perf_counter()
        for label, lam, mu in MC_CONFIGS:
            pair = build_pair(label)
            P = klyachko_polytope(pair, lam, mu)
            rep = monte_carlo_check(pair, lam, mu, P, TRIALS, tol=1e-8, seed=SEED)
            assert rep.trials == TRIALS
            assert rep.violation_count == 0, (label, rep.violations[:3])
            assert rep.weyl_failures == 0, label
            top = np.array([float(a + b) for a, b in zip(lam, mu)])
            assert np.abs(_aligned_value(pair, lam, mu) - top).max() <= 1e-10, label
        dt = time.perf_counter() - t0
        assert dt < 60
        d.append(f"zero violations, {dt:.1f} s")


def test_c8_lr_oracle():
    with criterion(8, "LR coefficients vs Schur expansion, 3x3 box") as d:
        box = partitions_in_box(3, 3)
        checked = 0
        for lam, mu in itertools.product(box, repeat=2):
            expansion = lr_by_expansion(lam, mu, 3)
            for nu in box:
                assert lr_coefficient(lam, mu, nu) == expansion.get(tuple(nu), 0), (lam, mu, nu)
                checked += 1
        assert lr_coefficient((2, 1), (2, 1), (3, 2, 1)) == 2
        d.append(f"{checked} triples")


def test_c9_shrunk_polytopes_are_caught():
    with criterion(9, "1% shrink yields violations") as d:
        counts = []
        for label, lam, mu in MC_CONFIGS:
            pair = build_pair(label)
            P = scale_about(klyachko_polytope(pair, lam, mu), F(99, 100))
            rep = monte_carlo_check(pair, lam, mu, P, TRIALS, tol=1e-8, seed=SEED + 9)
            assert rep.violation_count > 0, label
            assert all(v["margin"] > 1e-8 for v in rep.violations)
            counts.append(rep.violation_count)
        d.append("violations " + ", ".join(map(str, counts)))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
