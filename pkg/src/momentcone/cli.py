"""Command-line interface.

Weights are exact fractions separated by commas, e.g. ``--lambda 3/2,1``.
Values starting with a minus sign need the ``=`` form: ``--lambda=-1,0``.
Every command accepts ``--format text|json`` and ``--out PATH``.

Exit codes: 0 success, 2 usage or parse error, 3 precondition error,
4 invariant breach (including Monte-Carlo violations).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from momentcone import __version__
from momentcone.errors import MomentConeError, ParameterError
from momentcone.rootsys import RationalVector, root_system_from_type

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_INVARIANT = 0, 2, 3, 4


def parse_weights(text: str) -> RationalVector:
    """``"3/2,1"`` -> exact vector.  Decimals are rejected to keep the path exact."""
    parts = [t.strip() for t in text.replace(" ", ",").split(",") if t.strip()]
    if not parts:
        raise ParameterError(f"empty weight list {text!r}")
    out = []
    for t in parts:
        if any(c in t for c in ".eE"):
            raise ParameterError(f"weight {t!r}: use exact fractions such as 3/2, not decimals")
        try:
            out.append(Fraction(t))
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"cannot parse weight {t!r}") from None
    return RationalVector(out)


def _q(x) -> str:
    return str(Fraction(x))


def _qv(v) -> list[str]:
    return [_q(c) for c in v]


def _fmt_vec(v) -> str:
    return "(" + ", ".join(_q(c) for c in v) + ")"


@dataclass
class Result:
    """What a command produced: a JSON payload, its text rendering and an exit code."""

    payload: dict
    text: str
    code: int = EXIT_OK
    extra_files: dict[str, str] = field(default_factory=dict)


# -- commands -------------------------------------------------------------


def cmd_rootsys(args) -> Result:
    rs = root_system_from_type(f"{args.family}{args.rank}")
    names = [f"e{i + 1}" for i in range(rs.ambient_dim)]

    def show(v):
        terms = []
        for c, name in zip(v, names):
            if c:
                coef = "" if abs(c) == 1 else f"{abs(c)}"
                terms.append(("-" if c < 0 else "+") + coef + name)
        s = "".join(terms).lstrip("+")
        return s or "0"

    payload = {
        "family": rs.family,
        "rank": rs.rank,
        "ambient_dim": rs.ambient_dim,
        "simple_roots": [_qv(a) for a in rs.simple_roots],
        "positive_roots": [_qv(a) for a in rs.positive_roots],
        "weyl_order": rs.weyl_order,
    }
    lines = [
        f"root system {rs.family}{rs.rank} on {rs.ambient_dim} coordinates",
        "simple roots: " + ", ".join(f"a{i}={show(a)}" for i, a in enumerate(rs.simple_roots, 1)),
        f"positive roots ({len(rs.positive_roots)}): " + ", ".join(show(a) for a in rs.positive_roots),
        f"|W| = {rs.weyl_order}",
    ]
    return Result(payload, "\n".join(lines))


def _pair(args):
    from momentcone.sympair import build_pair

    if not args.pair:
        raise ParameterError("--pair is required (e.g. --pair AIII:2,2)")
    return build_pair(args.pair)


def cmd_pair(args) -> Result:
    if not args.pair:
        from momentcone.sympair import CATALOG, build_pair

        rows = []
        for label in CATALOG:
            q = build_pair(label)
            rows.append({"label": label, "restricted_family": q.restricted.family, "rank": q.restricted.rank})
        lines = [f"{r['label']:<10} {r['restricted_family']}{r['rank']}" for r in rows]
        return Result({"catalog": rows}, "\n".join(lines))
    p = _pair(args)
    payload = {
        "label": p.label,
        "kind": p.kind,
        "ambient": {"family": p.ambient.family, "rank": p.ambient.rank, "dim": p.ambient.ambient_dim},
        "restricted": {"family": p.restricted.family, "rank": p.restricted.rank, "dim": p.a_dim},
        "restricted_simple_roots": [_qv(a) for a in p.restricted.simple_roots],
        "embed": [_qv(r) for r in p.embed_matrix],
        "restrict": [_qv(r) for r in p.restrict_matrix],
        "restricted_weyl_order": p.weyl.order,
        "root_scale": _q(p.restriction_scale()),
    }
    lines = [
        f"pair {p.label}",
        f"ambient    {p.ambient.family}{p.ambient.rank} on {p.ambient.ambient_dim} coordinates",
        f"restricted {p.restricted.family}{p.restricted.rank} on {p.a_dim} coordinates, |W^a| = {p.weyl.order}",
        "restricted simple roots: " + ", ".join(_fmt_vec(a) for a in p.restricted.simple_roots),
        f"ambient roots restrict to {payload['root_scale']} x restricted roots",
        "embed:",
        *("  " + " ".join(f"{_q(c):>5}" for c in row) for row in p.embed_matrix),
    ]
    return Result(payload, "\n".join(lines))


def _names(d: int, stem: str = "y") -> list[str]:
    return [f"{stem}{i + 1}" for i in range(d)]


def _polytope_payload(P, names) -> dict:
    data = P.to_json()
    data["inequalities"] = [q.pretty(names) for q in P.hrep if not q.is_trivial]
    return data


def _polytope_text(P, names, title: str) -> list[str]:
    if P.empty:
        return [f"{title}: empty"]
    rows = [q for q in P.hrep if not q.is_trivial]
    lines = [f"{title}: {len(rows)} inequalities"]
    lines += ["  " + q.pretty(names) for q in rows]
    if P.vrep is not None:
        lines.append(f"vertices ({len(P.vrep)}):")
        lines += ["  " + _fmt_vec(v) for v in P.vrep]
    return lines


def _need(args, name: str) -> RationalVector:
    val = getattr(args, name)
    if val is None:
        raise ParameterError(f"--{name.rstrip('_')} is required")
    return val


def cmd_kostant(args) -> Result:
    from momentcone.sympair import kostant_polytope

    p = _pair(args)
    lam = _need(args, "lambda_")
    P = kostant_polytope(p, lam)
    names = _names(p.a_dim)
    payload = {"pair": p.label, "lambda": _qv(lam), "polytope": _polytope_payload(P, names)}
    text = [f"hull of the W^a-orbit of {_fmt_vec(lam)} for {p.label}"] + _polytope_text(P, names, "polytope")
    return Result(payload, "\n".join(text))


def cmd_horn(args) -> Result:
    from momentcone.polytope.klyachko import golden_text
    from momentcone.schubert import horn_table, format_horn_table

    n = args.n
    if n < 1:
        raise ParameterError("n must be positive")
    table = format_horn_table(n) if n >= 2 else ""
    rows = horn_table(n)
    payload = {
        "n": n,
        "rows": [{"triple": str(t), "k": t.k, "dual": None if d is None else str(d)} for t, d in rows],
    }
    code = EXIT_OK
    if n == 4:
        match = table == golden_text("horn_su4.txt")
        payload["golden_match"] = match
        print(f"reference table: {'match' if match else 'MISMATCH'}", file=sys.stderr)
        code = EXIT_OK if match else EXIT_INVARIANT
    return Result(payload, table.rstrip("\n") if table else f"# no triples for SU({n})", code)


def _ordered_polygon(vrep):
    pts = [tuple(v) for v in vrep]
    if len(pts) < 3 or len(pts[0]) != 2:
        return pts
    cx = sum(float(p[0]) for p in pts) / len(pts)
    cy = sum(float(p[1]) for p in pts) / len(pts)
    return sorted(pts, key=lambda p: math.atan2(float(p[1]) - cy, float(p[0]) - cx))


def _figure(series: dict[str, tuple], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(
            {name: [{"exact": _qv(v), "float": [float(c) for c in v]} for v in _ordered_polygon(vs)] for name, vs in series.items()},
            indent=2,
        )
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    d = len(next(iter(series.values()))[0]) if any(series.values()) else 0
    w.writerow(["series", "index"] + [f"x{i + 1}" for i in range(d)] + [f"x{i + 1}_exact" for i in range(d)])
    for name, vs in series.items():
        for i, v in enumerate(_ordered_polygon(vs)):
            w.writerow([name, i] + [repr(float(c)) for c in v] + _qv(v))
    return buf.getvalue()


def cmd_klyachko(args) -> Result:
    from momentcone.polytope.core import vertices
    from momentcone.polytope.klyachko import klyachko_polytope
    from momentcone.sympair import orbit_closure_polytope

    p = _pair(args)
    lam, mu = _need(args, "lambda_"), _need(args, "mu")
    P = klyachko_polytope(p, lam, mu)
    names = _names(p.a_dim, "n")
    payload = {"pair": p.label, "lambda": _qv(lam), "mu": _qv(mu), "polytope": _polytope_payload(P, names)}
    text = [f"moment polytope of K{_fmt_vec(lam)} x K{_fmt_vec(mu)} for {p.label}"]
    text += _polytope_text(P, names, "minimal system")
    series = {"full": tuple(P.vrep or ())}
    if args.w is not None:
        w = p.weyl.parse(args.w)
        Q = orbit_closure_polytope(p, lam, mu, w)
        if Q.vrep is None:
            Q = type(Q)(Q.dim, Q.hrep, vrep=tuple(vertices(Q)), reduced=True, bounded=True)
        payload["w"] = w.word_str()
        payload["orbit_closure"] = _polytope_payload(Q, names)
        text += [""] + _polytope_text(Q, names, f"orbit closure for w={w.word_str()}")
        series["orbit_closure"] = tuple(Q.vrep)
    if args.nu is not None:
        inside = P.contains(args.nu)
        payload["nu"] = {"point": _qv(args.nu), "inside": inside}
        text.append(f"nu={_fmt_vec(args.nu)} {'lies in' if inside else 'is outside'} the polytope")
    extra = {}
    if args.figure:
        extra["figure"] = _figure(series, args.figure)
    return Result(payload, "\n".join(text), extra_files=extra)


def cmd_su22(args) -> Result:
    from momentcone.polytope.klyachko import SU22_NAMES, restricted_triple_inequality, su22_table
    from momentcone.schubert import all_horn_triples, dual_triple
    from momentcone.sympair import build_pair

    T = su22_table()
    pair = build_pair("AIII:2,2")
    self_dual = all(
        restricted_triple_inequality(pair, t) == restricted_triple_inequality(pair, dual_triple(t)) for t in all_horn_triples(4)
    )
    payload = {
        "inequalities": [q.pretty(SU22_NAMES) for q in T.inequalities],
        "rows": [q.to_text() for q in T.inequalities],
        "chamber": [q.pretty(SU22_NAMES) for q in T.chamber],
        "count": len(T.inequalities),
        "golden_match": T.matches,
        "missing": [q.to_text() for q in T.missing],
        "extra": [q.to_text() for q in T.extra],
        "dual_invariant": self_dual,
    }
    lines = [f"# SU(2,2): {len(T.inequalities)} inequalities beyond {len(T.chamber)} chamber inequalities"]
    lines += [q.pretty(SU22_NAMES) for q in T.inequalities]
    lines.append("# chamber")
    lines += [q.pretty(SU22_NAMES) for q in T.chamber]
    lines.append(f"# reference list: {'match' if T.matches else 'MISMATCH'}")
    lines += [f"#   missing {q.to_text()}" for q in T.missing] + [f"#   extra {q.to_text()}" for q in T.extra]
    lines.append(f"# every Horn inequality equals its dual after restriction: {'yes' if self_dual else 'NO'}")
    ok = T.matches and self_dual
    return Result(payload, "\n".join(lines), EXIT_OK if ok else EXIT_INVARIANT)


def cmd_bruhat(args) -> Result:
    p = _pair(args)
    if args.w is None:
        raise ParameterError("--w is required")
    w = p.weyl.parse(args.w)
    if args.v is not None:
        v = p.weyl.parse(args.v)
        leq = p.weyl.leq(v, w)
        payload = {"pair": p.label, "v": v.word_str(), "w": w.word_str(), "leq": leq}
        return Result(payload, f"{v.word_str()} <= {w.word_str()}: {str(leq).lower()}")
    below = sorted(p.weyl.interval_below(w), key=lambda x: (x.length, x.word))
    payload = {"pair": p.label, "w": w.word_str(), "interval": [x.word_str() for x in below]}
    text = [f"Bruhat interval below {w.word_str()} in W^a of {p.label} ({len(below)} elements)"]
    text += ["  " + x.word_str() for x in below]
    return Result(payload, "\n".join(text))


def cmd_sample(args) -> Result:
    from momentcone.polytope.klyachko import klyachko_polytope
    from momentcone.spectra import monte_carlo_check, resolve_seed

    p = _pair(args)
    lam, mu = _need(args, "lambda_"), _need(args, "mu")
    seed = resolve_seed(args.seed)
    P = klyachko_polytope(p, lam, mu)
    report = monte_carlo_check(p, lam, mu, P, args.trials, tol=args.tol, seed=seed, workers=args.workers)
    payload = {"pair": p.label, "lambda": _qv(lam), "mu": _qv(mu), "report": report.to_json()}
    lines = [
        f"seed: {seed}",
        f"pair {p.label}, lambda={_fmt_vec(lam)}, mu={_fmt_vec(mu)}",
        f"trials: {report.trials}, tol: {report.tol:g}, decomposition tol: {report.decomposition_tol:g}",
        f"max decomposition residual: {report.max_residual:.3g}",
        f"violations: {report.violation_count}",
        f"Weyl inequality failures: {report.weyl_failures}",
    ]
    if report.vertex_coverage:
        lines.append("closest approach to each vertex:")
        lines += [f"  {k}: {v:.3g}" for k, v in report.vertex_coverage.items()]
    for v in report.violations[:10]:
        lines.append(f"  violated {v['inequality']} by {v['margin']:.3g} at {v['sample']}")
    return Result(payload, "\n".join(lines), EXIT_OK if report.ok else EXIT_INVARIANT)


def cmd_check(args) -> Result:
    from momentcone.lemmas import run_checks
    from momentcone.spectra import resolve_seed
    from momentcone.sympair import CATALOG, build_pair

    seed = resolve_seed(args.seed)
    labels = [args.pair] if args.pair else list(CATALOG)
    reports = [run_checks(build_pair(lab), args.points, seed) for lab in labels]
    payload = {"seed": seed, "points": args.points, "pairs": [r.to_json() for r in reports]}
    lines = [f"seed: {seed}"]
    for r in reports:
        status = " ".join(f"{name}={'ok' if not bad else f'FAIL({len(bad)})'}" for name, bad in r.failures.items())
        lines.append(f"{r.pair:<10} {status}")
    ok = all(r.ok for r in reports)
    return Result(payload, "\n".join(lines), EXIT_OK if ok else EXIT_INVARIANT)


COMMANDS: dict[str, Callable] = {
    "rootsys": cmd_rootsys,
    "pair": cmd_pair,
    "kostant": cmd_kostant,
    "horn": cmd_horn,
    "klyachko": cmd_klyachko,
    "su22-table": cmd_su22,
    "bruhat": cmd_bruhat,
    "sample": cmd_sample,
    "check": cmd_check,
}


# -- parser ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _weights(text: str) -> RationalVector:
    try:
        return parse_weights(text)
    except ParameterError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")

    weights = argparse.ArgumentParser(add_help=False)
    weights.add_argument("--pair", help='pair label: "AI:4", "AIII:2,2", "BDI:2,3", "Torus:3", "Diag:A3"')
    weights.add_argument("--lambda", dest="lambda_", type=_weights, metavar="L", help="first weight, e.g. 3/2,1")
    weights.add_argument("--mu", type=_weights, metavar="M", help="second weight")

    parser = _Parser(prog="momentcone", description="Moment polytopes of real flag varieties.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rootsys", parents=[common], help="roots and Weyl group order of a classical system")
    p.add_argument("family", help="A, B, C, D or BC")
    p.add_argument("rank", type=int)

    p = sub.add_parser("pair", parents=[common], help="restricted root data of a symmetric pair")
    p.add_argument("pair", nargs="?", default=None)

    p = sub.add_parser("kostant", parents=[common, weights], help="hull of a restricted Weyl orbit")

    p = sub.add_parser("horn", parents=[common], help="Horn-Klyachko triples for SU(n)")
    p.add_argument("n", type=int)

    p = sub.add_parser("klyachko", parents=[common, weights], help="moment polytope of a product of two orbits")
    p.add_argument("--w", help="Weyl word (e.g. s2s1) for the orbit-closure subpolytope")
    p.add_argument("--nu", type=_weights, metavar="N", help="test this point for membership")
    p.add_argument("--figure", choices=("csv", "json"), help="also emit vertex coordinates for plotting")
    p.add_argument("--figure-out", help="file for --figure output (default: after the report)")

    sub.add_parser("su22-table", parents=[common], help="minimal symbolic system for SU(2,2)")

    p = sub.add_parser("bruhat", parents=[common], help="Bruhat order in the restricted Weyl group")
    p.add_argument("--pair")
    p.add_argument("--w", help="upper element")
    p.add_argument("v", nargs="?", help="compare this element with w; omit to list the interval")

    p = sub.add_parser("sample", parents=[common, weights], help="Monte-Carlo check against random matrices")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("check", parents=[common], help="exact identities between restricted and ambient data")
    p.add_argument("--pair", help="one pair (default: the whole catalog)")
    p.add_argument("--points", type=int, default=20, help="random points per identity")
    p.add_argument("--seed", type=int)
    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "trials", 0) is not None and getattr(args, "trials", 0) < 0:
        print("momentcone: error: --trials must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = COMMANDS[args.command](args)
    except MomentConeError as e:
        print(f"momentcone: error: {e}", file=sys.stderr)
        return e.exit_code
    body = json.dumps(result.payload, indent=2) if args.format == "json" else result.text
    _emit(body, args.out)
    fig = result.extra_files.get("figure")
    if fig is not None:
        if getattr(args, "figure_out", None):
            _emit(fig, args.figure_out)
        else:
            _emit(fig, None)
    return result.code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
