"""Monte-Carlo spectral oracle.

Matrices with prescribed singular values (or eigenvalues) are placed in
Haar-random frames, added, and the spectrum of the sum is computed with
in-repo Jacobi kernels.  The resulting points are tested against an exact
polytope at a float tolerance.

All samplers are batched: arrays carry a leading trial axis.

Tolerances: decomposition residual ``DECOMP_TOL``; membership ``tol``
(default ``MEMBERSHIP_TOL``), measured as Euclidean distance outside a facet.
"""

from __future__ import annotations

import json
import os
import secrets
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from momentcone.errors import ParameterError, UnsupportedOperationError
from momentcone.polytope.core import Polytope, vertices
from momentcone.sympair import SymmetricPair

DECOMP_TOL = 1e-10
MEMBERSHIP_TOL = 1e-8
_EPS = np.finfo(float).eps
SEED_ENV = "MOMENTCONE_SEED"


def resolve_seed(seed: int | None = None) -> int:
    """Explicit seed, else ``$MOMENTCONE_SEED``, else fresh entropy."""
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env)
    return secrets.randbits(63)


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """PCG64 generator for substream ``stream`` of ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


# -- Jacobi kernels -------------------------------------------------------


def _rotation(app, aqq, apq):
    """Batched 2x2 unitary ``G`` with ``G^H [[app, apq], [conj(apq), aqq]] G`` diagonal."""
    mag = np.abs(apq)
    phase = np.where(mag > 0, np.conj(apq) / np.where(mag > 0, mag, 1), 1)
    active = mag > _EPS * np.sqrt(np.abs(app * aqq)) + 1e-300
    safe = np.where(active, mag, 1.0)
    tau = (aqq - app) / (2 * safe)
    t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1 + tau * tau))
    c = np.where(active, 1 / np.sqrt(1 + t * t), 1.0)
    s = np.where(active, t * c, 0.0)
    g = np.empty(app.shape + (2, 2), dtype=complex)
    g[..., 0, 0] = c
    g[..., 0, 1] = s
    g[..., 1, 0] = -s * phase
    g[..., 1, 1] = c * phase
    return g, active


def jacobi_svd(a: np.ndarray, max_sweeps: int = 40):
    """One-sided (Hestenes) Jacobi SVD of a batch of ``m x n`` matrices.

    Returns ``(u, s, vh)`` with ``s`` descending and ``a = u @ diag(s) @ vh``;
    ``u`` is ``m x k``, ``vh`` is ``k x n``, ``k = min(m, n)``.
    """
    a = np.asarray(a)
    single = a.ndim == 2
    if single:
        a = a[None]
    m, n = a.shape[-2:]
    if n > m:
        v, s, uh = jacobi_svd(np.conj(np.swapaxes(a, -1, -2)), max_sweeps)
        out = (np.conj(np.swapaxes(uh, -1, -2)), s, np.conj(np.swapaxes(v, -1, -2)))
        return tuple(x[0] for x in out) if single else out
    g = a.astype(complex, copy=True)
    v = np.broadcast_to(np.eye(n, dtype=complex), g.shape[:-2] + (n, n)).copy()
    for _ in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                gi, gj = g[..., :, i], g[..., :, j]
                alpha = np.einsum("...k,...k->...", np.conj(gi), gi).real
                beta = np.einsum("...k,...k->...", np.conj(gj), gj).real
                gamma = np.einsum("...k,...k->...", np.conj(gi), gj)
                rot, active = _rotation(alpha, beta, gamma)
                if not active.any():
                    continue
                rotated = True
                idx = [i, j]
                g[..., :, idx] = g[..., :, idx] @ rot
                v[..., :, idx] = v[..., :, idx] @ rot
        if not rotated:
            break
    s = np.linalg.norm(g, axis=-2)
    order = np.argsort(-s, axis=-1)
    s = np.take_along_axis(s, order, axis=-1)
    g = np.take_along_axis(g, order[..., None, :], axis=-1)
    v = np.take_along_axis(v, order[..., None, :], axis=-1)
    u = g / np.where(s > 0, s, 1)[..., None, :]
    vh = np.conj(np.swapaxes(v, -1, -2))
    if not np.iscomplexobj(a):
        u, vh = _maybe_real(u), _maybe_real(vh)
    out = (u, s, vh)
    return tuple(x[0] for x in out) if single else out


def jacobi_eigh(h: np.ndarray, max_sweeps: int = 40):
    """Cyclic Jacobi eigen-decomposition of a batch of Hermitian matrices.

    Returns ``(w, v)`` with ``w`` descending and ``h = v @ diag(w) @ v^H``.
    """
    h = np.asarray(h)
    single = h.ndim == 2
    if single:
        h = h[None]
    n = h.shape[-1]
    a = h.astype(complex, copy=True)
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy()
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                rot, active = _rotation(a[..., p, p].real, a[..., q, q].real, a[..., p, q])
                if not active.any():
                    continue
                rotated = True
                idx = [p, q]
                a[..., :, idx] = a[..., :, idx] @ rot
                a[..., idx, :] = np.conj(np.swapaxes(rot, -1, -2)) @ a[..., idx, :]
                v[..., :, idx] = v[..., :, idx] @ rot
        if not rotated:
            break
    w = np.real(np.diagonal(a, axis1=-2, axis2=-1))
    order = np.argsort(-w, axis=-1)
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[..., None, :], axis=-1)
    if not np.iscomplexobj(h):
        v = _maybe_real(v)
    return (w[0], v[0]) if single else (w, v)


def _maybe_real(x: np.ndarray) -> np.ndarray:
    return x.real if np.abs(x.imag).max(initial=0.0) == 0 else x


def _rel_residual(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    num = np.linalg.norm(a - b, axis=(-2, -1))
    den = np.linalg.norm(a, axis=(-2, -1))
    return np.where(den > 0, num / np.where(den > 0, den, 1), num)


# -- sampling -------------------------------------------------------------


def haar_frame(n: int, field: str, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed orthogonal (``field='real'``) or unitary matrix.

    QR of a Gaussian matrix, with the columns rescaled by the phases of
    ``diag(R)`` so the distribution is exactly Haar.
    """
    if n < 1:
        raise ParameterError("frame size must be positive")
    shape = (n, n) if size is None else (size, n, n)
    if field == "real":
        z = rng.standard_normal(shape)
    elif field == "complex":
        z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    else:
        raise ParameterError(f"field must be 'real' or 'complex', got {field!r}")
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    ph = d / np.abs(d)
    return q * ph[..., None, :]


def _near_identity(n: int, field: str, rng, size: int, eps: float) -> np.ndarray:
    shape = (size, n, n)
    z = rng.standard_normal(shape)
    if field == "complex":
        z = z + 1j * rng.standard_normal(shape)
    q, r = np.linalg.qr(np.eye(n) + eps * z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


@dataclass(frozen=True)
class SpectrumSample:
    values: tuple[float, ...]
    kind: str  # "singular" or "eigen"
    residual: float


def _check_descending(name: str, x: np.ndarray, nonneg: bool) -> None:
    if np.any(np.diff(x) > 0):
        raise ParameterError(f"{name} must be descending")
    if nonneg and np.any(x < 0):
        raise ParameterError(f"{name} must be nonnegative")


def _rect_diag(vals: np.ndarray, p: int, q: int) -> np.ndarray:
    m = np.zeros(vals.shape[:-1] + (p, q))
    idx = np.arange(p)
    m[..., idx, idx] = vals
    return m


def _weyl_aligned_mu(mu: np.ndarray, rng, size: int, signed: bool) -> np.ndarray:
    """``v mu`` for uniformly random (signed) permutations ``v``, batched."""
    perms = np.argsort(rng.random((size, len(mu))), axis=-1)
    out = mu[perms]
    if signed:
        out = out * rng.choice([-1.0, 1.0], size=out.shape)
    return out


def singular_sums(lam, mu, p: int, q: int, field: str, rng, size: int, mode: str = "haar", eps: float = 1e-3):
    """Batched singular spectra of ``A + B``.

    ``mode``: ``"haar"`` (independent Haar frames), ``"aligned"`` (shared
    frames, ``B`` diagonal up to a signed permutation), ``"near"`` (aligned
    then perturbed by a near-identity frame of size ``eps``), ``"identity"``
    (shared frames, ``B`` diagonal in the same order).
    Returns ``(values, residuals)``.
    """
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if p > q or len(lam) != p or len(mu) != p:
        raise ParameterError(f"need p <= q and spectra of length p; got p={p}, q={q}, {len(lam)}, {len(mu)}")
    _check_descending("lambda", lam, True)
    _check_descending("mu", mu, True)
    c1 = haar_frame(p, field, rng, size)
    d1 = haar_frame(q, field, rng, size)
    sig_l = _rect_diag(np.broadcast_to(lam, (size, p)), p, q)
    if mode == "haar":
        c2 = haar_frame(p, field, rng, size)
        d2 = haar_frame(q, field, rng, size)
        mid_b = _rect_diag(np.broadcast_to(mu, (size, p)), p, q)
    elif mode in ("aligned", "near", "identity"):
        c2, d2 = c1, d1
        vm = np.broadcast_to(mu, (size, p)) if mode == "identity" else _weyl_aligned_mu(mu, rng, size, True)
        mid_b = _rect_diag(vm, p, q)
        if mode == "near":
            c2 = c1 @ _near_identity(p, field, rng, size, eps)
            d2 = d1 @ _near_identity(q, field, rng, size, eps)
    else:
        raise ParameterError(f"unknown sampling mode {mode!r}")
    a = c1 @ sig_l @ np.conj(np.swapaxes(d1, -1, -2))
    b = c2 @ mid_b @ np.conj(np.swapaxes(d2, -1, -2))
    total = a + b
    u, s, vh = jacobi_svd(total)
    recon = u @ (s[..., :, None] * vh)
    return s, _rel_residual(total, recon)


def eigen_sums(lam, mu, field: str, rng, size: int, mode: str = "haar", eps: float = 1e-3):
    """Batched descending eigenvalues of ``A + B`` for Hermitian/symmetric ``A, B``."""
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(mu, dtype=float)
    n = len(lam)
    if len(mu) != n:
        raise ParameterError("lambda and mu must have the same length")
    _check_descending("lambda", lam, False)
    _check_descending("mu", mu, False)
    q1 = haar_frame(n, field, rng, size)
    if mode == "haar":
        q2, vm = haar_frame(n, field, rng, size), np.broadcast_to(mu, (size, n))
    elif mode in ("aligned", "near", "identity"):
        q2 = q1
        vm = np.broadcast_to(mu, (size, n)) if mode == "identity" else _weyl_aligned_mu(mu, rng, size, False)
        if mode == "near":
            q2 = q1 @ _near_identity(n, field, rng, size, eps)
    else:
        raise ParameterError(f"unknown sampling mode {mode!r}")
    a = (q1 * lam[None, None, :]) @ np.conj(np.swapaxes(q1, -1, -2))
    b = (q2 * vm[:, None, :]) @ np.conj(np.swapaxes(q2, -1, -2))
    total = a + b
    total = (total + np.conj(np.swapaxes(total, -1, -2))) / 2
    w, v = jacobi_eigh(total)
    recon = (v * w[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))
    return w, _rel_residual(total, recon)


def sample_singular_sum(lam, mu, p: int, q: int, field: str, rng, aligned: bool = False) -> SpectrumSample:
    vals, res = singular_sums(lam, mu, p, q, field, rng, 1, mode="identity" if aligned else "haar")
    return SpectrumSample(tuple(float(x) for x in vals[0]), "singular", float(res[0]))


def sample_eigen_sum(lam, mu, field: str, rng, aligned: bool = False) -> SpectrumSample:
    vals, res = eigen_sums(lam, mu, field, rng, 1, mode="identity" if aligned else "haar")
    return SpectrumSample(tuple(float(x) for x in vals[0]), "eigen", float(res[0]))


# -- Monte-Carlo harness --------------------------------------------------


@dataclass
class OracleReport:
    trials: int
    seed: int | None
    tol: float
    violations: list[dict] = field(default_factory=list)
    violation_count: int = 0
    vertex_coverage: dict[str, float] = field(default_factory=dict)
    weyl_failures: int = 0
    max_residual: float = 0.0
    decomposition_tol: float = DECOMP_TOL
    max_recorded: int = 100

    @property
    def ok(self) -> bool:
        return self.violation_count == 0 and self.weyl_failures == 0 and self.max_residual <= self.decomposition_tol

    def merge(self, other: "OracleReport") -> "OracleReport":
        out = OracleReport(self.trials + other.trials, self.seed, self.tol, max_recorded=self.max_recorded)
        out.violations = (self.violations + other.violations)[: self.max_recorded]
        out.violation_count = self.violation_count + other.violation_count
        keys = set(self.vertex_coverage) | set(other.vertex_coverage)
        out.vertex_coverage = {
            k: min(self.vertex_coverage.get(k, np.inf), other.vertex_coverage.get(k, np.inf)) for k in sorted(keys)
        }
        out.weyl_failures = self.weyl_failures + other.weyl_failures
        out.max_residual = max(self.max_residual, other.max_residual)
        return out

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "tol": self.tol,
            "decomposition_tol": self.decomposition_tol,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "vertex_coverage": {k: (None if not np.isfinite(v) else v) for k, v in self.vertex_coverage.items()},
            "weyl_failures": self.weyl_failures,
            "max_residual": self.max_residual,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def sampler_kind(pair: SymmetricPair) -> tuple[str, str]:
    """``(kind, field)`` of the matching sampler."""
    if pair.kind == "AI":
        return "eigen", "real"
    if pair.kind == "AIII":
        return "singular", "complex"
    if pair.kind == "BDI":
        return "singular", "real"
    raise UnsupportedOperationError(f"no spectral sampler for {pair.label}")


def draw(pair: SymmetricPair, lam, mu, rng, size: int, mode: str = "haar"):
    """Spectra of sums in ``a*`` coordinates, plus decomposition residuals."""
    kind, fld = sampler_kind(pair)
    lam = np.array([float(x) for x in lam])
    mu = np.array([float(x) for x in mu])
    if kind == "eigen":
        return eigen_sums(lam, mu, fld, rng, size, mode)
    p, q = pair.params
    return singular_sums(lam, mu, p, q, fld, rng, size, mode)


def _chunk_report(pair, lam, mu, P: Polytope, verts, rng, size: int, tol: float, aligned_fraction: float, seed) -> OracleReport:
    n_aligned = int(round(size * aligned_fraction))
    n_exact = n_aligned // 2
    parts = []
    for mode, count in (("haar", size - n_aligned), ("aligned", n_exact), ("near", n_aligned - n_exact)):
        if count:
            parts.append(draw(pair, lam, mu, rng, count, mode))
    if not parts:
        return OracleReport(0, seed, tol)
    pts = np.concatenate([x for x, _ in parts])
    res = np.concatenate([r for _, r in parts])
    report = OracleReport(len(pts), seed, tol)
    report.max_residual = float(res.max())
    ineqs = [q for q in P.hrep if not q.is_trivial]
    if ineqs:
        a = np.array([[float(v) for v in q.normal] for q in ineqs])
        b = np.array([float(q.offset) for q in ineqs])
        norms = np.linalg.norm(a, axis=1)
        margins = (pts @ a.T - b) / norms
        bad = np.argwhere(margins > tol)
        report.violation_count = len(bad)
        for s, k in bad[: report.max_recorded]:
            report.violations.append({
                "sample": [float(x) for x in pts[s]],
                "inequality": ineqs[k].to_text(),
                "margin": float(margins[s, k]),
            })
    lam_f = [float(x) for x in lam]
    mu_f = [float(x) for x in mu]
    report.weyl_failures = int(np.sum(pts[:, 0] > lam_f[0] + mu_f[0] + tol))
    for v in verts:
        vf = np.array([float(x) for x in v])
        report.vertex_coverage[_vkey(v)] = float(np.min(np.linalg.norm(pts - vf, axis=1)))
    return report


def _vkey(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def monte_carlo_check(
    pair: SymmetricPair,
    lam: Sequence,
    mu: Sequence,
    P: Polytope,
    trials: int,
    tol: float = MEMBERSHIP_TOL,
    seed: int | None = None,
    aligned_fraction: float = 0.1,
    chunk: int = 2000,
    workers: int = 1,
) -> OracleReport:
    """Sample ``trials`` spectra of sums and test them against ``P``.

    A fraction ``aligned_fraction`` of the trials use shared frames with the
    second summand moved by a random Weyl group element (half exactly, half
    with a small perturbation); these reach the boundary of the polytope,
    which independent Haar frames almost never do.  Chunk ``i`` draws from
    substream ``i`` of ``seed``, so results do not depend on ``workers``.
    """
    if P.dim != pair.a_dim:
        raise ParameterError(f"polytope has dim {P.dim}, pair {pair.label} has a_dim {pair.a_dim}")
    if trials < 0:
        raise ParameterError("trials must be nonnegative")
    seed = resolve_seed(seed)
    verts = P.vrep if P.vrep is not None else (vertices(P) if P.dim <= 4 else [])
    report = OracleReport(0, seed, tol)
    report.vertex_coverage = {_vkey(v): float("inf") for v in verts}
    sizes = [min(chunk, trials - i) for i in range(0, trials, chunk)]

    def job(i: int) -> OracleReport:
        return _chunk_report(pair, lam, mu, P, verts, make_rng(seed, i), sizes[i], tol, aligned_fraction, seed)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            chunks = list(pool.map(job, range(len(sizes))))
    else:
        chunks = [job(i) for i in range(len(sizes))]
    for c in chunks:
        report = report.merge(c)
    report.seed = seed
    return report
