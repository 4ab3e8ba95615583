import json
from fractions import Fraction

import numpy as np
import pytest

from momentcone.errors import ParameterError, UnsupportedOperationError
from momentcone.polytope import scale_about
from momentcone.polytope.klyachko import klyachko_polytope
from momentcone.spectra import (
    OracleReport,
    eigen_sums,
    haar_frame,
    jacobi_eigh,
    jacobi_svd,
    make_rng,
    monte_carlo_check,
    resolve_seed,
    sample_eigen_sum,
    sample_singular_sum,
    singular_sums,
)
from momentcone.sympair import build_pair

F = Fraction
CHI2_15_AT_0001 = 37.697  # upper 0.001 quantile, 15 degrees of freedom


def _unitary_residual(q):
    n = q.shape[-1]
    return np.abs(np.conj(np.swapaxes(q, -1, -2)) @ q - np.eye(n)).max()


def test_haar_frames_are_unitary():
    rng = make_rng(1)
    z = haar_frame(1, "complex", rng)
    assert abs(abs(z[0, 0]) - 1) < 1e-12
    assert _unitary_residual(haar_frame(3, "complex", rng)) < 1e-12
    assert _unitary_residual(haar_frame(5, "real", rng, size=50)) < 1e-12
    with pytest.raises(ParameterError):
        haar_frame(0, "real", rng)
    with pytest.raises(ParameterError):
        haar_frame(2, "quaternion", rng)


def test_haar_phases_are_uniform():
    q = haar_frame(3, "complex", make_rng(2), size=10_000)
    angles = np.angle(q[:, 0, 0])
    counts, _ = np.histogram(angles, bins=16, range=(-np.pi, np.pi))
    expected = len(angles) / 16
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    assert chi2 < CHI2_15_AT_0001


@pytest.mark.parametrize("field", ["real", "complex"])
def test_jacobi_svd_reconstructs(field):
    rng = np.random.default_rng(3)
    a = rng.standard_normal((200, 8, 8))
    if field == "complex":
        a = a + 1j * rng.standard_normal((200, 8, 8))
    u, s, vh = jacobi_svd(a)
    recon = u @ (s[..., :, None] * vh)
    rel = np.linalg.norm(a - recon, axis=(1, 2)) / np.linalg.norm(a, axis=(1, 2))
    assert rel.max() <= 1e-10
    assert np.abs(s - np.linalg.svd(a, compute_uv=False)).max() < 1e-10
    assert np.all(np.diff(s, axis=-1) <= 0)
    assert _unitary_residual(u) < 1e-10


def test_jacobi_svd_rectangular_and_diagonal():
    rng = np.random.default_rng(4)
    for shape in ((3, 7), (7, 3), (1, 4)):
        a = rng.standard_normal(shape)
        u, s, vh = jacobi_svd(a)
        assert u.shape == (shape[0], min(shape)) and vh.shape == (min(shape), shape[1])
        assert np.abs(u @ np.diag(s) @ vh - a).max() < 1e-12
    sigma = np.zeros((3, 5))
    sigma[[0, 1, 2], [0, 1, 2]] = [1.0, 4.5, 2.25]
    assert np.abs(jacobi_svd(sigma)[1] - [4.5, 2.25, 1.0]).max() <= 1e-14


@pytest.mark.parametrize("field", ["real", "complex"])
def test_jacobi_eigh(field):
    rng = np.random.default_rng(5)
    a = rng.standard_normal((100, 8, 8))
    if field == "complex":
        a = a + 1j * rng.standard_normal((100, 8, 8))
    h = a + np.conj(np.swapaxes(a, -1, -2))
    w, v = jacobi_eigh(h)
    recon = (v * w[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))
    assert (np.linalg.norm(h - recon, axis=(1, 2)) / np.linalg.norm(h, axis=(1, 2))).max() <= 1e-10
    assert np.abs(w - np.linalg.eigvalsh(h)[..., ::-1]).max() < 1e-10
    d = np.diag([3.0, -1.0, 2.0])
    assert np.abs(jacobi_eigh(d)[0] - [3.0, 2.0, -1.0]).max() <= 1e-14


def test_singular_sum_examples():
    rng = make_rng(6)
    s = sample_singular_sum([3, 1], [2, 2], 2, 3, "complex", rng, aligned=True)
    assert np.allclose(s.values, [5, 3], atol=1e-12, rtol=0) and s.kind == "singular"
    s = sample_singular_sum([3, 1], [0, 0], 2, 4, "complex", rng)
    assert np.allclose(s.values, [3, 1], atol=1e-12, rtol=0)
    assert s.residual < 1e-10
    vals, res = singular_sums([2.0], [5.0], 1, 3, "complex", rng, 2000)
    assert np.all(vals[:, 0] >= 3 - 1e-9) and np.all(vals[:, 0] <= 7 + 1e-9)
    assert res.max() < 1e-10
    with pytest.raises(ParameterError):
        sample_singular_sum([1, 2], [1, 0], 2, 2, "complex", rng)
    with pytest.raises(ParameterError):
        sample_singular_sum([1, 0, 0], [1, 0, 0], 3, 2, "complex", rng)


def test_eigen_sum_examples():
    rng = make_rng(7)
    assert np.allclose(sample_eigen_sum([0, 0, 0], [0, 0, 0], "real", rng).values, 0)
    s = sample_eigen_sum([2, 0, -2], [1, 0, -1], "real", rng, aligned=True)
    assert np.allclose(s.values, [3, 0, -3], atol=1e-12, rtol=0)
    vals, _ = eigen_sums([1.5, -1.5], [0.5, -0.5], "complex", rng, 2000)
    assert np.all(vals[:, 0] >= 1.0 - 1e-9) and np.all(vals[:, 0] <= 2.0 + 1e-9)
    with pytest.raises(ParameterError):
        sample_eigen_sum([1, 2], [0, 0], "real", rng)


def test_two_by_two_eigen_range_by_angle():
    # closed form: rotating B by angle t in the plane gives nu1 = sqrt(l^2 + m^2 + 2 l m cos 2t)
    lam, mu = 1.5, 0.5
    t = np.linspace(0, np.pi, 721)
    nu1 = np.sqrt(lam**2 + mu**2 + 2 * lam * mu * np.cos(2 * t))
    c, s = np.cos(t), np.sin(t)
    rot = np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)
    b = rot @ np.diag([mu, -mu]) @ np.swapaxes(rot, -1, -2)
    w, _ = jacobi_eigh(np.diag([lam, -lam]) + b)
    assert np.abs(w[:, 0] - nu1).max() < 1e-12
    assert abs(w[:, 0].min() - abs(lam - mu)) < 1e-12 and abs(w[:, 0].max() - (lam + mu)) < 1e-12


def test_monte_carlo_soundness_and_coverage():
    pair = build_pair("AIII:2,2")
    lam, mu = [F(3, 2), 1], [8, 4]
    P = klyachko_polytope(pair, lam, mu)
    rep = monte_carlo_check(pair, lam, mu, P, 2000, seed=11)
    assert rep.violation_count == 0 and rep.weyl_failures == 0 and rep.ok
    assert rep.max_residual < 1e-10
    assert rep.vertex_coverage["(19/2,5)"] < 1e-10


def test_shrunk_polytope_is_caught():
    pair = build_pair("AIII:2,2")
    lam, mu = [F(3, 2), 1], [8, 4]
    P = klyachko_polytope(pair, lam, mu)
    rep = monte_carlo_check(pair, lam, mu, scale_about(P, F(99, 100)), 2000, seed=12)
    assert rep.violation_count > 0
    assert all(v["margin"] > rep.tol for v in rep.violations)


def test_reports_are_reproducible_and_worker_independent():
    pair = build_pair("AI:3")
    lam = mu = [1, 0, -1]
    P = klyachko_polytope(pair, lam, mu)
    a = monte_carlo_check(pair, lam, mu, P, 3000, seed=5, chunk=1000)
    b = monte_carlo_check(pair, lam, mu, P, 3000, seed=5, chunk=1000, workers=3)
    assert a.to_json() == b.to_json()
    c = monte_carlo_check(pair, lam, mu, P, 3000, seed=6, chunk=1000)
    assert c.vertex_coverage != a.vertex_coverage


def test_report_json_and_empty_run():
    pair = build_pair("AIII:1,3")
    P = klyachko_polytope(pair, [2], [5])
    rep = monte_carlo_check(pair, [2], [5], P, 0, seed=1)
    data = json.loads(rep.dumps())
    assert data["trials"] == 0 and data["violations"] == [] and data["seed"] == 1
    assert set(data) >= {"trials", "seed", "tol", "violations", "vertex_coverage"}
    assert isinstance(rep, OracleReport) and rep.ok
    with pytest.raises(ParameterError):
        monte_carlo_check(pair, [2], [5], P, -1, seed=1)
    with pytest.raises(UnsupportedOperationError):
        monte_carlo_check(build_pair("Diag:A2"), [1, 0, -1], [1, 0, -1], klyachko_polytope(build_pair("AI:3"), [1, 0, -1], [1, 0, -1]), 10, seed=1)


def test_seed_resolution(monkeypatch):
    assert resolve_seed(42) == 42
    monkeypatch.setenv("MOMENTCONE_SEED", "17")
    assert resolve_seed(None) == 17
    monkeypatch.delenv("MOMENTCONE_SEED")
    assert isinstance(resolve_seed(None), int)
