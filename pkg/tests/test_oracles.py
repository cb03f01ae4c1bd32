"""Recompute every frozen reference value without the package under test."""
import math

import mpmath as mp
import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

import frozen_values as fv

mp.mp.dps = 30


def test_even_bound_roots_v50():
    f = lambda e: mp.sqrt(50 / e - 1) - mp.tan(mp.sqrt(e / 2))
    for guess, frozen in zip((3.4, 29.4), fv.FINITE_EVEN_V50):
        assert float(mp.findroot(f, guess)) == pytest.approx(frozen, rel=1e-15)


@pytest.mark.parametrize("v0,guess,frozen", [(500, 4.3, fv.FINITE_GROUND_V500),
                                             (5000, 4.7, fv.FINITE_GROUND_V5000)])
def test_deeper_ground_levels(v0, guess, frozen):
    f = lambda e: mp.sqrt(v0 / e - 1) - mp.tan(mp.sqrt(e / 2))
    assert float(mp.findroot(f, guess)) == pytest.approx(frozen, rel=1e-15)


def test_printed_condition_root():
    g = lambda e: mp.sqrt(50 / e - 1) - mp.tan(mp.sqrt((50 - e) / 2))
    assert float(mp.findroot(g, 16.3)) == pytest.approx(fv.PRINTED_EVEN_V50, rel=1e-15)


def test_quaternic_scatter_levels():
    h = lambda u: mp.tan(u) ** 2 - 2 * u ** 2
    for guess, frozen in zip((0.91, 1.923, 4.5585, 4.83), fv.QUATERNIC_SCATTER_V1):
        u = mp.findroot(h, guess)
        assert float(1 + u ** 2 / 2) == pytest.approx(frozen, rel=1e-15)


def test_tangent_roots():
    minus = mp.findroot(lambda u: mp.tan(u) - mp.sqrt(2) * u, 4.55)
    plus = mp.findroot(lambda u: mp.tan(u) + mp.sqrt(2) * u, 1.92)
    assert float(minus) == pytest.approx(fv.TAN_MINUS_ROOT, rel=1e-15)
    assert float(plus) == pytest.approx(fv.TAN_PLUS_ROOT, rel=1e-15)
    assert float(plus) == pytest.approx(fv.QUATERNIC_SCATTER_U2, rel=1e-15)


def test_complex_scattering_by_matching():
    k, ka, a, b = 2.0, math.sqrt(2.0), -0.5, 0.5
    e = np.exp
    m = np.array([
        [e(-1j * ka * a), -np.cos(k * a), -np.sin(k * a), 0],
        [-1j * ka * e(-1j * ka * a), k * np.sin(k * a), -k * np.cos(k * a), 0],
        [0, np.cos(k * b), np.sin(k * b), -e(1j * ka * b)],
        [0, -k * np.sin(k * b), k * np.cos(k * b), -1j * ka * e(1j * ka * b)],
    ])
    rhs = np.array([-e(1j * ka * a), -1j * ka * e(1j * ka * a), 0, 0])
    r, _, _, t = np.linalg.solve(m, rhs)
    assert abs(r) ** 2 == pytest.approx(fv.COMPLEX_SCATTER_V1_E2["R2"], abs=1e-14)
    assert abs(t) ** 2 == pytest.approx(fv.COMPLEX_SCATTER_V1_E2["T2"], abs=1e-14)


def test_uncertainty_closed_form():
    x2 = mp.mpf(1) / 3 - 1 / (2 * mp.pi ** 2)
    assert float(mp.sqrt(x2 - mp.mpf(1) / 4) * mp.pi) == pytest.approx(fv.DIRICHLET_DXDP,
                                                                       rel=1e-15)
    assert float(mp.sqrt(mp.mpf(1) / 12) * 2 * mp.pi) == pytest.approx(fv.QUATERNIC_DXDP,
                                                                       rel=1e-15)


def test_padded_fd_levels_with_scipy():
    n, a, b = 2000, -3.5, 4.5
    h = (b - a) / (n + 1)
    x = a + h * np.arange(1, n + 1)
    sub = ((np.arange(64) + 0.5) / 64 - 0.5) * h
    v = np.where(np.abs(x[:, None] + sub[None, :]) < 0.5, 0.0, 50.0).mean(axis=1)
    t = 1 / (2 * h * h)
    w = eigh_tridiagonal(2 * t + v, np.full(n - 1, -t), select="i", select_range=(0, 3),
                         eigvals_only=True)
    # the FD spectrum also holds odd states; the even ones are levels 0 and 2
    assert w[0] == pytest.approx(fv.FD_PADDED_V50[0], rel=1e-11)
    assert w[2] == pytest.approx(fv.FD_PADDED_V50[1], rel=1e-11)
    for exact, fd in zip(fv.FINITE_EVEN_V50, (w[0], w[2])):
        assert abs(exact - fd) / fd < 1e-3
