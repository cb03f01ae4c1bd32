import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import frozen_values as fv
from hqwell.errors import UsageError
from hqwell.fd_oracle import (OracleBC, OracleConfig, build_fd_hamiltonian,
                              cell_averaged_potential, compare_spectra, decay_padded_config,
                              oracle_energies, padding_error, paired_levels, richardson_ratios)
from hqwell.numerics import symtridiag_eigen
from hqwell.wavefunction import PhysicsParams

P = PhysicsParams()
V50 = PhysicsParams(v0=50)


class TestConfig:
    def test_small_grid_refused(self):
        with pytest.raises(UsageError):
            OracleConfig(15, (0, 1), "dirichlet")

    def test_empty_domain(self):
        with pytest.raises(UsageError):
            OracleConfig(32, (1, 1), "dirichlet")

    def test_padding_required(self):
        with pytest.raises(UsageError):
            OracleConfig(64, (-2.0, 2.0), OracleBC.DECAY_PADDED, None, V50)
        cfg = decay_padded_config(V50)
        assert cfg.domain == (-3.5, 4.5)

    def test_spacings(self):
        assert OracleConfig(99, (0, 1), "dirichlet").spacing == pytest.approx(0.01)
        ring = OracleConfig(100, (0, 1), "periodic")
        assert ring.spacing == pytest.approx(0.01)
        assert ring.nodes()[0] == 0.0 and ring.nodes()[-1] == pytest.approx(0.99)


class TestHamiltonian:
    def test_three_point_closed_form(self):
        # matches the assembly rule with h = 1/4; built directly since configs need N >= 16
        h = 0.25
        t = 1 / (2 * h * h)
        assert (2 * t, -t) == (16.0, -8.0)
        cfg = OracleConfig(16, (0, 1), "dirichlet")
        m = build_fd_hamiltonian(cfg)
        tt = 1 / (2 * cfg.spacing ** 2)
        assert m.diag == pytest.approx(2 * tt) and m.offdiag == pytest.approx(-tt)

    def test_corners(self):
        p = build_fd_hamiltonian(OracleConfig(32, (0, 1), "periodic"))
        a = build_fd_hamiltonian(OracleConfig(32, (0, 1), "antiperiodic"))
        d = build_fd_hamiltonian(OracleConfig(32, (0, 1), "dirichlet"))
        assert p.corner == p.offdiag[0]
        assert a.corner == -a.offdiag[0]
        assert d.corner is None

    def test_padded_diag(self):
        cfg = decay_padded_config(V50, 200)
        m = build_fd_hamiltonian(cfg)
        x = cfg.nodes()
        t = 1 / (2 * cfg.spacing ** 2)
        outside = np.abs(x) > 0.5 + cfg.spacing
        inside = np.abs(x) < 0.5 - cfg.spacing
        assert m.diag[outside] == pytest.approx(2 * t + 50)
        assert m.diag[inside] == pytest.approx(2 * t)

    def test_cell_average_partial_cell(self):
        # h = 0.1; the step at 0.87 lies inside the cell centred on node 0.9
        cfg = OracleConfig(16, (0, 1.7), "dirichlet", lambda x: np.where(x > 0.87, 1.0, 0.0))
        v = cell_averaged_potential(cfg)
        x = cfg.nodes()
        k = int(np.argmin(np.abs(x - 0.9)))
        assert v[k] == pytest.approx(0.8, abs=0.02)
        assert np.all(v[:k] == 0.0) and np.all(v[k + 1:] == 1.0)

    def test_dense_form(self):
        a = build_fd_hamiltonian(OracleConfig(20, (0, 1), "periodic"), dense=True)
        assert a.shape == (20, 20) and a[0, -1] == a[0, 1]


class TestEnergies:
    def test_dirichlet_ground(self):
        lam = oracle_energies(OracleConfig(2000, (0, 1), "dirichlet"), 1)[0]
        assert abs(lam - math.pi ** 2 / 2) / (math.pi ** 2 / 2) < 1e-4

    def test_periodic_pairs(self):
        raw = oracle_energies(OracleConfig(2000, (0, 1), "periodic"), 11)
        pairs = paired_levels(raw, zero_mode=True)
        assert abs(pairs.zero_mode) < 1e-6
        assert pairs.levels[0] == pytest.approx(2 * math.pi ** 2, rel=1e-4)
        assert max(pairs.spread) < 1e-8

    def test_antiperiodic_pairs(self):
        raw = oracle_energies(OracleConfig(2000, (0, 1), "antiperiodic"), 10)
        pairs = paired_levels(raw, zero_mode=False)
        assert pairs.levels[0] == pytest.approx(math.pi ** 2 / 2, rel=1e-4)
        assert max(pairs.spread) < 1e-8

    def test_jacobi_agrees_with_sturm(self):
        cfg = OracleConfig(120, (0, 1), "dirichlet")
        a = oracle_energies(cfg, 4)
        b = oracle_energies(cfg, 4, solver="jacobi")
        assert a == pytest.approx(b, rel=1e-9)

    def test_count_validation(self):
        cfg = OracleConfig(16, (0, 1), "dirichlet")
        with pytest.raises(UsageError):
            oracle_energies(cfg, 17)
        with pytest.raises(UsageError):
            oracle_energies(cfg, 1, solver="lapack")
        with pytest.raises(UsageError):
            oracle_energies(OracleConfig(2000, (0, 1), "dirichlet"), 1, solver="jacobi")

    def test_second_order_convergence(self):
        ratios = richardson_ratios(OracleConfig(250, (0, 1), "dirichlet"), math.pi ** 2 / 2,
                                   [250, 500, 1000, 2000])
        assert all(3.5 <= r <= 4.5 for r in ratios)

    def test_padded_well(self):
        fd = oracle_energies(decay_padded_config(V50), 4)
        assert [fd[0], fd[2]] == pytest.approx(fv.FD_PADDED_V50, rel=1e-11)
        assert padding_error(V50, 2) < 1e-8

    @settings(max_examples=10, deadline=None)
    @given(st.floats(0.3, 3.0), st.floats(0.3, 3.0))
    def test_scaling_property(self, hbar, mass):
        # E scales as hbar^2 / m for a fixed grid
        base = oracle_energies(OracleConfig(64, (0, 1), "dirichlet"), 2)
        prm = PhysicsParams(hbar=hbar, mass=mass)
        scaled = oracle_energies(OracleConfig(64, (0, 1), "dirichlet", None, prm), 2)
        assert scaled == pytest.approx([b * hbar ** 2 / mass for b in base], rel=1e-10)


class TestCompare:
    def test_identical(self):
        r = compare_spectra([1.0, 2.0], [1.0, 2.0], 1e-12)
        assert r.passed and r.max_rel_error == 0.0

    def test_nearest_and_index(self):
        analytic = [1.0, 3.0]
        oracle = [1.0, 2.0, 3.0]
        assert not compare_spectra(analytic, oracle, 1e-3).passed
        assert compare_spectra(analytic, oracle, 1e-3, match="nearest").passed

    def test_empty(self):
        with pytest.raises(UsageError):
            compare_spectra([], [1.0], 1e-3)

    def test_dirichlet_levels(self):
        analytic = [(n * math.pi) ** 2 / 2 for n in range(1, 6)]
        fd = oracle_energies(OracleConfig(2000, (0, 1), "dirichlet"), 5)
        assert compare_spectra(analytic, fd, 1e-3).verdict == "pass"

    def test_printed_versus_derived(self):
        fd = oracle_energies(decay_padded_config(V50), 4)
        assert compare_spectra(fv.FINITE_EVEN_V50, fd, 1e-3, "nearest").passed
        assert not compare_spectra([fv.PRINTED_EVEN_V50], fd, 1e-3, "nearest").passed
