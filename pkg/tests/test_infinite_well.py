import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hqwell.errors import NumericFailure, UnsupportedBoundary, UsageError
from hqwell.fd_oracle import OracleConfig, oracle_energies, paired_levels
from hqwell.infinite_well import (BoundaryKind, PairingRule, boundary_residual,
                                  combined_energy, combined_energy_formula, combined_gap_ratio,
                                  combined_state, complex_spectrum, complex_state, fourier_project,
                                  fourier_synthesize, gap_ratio, gap_ratio_exact,
                                  quaternic_basis_state, well_rule)
from hqwell.quaternion import field_norm2
from hqwell.wavefunction import PhysicsParams, norm_squared, sample_state

P = PhysicsParams()
PI2 = math.pi ** 2
RULE = well_rule(P)


class TestComplexSpectrum:
    def test_examples(self):
        assert complex_spectrum("dirichlet", P, 1)[0].energy == pytest.approx(PI2 / 2, rel=1e-15)
        assert complex_spectrum("symmetric", P, 1)[0].energy == pytest.approx(2 * PI2, rel=1e-15)
        first = complex_spectrum("antisymmetric", P, 1)[0]
        assert (first.n, first.energy) == (0, pytest.approx(PI2 / 2, rel=1e-15))

    def test_row_count_and_order(self):
        for bc in BoundaryKind:
            rows = complex_spectrum(bc, P, 7)
            assert len(rows) == 7
            assert all(a.energy < b.energy for a, b in zip(rows, rows[1:]))

    def test_nmax_validation(self):
        with pytest.raises(UsageError):
            complex_spectrum("dirichlet", P, 0)

    def test_units(self):
        prm = PhysicsParams(hbar=2.0, mass=3.0, ell=0.5)
        e = complex_spectrum("dirichlet", prm, 1)[0].energy
        assert e == pytest.approx((math.pi * 2.0 / 0.5) ** 2 / (2 * 3.0), rel=1e-15)

    def test_unknown_bc(self):
        with pytest.raises(UsageError):
            complex_spectrum("robin", P, 1)


class TestGaps:
    def test_examples(self):
        assert gap_ratio("dirichlet", 1) == 1.5
        assert gap_ratio("symmetric", 1) == 6
        assert gap_ratio("antisymmetric", 1) == 8

    @pytest.mark.parametrize("n", range(1, 11))
    def test_closed_forms(self, n):
        assert gap_ratio_exact("dirichlet", n) == Fraction(2 * n + 1, 2)
        assert gap_ratio_exact("symmetric", n) == 4 * (n + Fraction(1, 2))
        assert gap_ratio_exact("antisymmetric", n) == 4 * (n + Fraction(1, 2)) + 2

    def test_invalid_index(self):
        with pytest.raises(UsageError):
            gap_ratio("dirichlet", 0)
        with pytest.raises(UsageError):
            gap_ratio("antisymmetric", -1)

    def test_spectrum_gap_column(self):
        for row in complex_spectrum("symmetric", P, 5):
            assert row.gap_ratio == pytest.approx(float(gap_ratio_exact("symmetric", row.n)),
                                                  abs=1e-12)


class TestQuaternicBasis:
    def test_examples(self):
        s = quaternic_basis_state("symmetric", 1, params=P)
        assert (s.k, s.energy) == (pytest.approx(2 * math.pi), pytest.approx(2 * PI2))
        a = quaternic_basis_state("antisymmetric", 0, params=P)
        assert (a.k, a.energy) == (pytest.approx(math.pi), pytest.approx(PI2 / 2))

    def test_dirichlet_refused(self):
        with pytest.raises(UnsupportedBoundary):
            quaternic_basis_state("dirichlet", 1, params=P)

    def test_phase_range(self):
        with pytest.raises(UsageError):
            quaternic_basis_state("symmetric", 1, 7.0, 0.0, P)

    @settings(max_examples=40)
    @given(st.integers(1, 12), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
    def test_boundary_residuals(self, n, phi, xi):
        assert boundary_residual(quaternic_basis_state("symmetric", n, phi, xi, P),
                                 "symmetric") <= 1e-12
        assert boundary_residual(quaternic_basis_state("antisymmetric", n, phi, xi, P),
                                 "antisymmetric") <= 1e-12

    @pytest.mark.parametrize("n", range(1, 6))
    def test_complex_boundary_residuals(self, n):
        assert boundary_residual(complex_state("dirichlet", n, P), "dirichlet") <= 1e-12
        assert boundary_residual(complex_state("symmetric", n, P), "symmetric") <= 1e-12
        assert boundary_residual(complex_state("antisymmetric", n, P), "antisymmetric") <= 1e-12

    def test_energy_matches_k(self):
        for bc in ("symmetric", "antisymmetric"):
            s = quaternic_basis_state(bc, 3, params=P)
            assert s.energy == pytest.approx(s.k ** 2 / 2, rel=1e-15)


class TestCombined:
    def test_theta_zero_is_complex(self):
        s = combined_state(1, 2, 0.0, P)
        c = complex_state("dirichlet", 1, P)
        assert np.allclose(sample_state(s, RULE), sample_state(c, RULE), atol=1e-15)
        assert combined_energy(s, RULE) == pytest.approx(PI2 / 2, abs=1e-10)

    def test_theta_half_pi(self):
        s = combined_state(1, 2, math.pi / 2, P)
        psi = sample_state(s, RULE)
        assert np.max(np.abs(psi[:, :2])) < 1e-15
        assert combined_energy(s, RULE) == pytest.approx(2 * PI2, abs=1e-10)

    def test_norm(self):
        assert norm_squared(combined_state(1, 2, math.pi / 4, P).profile, RULE) == pytest.approx(
            1.0, abs=1e-10)

    def test_energy_example(self):
        assert combined_energy(combined_state(1, 2, math.pi / 4, P), RULE) == pytest.approx(
            5 * PI2 / 4, abs=1e-10)

    def test_validation(self):
        with pytest.raises(UsageError):
            combined_state(2, 2, 0.1, P)
        with pytest.raises(UsageError):
            combined_state(1, 2, 2.0, P)
        with pytest.raises(UsageError):
            combined_energy(complex_state("dirichlet", 1, P), RULE)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 6), st.floats(0, math.pi / 2))
    def test_energy_property(self, n, p, theta):
        if n == p:
            return
        s = combined_state(n, p, theta, P)
        assert combined_energy(s, RULE) == pytest.approx(
            combined_energy_formula(n, p, theta, P), abs=1e-10 * max(1.0, s.energy))

    @pytest.mark.parametrize("n,p,theta", [(1, 3, 0.4), (2, 7, 1.1), (4, 1, 0.0)])
    def test_minimum_gap(self, n, p, theta):
        assert combined_gap_ratio(n, p, theta, P, RULE) == pytest.approx(
            (n + 0.5) * math.cos(theta) ** 2, abs=1e-10)


class TestFourier:
    def test_self_projection(self):
        target = sample_state(combined_state(1, 2, 0.5, P), RULE)
        c = fourier_project(target, PairingRule(), 0.5, 6, RULE, P)
        assert c[0] == pytest.approx(1.0, abs=1e-8)
        assert max(abs(v) for v in c[1:]) < 1e-8

    def test_zero_field(self):
        c = fourier_project(np.zeros((len(RULE), 4)), PairingRule(), 0.5, 4, RULE, P)
        assert c == [0.0] * 4

    def test_synthesize_unit_vector(self):
        f = fourier_synthesize([1, 0, 0], PairingRule(), 0.3, P, RULE)
        assert np.allclose(f, sample_state(combined_state(1, 2, 0.3, P), RULE))
        assert not fourier_synthesize([0, 0], PairingRule(), 0.3, P, RULE).any()

    @settings(max_examples=15, deadline=None)
    @given(st.lists(st.floats(-1, 1), min_size=6, max_size=6), st.floats(0, math.pi / 2))
    def test_round_trip(self, coeffs, theta):
        field = fourier_synthesize(coeffs, PairingRule(), theta, P, RULE)
        back = fourier_project(field, PairingRule(), theta, 6, RULE, P)
        assert back == pytest.approx(coeffs, abs=1e-8)

    def test_custom_pairing(self):
        rule = PairingRule.from_mapping({1: 4, 2: 6, 3: 1})
        coeffs = [0.3, -0.7, 0.2]
        field = fourier_synthesize(coeffs, rule, 0.9, P, RULE)
        assert fourier_project(field, rule, [0.9] * 3, 3, RULE, P) == pytest.approx(coeffs,
                                                                                    abs=1e-8)

    def test_pairing_rules(self):
        with pytest.raises(UsageError):
            PairingRule(lambda n: 3).validate(3)
        with pytest.raises(UsageError):
            PairingRule(lambda n: n).validate(2)
        PairingRule().validate(50)

    def test_mixed_theta_refused(self):
        with pytest.raises(UsageError):
            fourier_project(np.zeros((len(RULE), 4)), PairingRule(), [0.1, 0.2], 2, RULE, P)
        with pytest.raises(UsageError):
            fourier_project(np.zeros((len(RULE), 4)), PairingRule(), [0.1], 2, RULE, P)

    def test_shape_mismatch(self):
        with pytest.raises(UsageError):
            fourier_project(np.zeros((5, 4)), PairingRule(), 0.1, 2, RULE, P)
        with pytest.raises(UsageError):
            fourier_synthesize([], PairingRule(), 0.1, P, RULE)


class TestAgainstOracle:
    def test_dirichlet(self):
        exact = [e.energy for e in complex_spectrum("dirichlet", P, 5)]
        fd = oracle_energies(OracleConfig(2000, (0, 1), "dirichlet"), 5)
        assert all(abs(a - b) / a < 1e-4 for a, b in zip(exact, fd))

    @pytest.mark.parametrize("bc,ring,zero", [("symmetric", "periodic", True),
                                              ("antisymmetric", "antiperiodic", False)])
    def test_rings(self, bc, ring, zero):
        exact = [e.energy for e in complex_spectrum(bc, P, 5)]
        raw = oracle_energies(OracleConfig(2000, (0, 1), ring), 10 + int(zero))
        pairs = paired_levels(raw, zero)
        assert all(abs(a - b) / a < 1e-4 for a, b in zip(exact, pairs.levels))
