import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import frozen_values as fv
from hqwell.errors import UsageError
from hqwell.hilbert import (expectation, expectation_detail, gram_matrix, moments, overlap,
                            uncertainty_product)
from hqwell.infinite_well import combined_state, complex_state, quaternic_basis_state
from hqwell.numerics import simpson_rule
from hqwell.wavefunction import (PhysicsParams, PiecewiseProfile, PlaneWaveCombo, StationaryState,
                                 TrigQuaternic, energy_operator, kinetic_operator,
                                 momentum_operator, momentum_squared_operator, position_operator)

P = PhysicsParams()
RULE = simpson_rule(0.0, 1.0)


def trig(k, phi=0.0, xi=0.0):
    return PiecewiseProfile.single(0, 1, TrigQuaternic(1.0, k, phi, xi))


class TestOverlap:
    def test_self_overlap(self):
        q = overlap(trig(2 * math.pi, 0.2, 0.9), trig(2 * math.pi, 0.2, 0.9), RULE).quaternic_overlap
        assert np.allclose(q.to_array(), [1, 0, 0, 0], atol=1e-10)

    def test_distinct_modes(self):
        q = overlap(trig(2 * math.pi), trig(4 * math.pi), RULE).quaternic_overlap
        assert np.max(np.abs(q.to_array())) < 1e-10

    def test_j_multiple_has_no_real_inner(self):
        chi = PiecewiseProfile.single(0, 1, PlaneWaveCombo.sine(math.sqrt(2), math.pi))
        psi = PiecewiseProfile.single(0, 1, PlaneWaveCombo.sine(math.sqrt(2), math.pi, on_j=True))
        r = overlap(psi, chi, RULE)
        assert abs(r.real_inner) < 1e-15
        assert r.real_inner == r.quaternic_overlap.x0

    def test_domain_mismatch(self):
        other = PiecewiseProfile.single(0, 2, TrigQuaternic(1.0, 1.0))
        with pytest.raises(UsageError):
            overlap(trig(1.0), other, RULE)


class TestGram:
    @pytest.mark.parametrize("phases", [(0.0, 0.0), (0.3, 1.1)])
    def test_quaternic_basis(self, phases):
        states = [quaternic_basis_state("symmetric", n, *phases, P) for n in range(1, 9)]
        g = gram_matrix(states, RULE)
        assert np.max(np.abs(g - np.eye(8))) < 1e-10
        assert np.array_equal(g, g.T)

    def test_combined_basis(self):
        states = [combined_state(n, n + 1, 0.6, P) for n in range(1, 6)]
        assert np.max(np.abs(gram_matrix(states, RULE) - np.eye(5))) < 1e-10

    def test_single(self):
        g = gram_matrix([complex_state("dirichlet", 3, P)], RULE)
        assert g.shape == (1, 1) and g[0, 0] == pytest.approx(1.0, abs=1e-12)

    def test_empty(self):
        with pytest.raises(UsageError):
            gram_matrix([], RULE)


class TestExpectation:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_dirichlet_moments(self, n):
        s = complex_state("dirichlet", n, P)
        m = moments(s, RULE)
        assert m.x == pytest.approx(0.5, abs=1e-8)
        assert abs(m.p) < 1e-8
        assert m.p2 == pytest.approx(2 * s.energy, abs=1e-8)
        assert m.x2 == pytest.approx(1 / 3 - 1 / (2 * (n * math.pi) ** 2), abs=1e-8)

    def test_uncertainty_values(self):
        assert uncertainty_product(complex_state("dirichlet", 1, P), RULE) == pytest.approx(
            fv.DIRICHLET_DXDP, abs=1e-8)
        q = uncertainty_product(quaternic_basis_state("symmetric", 1, params=P), RULE)
        assert q >= 0.5
        assert q == pytest.approx(fv.QUATERNIC_DXDP, abs=1e-8)

    def test_combined_energy(self):
        s = combined_state(1, 2, math.pi / 4, P)
        assert expectation(energy_operator(P), s, RULE) == pytest.approx(5 * math.pi ** 2 / 4,
                                                                         abs=1e-10)

    def test_time_independence(self):
        s = combined_state(2, 5, 0.7, P)
        t = 0.37 * P.hbar / (math.pi ** 2 / 2)
        e0 = expectation(energy_operator(P), s, RULE)
        assert expectation(energy_operator(P), s, RULE, t=t) == pytest.approx(e0, abs=1e-10)
        # complex and j parts never interfere in |Psi|^2, so <x> is static too
        x0 = expectation(position_operator(1), s, RULE)
        assert expectation(position_operator(1), s, RULE, t=t) == pytest.approx(x0, abs=1e-12)

    def test_unnormalized_rejected(self):
        prof = PiecewiseProfile.single(0, 1, PlaneWaveCombo.sine(1.0, math.pi))
        s = StationaryState("ComplexWell", 1, math.pi, math.pi ** 2 / 2, prof, P)
        with pytest.raises(UsageError):
            expectation(position_operator(1), s, RULE)

    def test_finite_well_tails_closed_form(self):
        from hqwell.finite_well import (bound_energies_complex, bound_state_complex,
                                        quaternic_bound_masses, quaternic_bound_state)
        prm = PhysicsParams(v0=50)
        s = bound_state_complex(bound_energies_complex(prm)[0], prm)
        rule = simpson_rule(0.0, 1.0)
        assert abs(expectation(position_operator(1), s, rule)) < 1e-12
        # <T> + V0 P_out = E
        rec = quaternic_bound_masses(prm, "symmetric", 1)[0]
        q = quaternic_bound_state(rec, prm, 0.3, 1.2)
        t = expectation(kinetic_operator(q.params), q, rule)
        p_out = rec.B ** 2 / rec.kappa
        assert t + prm.v0 * p_out == pytest.approx(rec.energy, rel=1e-10)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 6), st.floats(0, math.pi / 2))
    def test_symmetrized_matches_real_part(self, n, p, theta):
        if n == p:
            return
        s = combined_state(n, p, theta, P)
        for op in (position_operator(1), momentum_operator(P), momentum_squared_operator(P),
                   energy_operator(P)):
            d = expectation_detail(op, s, RULE, t=0.2)
            assert d.residue < 1e-10
            assert d.value == pytest.approx(d.unsymmetrized.x0, abs=1e-10)
