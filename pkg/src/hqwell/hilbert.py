"""Real-Hilbert-space inner products and expectation values.

The scalar product of two quaternion wave functions is the real part of
``int psi conj(chi) dx``; expectation values symmetrise the integrand,

    <O> = 1/2 int [(O Psi) conj(Psi) + Psi conj(O Psi)] dx,

which is real by construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericFailure, UsageError
from .numerics import QuadratureRule, integrate
from .quaternion import Quaternion, field_conj, field_mul, qconj, qmul
from .wavefunction import (DecayExp, LeftRightOperator, PiecewiseProfile, StationaryState,
                           apply_operator, momentum_operator, momentum_squared_operator,
                           norm_squared, position_operator, tail_moment)

NORM_TOL = 1e-6


@dataclass(frozen=True)
class OverlapResult:
    quaternic_overlap: Quaternion
    real_inner: float


def _as_profile(p) -> PiecewiseProfile:
    if isinstance(p, StationaryState):
        return p.profile
    if isinstance(p, PiecewiseProfile):
        return p
    raise UsageError(f"expected a profile or stationary state, got {type(p).__name__}")


def _pieces(a: PiecewiseProfile, b: PiecewiseProfile):
    """Common refinement of two segmentations: (lo, hi, form_a, form_b)."""
    if a.domain != b.domain:
        raise UsageError(f"domain mismatch: {a.domain} vs {b.domain}")
    cuts = sorted(set(a.joints) | set(b.joints))
    edges = [a.domain[0], *cuts, a.domain[1]]
    for lo, hi in zip(edges, edges[1:]):
        mid = 0.5 * (lo + hi) if math.isfinite(lo) and math.isfinite(hi) else (
            hi - 1.0 if math.isfinite(hi) else lo + 1.0)
        sa = a.segments[int(a.segment_index(np.array([mid]))[0])]
        sb = b.segments[int(b.segment_index(np.array([mid]))[0])]
        yield lo, hi, sa.form, sb.form


def overlap(psi, chi, rule: QuadratureRule) -> OverlapResult:
    """``int psi conj(chi) dx`` and its real part."""
    a, b = _as_profile(psi), _as_profile(chi)
    total = np.zeros(4)
    for lo, hi, fa, fb in _pieces(a, b):
        if math.isfinite(lo) and math.isfinite(hi):
            r = rule.mapped(lo, hi)
            vals = field_mul(fa.value(r.nodes), field_conj(fb.value(r.nodes)))
            total += integrate(vals, r).to_array()
        else:
            if not (isinstance(fa, DecayExp) and isinstance(fb, DecayExp)):
                raise UsageError("unbounded pieces must be decaying exponentials")
            rate = fa.sign * fa.kappa + fb.sign * fb.kappa
            total[0] += fa.amplitude * fb.amplitude * tail_moment(rate, lo, hi, 0)
    q = Quaternion.from_array(total)
    return OverlapResult(q, q.x0)


def sampled_overlap(psi: np.ndarray, chi: np.ndarray, rule: QuadratureRule) -> OverlapResult:
    """Overlap of two fields already sampled at the rule nodes."""
    q = integrate(field_mul(psi, field_conj(chi)), rule)
    return OverlapResult(q, q.x0)


def gram_matrix(states, rule: QuadratureRule) -> np.ndarray:
    states = list(states)
    if not states:
        raise UsageError("gram_matrix needs at least one state")
    n = len(states)
    g = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = overlap(states[i], states[j], rule).real_inner
    return g


@dataclass(frozen=True)
class ExpectationDetail:
    value: float
    symmetrized: Quaternion
    unsymmetrized: Quaternion

    @property
    def residue(self) -> float:
        q = self.symmetrized
        return math.sqrt(q.x1 ** 2 + q.x2 ** 2 + q.x3 ** 2)


def _tail_term(op: LeftRightOperator, state: StationaryState, seg, t: float) -> Quaternion:
    form = seg.form
    if not isinstance(form, DecayExp):
        raise UsageError("unbounded segments must be decaying exponentials")
    if len(state.parts) != 1:
        raise UsageError("closed-form tails support single-phase states only")
    part = state.parts[0]
    w = -part.energy / state.params.hbar
    phase = complex(math.cos(w * t), math.sin(w * t))
    tau = 1j * w * phase if op.time_derivative else phase
    q = qmul(qmul(Quaternion.from_complex(tau), op.right_factor),
             qconj(Quaternion.from_complex(phase)))
    order = op.spatial_order
    coeffs = op.coeff_poly().coef
    radial = sum(c * form.moment(seg.lo, seg.hi, p) for p, c in enumerate(coeffs) if c)
    return q * (radial * (form.sign * form.kappa) ** order)


def expectation_detail(op: LeftRightOperator, state: StationaryState, rule: QuadratureRule,
                       t: float = 0.0) -> ExpectationDetail:
    n2 = norm_squared(state.profile, rule)
    if abs(n2 - 1.0) > NORM_TOL:
        raise UsageError(f"state is not normalized (norm^2 = {n2!r})")
    sym = np.zeros(4)
    raw = np.zeros(4)
    for seg in state.profile.segments:
        if seg.finite:
            r = rule.mapped(seg.lo, seg.hi)
            o_psi = apply_operator(op, state, r, t)
            psi = apply_operator(LeftRightOperator(), state, r, t)
            forward = field_mul(o_psi, field_conj(psi))
            backward = field_mul(psi, field_conj(o_psi))
            raw += integrate(forward, r).to_array()
            sym += integrate(0.5 * (forward + backward), r).to_array()
        else:
            x = _tail_term(op, state, seg, t)
            raw += x.to_array()
            sym += (0.5 * (x + qconj(x))).to_array()
    s = Quaternion.from_array(sym)
    return ExpectationDetail(s.x0, s, Quaternion.from_array(raw))


def expectation(op: LeftRightOperator, state: StationaryState, rule: QuadratureRule,
                t: float = 0.0) -> float:
    """Real expectation value of ``op`` in a normalized state."""
    return expectation_detail(op, state, rule, t).value


@dataclass(frozen=True)
class Moments:
    x: float
    x2: float
    p: float
    p2: float

    @property
    def delta_x(self) -> float:
        return math.sqrt(max(self.x2 - self.x ** 2, 0.0))

    @property
    def delta_p(self) -> float:
        return math.sqrt(max(self.p2 - self.p ** 2, 0.0))


def moments(state: StationaryState, rule: QuadratureRule) -> Moments:
    prm = state.params
    return Moments(
        expectation(position_operator(1), state, rule),
        expectation(position_operator(2), state, rule),
        expectation(momentum_operator(prm), state, rule),
        expectation(momentum_squared_operator(prm), state, rule),
    )


def uncertainty_product(state: StationaryState, rule: QuadratureRule) -> float:
    """``Delta x * Delta p``."""
    m = moments(state, rule)
    for name, var in (("position", m.x2 - m.x ** 2), ("momentum", m.p2 - m.p ** 2)):
        if var < -1e-12:
            raise NumericFailure(f"negative {name} variance {var!r}")
    return m.delta_x * m.delta_p
