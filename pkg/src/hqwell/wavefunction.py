"""Piecewise-analytic quaternion-valued wave profiles and ``(a|b)`` operators.

A profile is an ordered partition of the domain into segments, each
carrying one analytic form:

* :class:`DecayExp`      ``A exp(sign * kappa * x)`` on a semi-infinite tail,
* :class:`TrigQuaternic` ``B (cos kx e^{i phi0} + sin kx e^{i xi0} j)``,
* :class:`PlaneWaveCombo` ``sum a_m e^{i k_m x} + (sum b_m e^{i k_m x}) j``.

Values and derivatives are evaluated exactly.  At an interior joint the
left segment is used; one-sided limits are available through
:func:`eval_one_sided`.

Stationary states keep their time dependence symbolically as right
factors ``exp(-i E t / hbar)`` attached to spatial parts, so an energy
operator acts analytically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np
from numpy.polynomial import Polynomial

from .errors import NumericFailure, UsageError
from .numerics import QuadratureRule, simpson_rule
from .quaternion import ONE, I, Quaternion, as_field, field_mul, field_norm2

MAX_DERIVATIVE = 2


@dataclass(frozen=True)
class PhysicsParams:
    hbar: float = 1.0
    mass: float = 1.0
    ell: float = 1.0
    v0: float = 0.0

    def __post_init__(self):
        for name in ("hbar", "mass", "ell"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise UsageError(f"{name} must be a positive finite number, got {v!r}")
        if not (math.isfinite(self.v0) and self.v0 >= 0):
            raise UsageError(f"v0 must be a non-negative finite number, got {self.v0!r}")

    def with_mass(self, mass: float) -> "PhysicsParams":
        return replace(self, mass=mass)


# -- segment forms -------------------------------------------------------------

def tail_moment(kappa2: float, lo: float, hi: float, power: int) -> float:
    """``int_lo^hi x**power * exp(kappa2 * x) dx`` over a semi-infinite interval.

    ``kappa2`` is negative for a right tail ``[lo, inf)`` and positive for a
    left tail ``(-inf, hi]``.
    """
    if kappa2 < 0 and math.isinf(hi):
        lam, a, flip = -kappa2, lo, 1.0
    elif kappa2 > 0 and math.isinf(lo):
        # x -> -y maps (-inf, hi] onto [-hi, inf)
        lam, a, flip = kappa2, -hi, (-1.0) ** power
    else:
        raise UsageError("closed-form moments need a decaying semi-infinite tail")
    total = sum(math.factorial(power) / math.factorial(j) * a ** j / lam ** (power - j + 1)
                for j in range(power + 1))
    return flip * math.exp(-lam * a) * total


@dataclass(frozen=True)
class DecayExp:
    """``A exp(sign * kappa * x)``; sign +1 on a left tail, -1 on a right tail."""
    amplitude: float
    kappa: float
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise UsageError("DecayExp sign must be +1 or -1")
        if not self.kappa > 0:
            raise UsageError("DecayExp needs kappa > 0")

    def value(self, x: np.ndarray, order: int = 0) -> np.ndarray:
        rate = self.sign * self.kappa
        out = np.zeros(np.shape(x) + (4,))
        out[..., 0] = self.amplitude * rate ** order * np.exp(rate * np.asarray(x))
        return out

    def scaled(self, c: float) -> "DecayExp":
        return replace(self, amplitude=self.amplitude * c)

    def moment(self, lo: float, hi: float, power: int = 0) -> float:
        """``int x**power |f|^2 dx`` in closed form."""
        return self.amplitude ** 2 * tail_moment(2 * self.sign * self.kappa, lo, hi, power)


@dataclass(frozen=True)
class TrigQuaternic:
    """``B (cos kx e^{i phi0} + sin kx e^{i xi0} j)`` with real ``B``."""
    amplitude: float
    k: float
    phi0: float = 0.0
    xi0: float = 0.0

    def value(self, x: np.ndarray, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        shift = order * math.pi / 2
        scale = self.amplitude * self.k ** order
        c = scale * np.cos(self.k * x + shift)
        s = scale * np.sin(self.k * x + shift)
        return np.stack([c * math.cos(self.phi0), c * math.sin(self.phi0),
                         s * math.cos(self.xi0), s * math.sin(self.xi0)], axis=-1)

    def scaled(self, c: float) -> "TrigQuaternic":
        return replace(self, amplitude=self.amplitude * c)


Wave = tuple  # (complex amplitude, wavevector)


@dataclass(frozen=True)
class PlaneWaveCombo:
    """Finite sum of plane waves on the complex part and on the j part."""
    terms: tuple[Wave, ...] = ()
    jterms: tuple[Wave, ...] = ()

    def value(self, x: np.ndarray, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        z0 = np.zeros(x.shape, dtype=complex)
        z1 = np.zeros(x.shape, dtype=complex)
        for amp, k in self.terms:
            z0 = z0 + amp * (1j * k) ** order * np.exp(1j * k * x)
        for amp, k in self.jterms:
            z1 = z1 + amp * (1j * k) ** order * np.exp(1j * k * x)
        return np.stack([z0.real, z0.imag, z1.real, z1.imag], axis=-1)

    def scaled(self, c: float) -> "PlaneWaveCombo":
        return PlaneWaveCombo(tuple((a * c, k) for a, k in self.terms),
                              tuple((a * c, k) for a, k in self.jterms))

    @staticmethod
    def sine(amplitude: complex, k: float, on_j: bool = False) -> "PlaneWaveCombo":
        """``amplitude * sin(kx)`` on the complex (or j) part."""
        waves = ((amplitude / 2j, k), (-amplitude / 2j, -k))
        return PlaneWaveCombo(jterms=waves) if on_j else PlaneWaveCombo(terms=waves)

    @staticmethod
    def cosine(amplitude: complex, k: float, on_j: bool = False) -> "PlaneWaveCombo":
        waves = ((amplitude / 2, k), (amplitude / 2, -k))
        return PlaneWaveCombo(jterms=waves) if on_j else PlaneWaveCombo(terms=waves)

    def __add__(self, other: "PlaneWaveCombo") -> "PlaneWaveCombo":
        return PlaneWaveCombo(self.terms + other.terms, self.jterms + other.jterms)


SegmentForm = Union[DecayExp, TrigQuaternic, PlaneWaveCombo]


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float
    form: SegmentForm

    @property
    def finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)


@dataclass(frozen=True)
class PiecewiseProfile:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise UsageError("a profile needs at least one segment")
        for s in segs:
            if not s.lo < s.hi:
                raise UsageError(f"empty segment [{s.lo}, {s.hi}]")
            if not s.finite and not isinstance(s.form, DecayExp):
                raise UsageError("only DecayExp segments may be unbounded")
        for left, right in zip(segs, segs[1:]):
            if left.hi != right.lo:
                raise UsageError(f"segments leave a gap or overlap at {left.hi} / {right.lo}")

    @classmethod
    def single(cls, lo: float, hi: float, form: SegmentForm) -> "PiecewiseProfile":
        return cls((Segment(lo, hi, form),))

    @property
    def domain(self) -> tuple[float, float]:
        return self.segments[0].lo, self.segments[-1].hi

    @property
    def joints(self) -> tuple[float, ...]:
        return tuple(s.hi for s in self.segments[:-1])

    def scaled(self, c: float) -> "PiecewiseProfile":
        return PiecewiseProfile(tuple(replace(s, form=s.form.scaled(c)) for s in self.segments))

    def segment_index(self, x: np.ndarray) -> np.ndarray:
        his = np.array([s.hi for s in self.segments[:-1]])
        return np.searchsorted(his, x, side="left")


def _check_order(order: int):
    if order not in range(MAX_DERIVATIVE + 1):
        raise NumericFailure(
            f"derivative order {order} exceeds the analytic smoothness of the segment forms")


def eval_profile(p: PiecewiseProfile, x, derivative_order: int = 0):
    """Exact value (or derivative) of the profile at ``x``.

    Scalars give a :class:`Quaternion`; arrays give an ``(N, 4)`` field.
    """
    _check_order(derivative_order)
    xs = np.asarray(x, dtype=float)
    lo, hi = p.domain
    if np.any(~np.isfinite(xs)) or np.any(xs < lo) or np.any(xs > hi):
        raise UsageError(f"x outside the profile domain [{lo}, {hi}]")
    flat = np.atleast_1d(xs)
    idx = p.segment_index(flat)
    out = np.empty(flat.shape + (4,))
    for i, seg in enumerate(p.segments):
        sel = idx == i
        if sel.any():
            out[sel] = seg.form.value(flat[sel], derivative_order)
    if xs.ndim == 0:
        return Quaternion.from_array(out[0])
    return out


def eval_one_sided(p: PiecewiseProfile, x: float, derivative_order: int = 0,
                   side: str = "left") -> Quaternion:
    """Limit of the profile at ``x`` from one side (``"left"`` or ``"right"``)."""
    _check_order(derivative_order)
    idx = int(p.segment_index(np.array([x]))[0])
    if side == "right" and idx < len(p.segments) - 1 and x == p.segments[idx].hi:
        idx += 1
    elif side not in ("left", "right"):
        raise UsageError("side must be 'left' or 'right'")
    return Quaternion.from_array(p.segments[idx].form.value(np.array([x]), derivative_order)[0])


def segment_integral(seg: Segment, integrand, rule: QuadratureRule) -> np.ndarray:
    """Integrate a per-segment sampled quantity with ``rule`` mapped onto it."""
    r = rule.mapped(seg.lo, seg.hi)
    vals = integrand(seg, r.nodes)
    return r.weights @ vals


def norm_squared(p: PiecewiseProfile, rule: QuadratureRule | None = None) -> float:
    """``int |p|^2 dx``; finite segments by quadrature, decaying tails exactly."""
    total = 0.0
    for seg in p.segments:
        if seg.finite:
            r = (rule or simpson_rule(seg.lo, seg.hi)).mapped(seg.lo, seg.hi)
            total += float(r.weights @ field_norm2(seg.form.value(r.nodes)))
        else:
            total += seg.form.moment(seg.lo, seg.hi, 0)
    return total


def normalize_profile(p: PiecewiseProfile, rule: QuadratureRule | None = None) -> PiecewiseProfile:
    """Rescale by a positive real constant to unit norm."""
    n2 = norm_squared(p, rule)
    if not (math.isfinite(n2) and n2 > 0):
        raise UsageError("cannot normalize a zero-norm profile")
    return p.scaled(1.0 / math.sqrt(n2))


# -- stationary states ------------------------------------------------------------

FAMILIES = ("ComplexWell", "QuaternicWell", "Combined",
            "FiniteBoundComplex", "FiniteBoundQuaternic")


@dataclass(frozen=True)
class TimePart:
    """Spatial part ``profile(x)`` carrying the right factor ``exp(-i E t / hbar)``."""
    profile: PiecewiseProfile
    energy: float


@dataclass(frozen=True)
class StationaryState:
    family: str
    n: int
    k: float
    energy: float
    profile: PiecewiseProfile
    params: PhysicsParams
    p: int | None = None
    theta: float = 0.0
    phi0: float = 0.0
    xi0: float = 0.0
    parts: tuple[TimePart, ...] = field(default=())

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UsageError(f"unknown family {self.family!r}")
        if not self.parts:
            object.__setattr__(self, "parts", (TimePart(self.profile, self.energy),))

    @property
    def domain(self) -> tuple[float, float]:
        return self.profile.domain

    def field(self, x, t: float = 0.0, derivative_order: int = 0,
              time_derivative: bool = False) -> np.ndarray:
        """Samples of ``Psi(x, t)`` (or of an x-derivative, or of d/dt)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(x.shape + (4,))
        hbar = self.params.hbar
        for part in self.parts:
            spatial = eval_profile(part.profile, x, derivative_order)
            w = -part.energy / hbar
            factor = complex(math.cos(w * t), math.sin(w * t))
            if time_derivative:
                factor = 1j * w * factor
            out += field_mul(spatial, Quaternion.from_complex(factor).to_array())
        return out


# -- left-right operators ------------------------------------------------------------

Coeff = Union[float, Polynomial]


@dataclass(frozen=True)
class LeftRightOperator:
    """``O Psi = coeff(x) * D Psi * right_factor``.

    ``D`` is ``d^order/dx^order`` or, when ``time_derivative`` is set, the
    time derivative acting on the symbolic stationary phases.  A polynomial
    coefficient keeps tail integrals in closed form.
    """
    spatial_order: int = 0
    spatial_coeff: Coeff = 1.0
    right_factor: Quaternion = ONE
    time_derivative: bool = False
    name: str = ""

    def __post_init__(self):
        if self.spatial_order not in (0, 1, 2):
            raise UsageError("spatial_order must be 0, 1 or 2")
        if self.time_derivative and self.spatial_order:
            raise UsageError("a time-derivative operator carries no spatial order")

    def coeff_poly(self) -> Polynomial:
        c = self.spatial_coeff
        return c if isinstance(c, Polynomial) else Polynomial([float(c)])

    def coeff_at(self, x: np.ndarray) -> np.ndarray:
        return self.coeff_poly()(np.asarray(x, dtype=float))


def position_operator(power: int = 1) -> LeftRightOperator:
    return LeftRightOperator(0, Polynomial([0.0] * power + [1.0]), name=f"x^{power}")


def momentum_operator(params: PhysicsParams) -> LeftRightOperator:
    """``(-hbar d/dx | i)``, the right-acting analogue of ``-i hbar d/dx``."""
    return LeftRightOperator(1, -params.hbar, I, name="p")


def momentum_squared_operator(params: PhysicsParams) -> LeftRightOperator:
    # (-hbar d/dx | i) applied twice: (-hbar)^2 d^2/dx^2 (.) i i
    return LeftRightOperator(2, -params.hbar ** 2, ONE, name="p^2")


def kinetic_operator(params: PhysicsParams) -> LeftRightOperator:
    return LeftRightOperator(2, -params.hbar ** 2 / (2 * params.mass), ONE, name="T")


def energy_operator(params: PhysicsParams) -> LeftRightOperator:
    """``(hbar d/dt | i)``."""
    return LeftRightOperator(0, params.hbar, I, time_derivative=True, name="E")


def _rule_segment(profile: PiecewiseProfile, rule: QuadratureRule) -> int | None:
    for i, s in enumerate(profile.segments):
        if s.lo <= rule.a and rule.b <= s.hi:
            return i
    return None


def apply_operator(op: LeftRightOperator, state: StationaryState, rule: QuadratureRule,
                   t: float = 0.0) -> np.ndarray:
    """Samples of ``O Psi`` at the rule's nodes.

    When the rule lies inside one segment that segment's formula is used at
    every node, endpoints included.  A rule crossing a joint where the
    required derivative is discontinuous is refused.
    """
    order = op.spatial_order
    _check_order(order)
    lo, hi = state.domain
    if rule.a < lo or rule.b > hi:
        raise UsageError("quadrature rule extends beyond the state's domain")
    x = rule.nodes
    seg = _rule_segment(state.profile, rule)
    if seg is None:
        for part in state.parts:
            for joint in part.profile.joints:
                if not (rule.a < joint < rule.b) or not np.any(x == joint):
                    continue
                left = eval_one_sided(part.profile, joint, order, "left")
                right = eval_one_sided(part.profile, joint, order, "right")
                gap = abs(left - right)
                if gap > 1e-10 * max(1.0, abs(left), abs(right)):
                    raise NumericFailure(
                        f"order-{order} derivative jumps at node x={joint!r}")
        psi = state.field(x, t, order, op.time_derivative)
    else:
        psi = _field_on_segment(state, seg, x, t, order, op.time_derivative)
    out = field_mul(psi, op.right_factor.to_array())
    return out * op.coeff_at(x)[:, None]


def _field_on_segment(state: StationaryState, seg: int, x: np.ndarray, t: float,
                      order: int, time_derivative: bool) -> np.ndarray:
    out = np.zeros(x.shape + (4,))
    hbar = state.params.hbar
    for part in state.parts:
        if len(part.profile.segments) != len(state.profile.segments):
            raise UsageError("time parts must share the state's segmentation")
        spatial = part.profile.segments[seg].form.value(x, order)
        w = -part.energy / hbar
        factor = complex(math.cos(w * t), math.sin(w * t))
        if time_derivative:
            factor = 1j * w * factor
        out += field_mul(spatial, Quaternion.from_complex(factor).to_array())
    return out


def sample_state(state: StationaryState, rule: QuadratureRule, t: float = 0.0) -> np.ndarray:
    """``Psi(x, t)`` at the rule nodes, with the same segment convention as
    :func:`apply_operator`."""
    return apply_operator(LeftRightOperator(), state, rule, t)
