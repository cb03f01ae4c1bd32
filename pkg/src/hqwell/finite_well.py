"""Finite square well ``V = 0`` for ``|x| < ell/2`` and ``V0`` outside.

Complex sector: even bound states and scattering amplitudes.  Quaternic
sector: bound states pinned at ``E = V0/2`` whose existence quantizes the
particle mass, and scattering states whose energies are quantized by a
continuity condition on ``|Phi|`` and ``|Phi'|``.

Two quantization modes are kept wherever the printed conditions and the
matching algebra disagree: ``DERIVED`` (default, from first principles)
and ``PAPER_LITERAL`` (as printed, for the discrepancy report).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import UsageError
from .infinite_well import BoundaryKind
from .numerics import TAN_POLE_HALFWIDTH, RootBracket, bisect, bracketed_roots
from .wavefunction import (DecayExp, PhysicsParams, PiecewiseProfile, PlaneWaveCombo, Segment,
                           StationaryState, TrigQuaternic)

SCAN_STEPS = 4000
ROOT_TOL = 1e-13


class QuantizationMode(Enum):
    DERIVED = "derived"
    PAPER_LITERAL = "paper"

    @classmethod
    def parse(cls, value) -> "QuantizationMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise UsageError(f"unknown quantization mode {value!r}") from None


@dataclass(frozen=True)
class BoundStateRecord:
    n: int
    energy: float
    kappa: float
    k: float
    A: float
    B: float
    C: float
    mass: float
    mode: QuantizationMode
    family: str = "complex"
    symmetry: BoundaryKind | None = None
    mass_paper_literal: float | None = None


@dataclass(frozen=True)
class ScatterPoint:
    energy: float
    R2: float
    T2: float
    residual_f17: float | None = None
    residual_f18: float | None = None
    R: complex | float | None = None
    T: complex | float | None = None
    R2_closed: float | None = None
    T2_closed: float | None = None

    @property
    def flux_residual(self) -> float:
        return abs(self.R2 + self.T2 - 1.0)


def _require_well(params: PhysicsParams):
    if not params.v0 > 0:
        raise UsageError(f"the finite well needs v0 > 0, got {params.v0!r}")


def wavevectors(energy: float, params: PhysicsParams) -> tuple[float, float]:
    """``(k, kappa)``: interior ``sqrt(2mE)/hbar`` and exterior ``sqrt(2m|V0-E|)/hbar``."""
    m, hb = params.mass, params.hbar
    return (math.sqrt(2 * m * energy) / hb,
            math.sqrt(2 * m * abs(params.v0 - energy)) / hb)


# -- complex bound states ---------------------------------------------------------

def _even_condition(mode: QuantizationMode, params: PhysicsParams):
    v0, m, ell, hb = params.v0, params.mass, params.ell, params.hbar
    if mode is QuantizationMode.DERIVED:
        def f(e):
            return math.sqrt(v0 / e - 1.0) - math.tan(math.sqrt(m * e / 2) * ell / hb)
        # tan argument sqrt(mE/2) ell/hbar hits (2j+1) pi/2
        def pole(j):
            return 2 * (((2 * j + 1) * math.pi / 2) * hb / ell) ** 2 / m
    else:
        def f(e):
            return math.sqrt(v0 / e - 1.0) - math.tan(math.sqrt(m * (v0 - e) / 2) * ell / hb)

        def pole(j):
            return v0 - 2 * (((2 * j + 1) * math.pi / 2) * hb / ell) ** 2 / m
    poles = []
    j = 0
    while True:
        p = pole(j)
        if not 0 < p < v0:
            break
        poles.append(p)
        j += 1
    return f, poles


def even_condition_value(energy: float, params: PhysicsParams, mode="derived") -> float:
    """Residual of the even-parity quantization condition at ``energy``."""
    f, _ = _even_condition(QuantizationMode.parse(mode), params)
    return f(energy)


def bound_energies_complex(params: PhysicsParams, mode="derived",
                           nmax: int | None = None) -> list[BoundStateRecord]:
    """Even-parity complex bound states, ascending."""
    _require_well(params)
    mode = QuantizationMode.parse(mode)
    f, poles = _even_condition(mode, params)
    v0 = params.v0
    lo, hi = v0 * 1e-10, v0 * (1 - 1e-12)
    halfwidth = TAN_POLE_HALFWIDTH * v0
    roots = bracketed_roots(f, lo, hi, scan_steps=SCAN_STEPS, tol=ROOT_TOL * v0,
                            poles=poles, pole_halfwidth=halfwidth)
    if nmax is not None:
        roots = roots[:nmax]
    out = []
    for n, e in enumerate(roots, start=1):
        k, kappa = wavevectors(e, params)
        a, b = _complex_amplitudes(k, kappa, params.ell)
        out.append(BoundStateRecord(n, e, kappa, k, a, b, a, params.mass, mode))
    return out


def _complex_amplitudes(k: float, kappa: float, ell: float) -> tuple[float, float]:
    """Normalization constants ``A`` and ``B > 0`` of the even bound state.

    ``A^2`` and ``B^2`` follow the closed forms; the sign of ``A`` is that
    of ``cos(k ell/2)`` so the value is continuous at the walls.
    """
    r = 1 + kappa ** 2 / k ** 2
    den = k / kappa + 0.5 * r * (k * ell + math.sin(k * ell))
    a2 = k * math.exp(kappa * ell) / den
    b2 = k * r / den
    return math.copysign(math.sqrt(a2), math.cos(k * ell / 2)), math.sqrt(b2)


def bound_profile_complex(record: BoundStateRecord, params: PhysicsParams) -> PiecewiseProfile:
    """``A e^{kappa x} | B cos kx | A e^{-kappa x}``."""
    if record.family != "complex":
        raise UsageError("bound_profile_complex needs a complex bound-state record")
    if record.mode is not QuantizationMode.DERIVED:
        raise UsageError(
            "printed-condition roots do not satisfy value and slope matching at the walls; "
            "no continuous profile exists for them (use the derived mode)")
    h = params.ell / 2
    return PiecewiseProfile((
        Segment(-math.inf, -h, DecayExp(record.A, record.kappa, 1)),
        Segment(-h, h, PlaneWaveCombo.cosine(record.B, record.k)),
        Segment(h, math.inf, DecayExp(record.A, record.kappa, -1)),
    ))


def bound_state_complex(record: BoundStateRecord, params: PhysicsParams) -> StationaryState:
    return StationaryState("FiniteBoundComplex", record.n, record.k, record.energy,
                           bound_profile_complex(record, params), params)


# -- complex scattering -------------------------------------------------------------

def scatter_complex(energy: float, params: PhysicsParams) -> ScatterPoint:
    """Reflection and transmission amplitudes for ``E > V0``."""
    _require_well(params)
    if not (math.isfinite(energy) and energy > params.v0):
        raise UsageError(f"scattering needs energy > v0, got {energy!r}")
    k, kappa = wavevectors(energy, params)
    ell = params.ell
    s = (k * k + kappa * kappa) / (k * kappa)
    c, sn = math.cos(k * ell), math.sin(k * ell)
    t = 2 * complex(math.cos(kappa * ell), -math.sin(kappa * ell)) * complex(2 * c, s * sn) \
        / (4 * c * c + s * s * sn * sn)
    r = 1j * (sn / 2) * (k * k - kappa * kappa) / (k * kappa) * t
    return ScatterPoint(energy, abs(r) ** 2, abs(t) ** 2, R=r, T=t)


def resonance_energies(params: PhysicsParams, emax: float) -> list[float]:
    """Energies in ``(V0, emax]`` with ``k ell = n pi``."""
    out = []
    n = 1
    while True:
        e = (n * math.pi * params.hbar / params.ell) ** 2 / (2 * params.mass)
        if e > emax:
            return out
        if e > params.v0:
            out.append(e)
        n += 1


def scatter_grid(params: PhysicsParams, count: int = 1000, emax_factor: float = 100.0) -> np.ndarray:
    """Default log-spaced energies in ``(V0 (1 + 1e-6), emax_factor V0]``."""
    _require_well(params)
    return np.geomspace(params.v0 * (1 + 1e-6), emax_factor * params.v0, count)


# -- quaternic bound states ----------------------------------------------------------

def _mass_closed_form(symmetry: BoundaryKind, n: int, params: PhysicsParams) -> tuple[float, float]:
    """``(derived, printed)`` masses for level ``n``."""
    q = math.pi * params.hbar / params.ell
    if symmetry is BoundaryKind.SYMMETRIC:
        m = 4.0 / params.v0 * (n * q) ** 2
        return m, m
    return ((2 * n - 1) * q) ** 2 / params.v0, 4.0 / params.v0 * ((2 * n - 1) * q) ** 2


def quaternic_bound_masses(params: PhysicsParams, symmetry="symmetric",
                           nmax: int = 1) -> list[BoundStateRecord]:
    """Masses admitting a bound state at ``E = V0/2``.

    With ``k = kappa = sqrt(m V0)/hbar`` the symmetric case needs
    ``sin(k ell/2) = 0`` and the antisymmetric case ``cos(k ell/2) = 0``;
    each root is found by bisection in ``m``.
    """
    _require_well(params)
    symmetry = BoundaryKind.parse(symmetry)
    if symmetry is BoundaryKind.DIRICHLET:
        raise UsageError("quaternic bound states are symmetric or antisymmetric")
    if nmax < 1:
        raise UsageError("nmax must be >= 1")
    v0, hb, ell = params.v0, params.hbar, params.ell
    trig = math.sin if symmetry is BoundaryKind.SYMMETRIC else math.cos

    def cond(m):
        return trig(math.sqrt(m * v0) / hb * ell / 2)

    def mass_at(phase):
        # inverse of phase = sqrt(m V0) ell / (2 hbar)
        return (2 * phase * hb / ell) ** 2 / v0

    out = []
    for n in range(1, nmax + 1):
        # symmetric roots at phase n pi, antisymmetric at (n - 1/2) pi
        centre = n * math.pi if symmetry is BoundaryKind.SYMMETRIC else (n - 0.5) * math.pi
        lo, hi = mass_at(centre - math.pi / 2), mass_at(centre + math.pi / 2)
        bracket = RootBracket(lo, hi, cond(lo), cond(hi))
        m = bisect(cond, bracket, tol=abs(hi) * 1e-16)
        _, printed = _mass_closed_form(symmetry, n, params)
        kappa = math.sqrt(m * v0) / hb
        b = math.sqrt(kappa / (1 + kappa * ell))
        a = b * math.exp(kappa * ell / 2)
        out.append(BoundStateRecord(n, v0 / 2, kappa, kappa, a, b, a, m,
                                    QuantizationMode.DERIVED, "quaternic", symmetry, printed))
    return out


def quaternic_bound_profile(record: BoundStateRecord, params: PhysicsParams,
                            phi: float = 0.0, xi: float = 0.0) -> PiecewiseProfile:
    """``A e^{kappa x} | B (cos kx e^{i phi} + sin kx e^{i xi} j) | C e^{-kappa x}``."""
    if record.family != "quaternic":
        raise UsageError("quaternic_bound_profile needs a record from quaternic_bound_masses")
    h = params.ell / 2
    return PiecewiseProfile((
        Segment(-math.inf, -h, DecayExp(record.A, record.kappa, 1)),
        Segment(-h, h, TrigQuaternic(record.B, record.k, phi, xi)),
        Segment(h, math.inf, DecayExp(record.C, record.kappa, -1)),
    ))


def quaternic_bound_state(record: BoundStateRecord, params: PhysicsParams,
                          phi: float = 0.0, xi: float = 0.0) -> StationaryState:
    prm = params.with_mass(record.mass)
    return StationaryState("FiniteBoundQuaternic", record.n, record.k, record.energy,
                           quaternic_bound_profile(record, prm, phi, xi), prm, phi0=phi, xi0=xi)


@dataclass(frozen=True)
class ExteriorMass:
    v0: float
    mass: float
    kappa: float
    exterior: float


def exterior_mass(record: BoundStateRecord, params: PhysicsParams) -> float:
    """Probability outside the well, ``2 A^2 int_{ell/2}^inf e^{-2 kappa x} dx``."""
    prof = quaternic_bound_profile(record, params)
    return sum(s.form.moment(s.lo, s.hi, 0) for s in prof.segments if not s.finite)


def exterior_mass_sweep(v0_values, params: PhysicsParams, n: int = 1, symmetry="symmetric",
                        requantize: bool = False) -> list[ExteriorMass]:
    """Exterior probability as the well deepens.

    By default the particle mass is held at the quantized value for the
    first depth while ``V0`` grows, so ``kappa = sqrt(m V0)/hbar`` grows and
    the tails shrink.  With ``requantize`` the mass is re-solved at every
    depth; ``kappa`` is then depth independent and so is the exterior mass.
    """
    v0_values = [float(v) for v in v0_values]
    if not v0_values:
        raise UsageError("need at least one well depth")
    symmetry = BoundaryKind.parse(symmetry)
    first = PhysicsParams(params.hbar, params.mass, params.ell, v0_values[0])
    fixed_mass = quaternic_bound_masses(first, symmetry, n)[-1].mass
    out = []
    for v0 in v0_values:
        prm = PhysicsParams(params.hbar, params.mass, params.ell, v0)
        if requantize:
            rec = quaternic_bound_masses(prm, symmetry, n)[-1]
        else:
            kappa = math.sqrt(fixed_mass * v0) / prm.hbar
            b = math.sqrt(kappa / (1 + kappa * prm.ell))
            a = b * math.exp(kappa * prm.ell / 2)
            rec = BoundStateRecord(n, v0 / 2, kappa, kappa, a, b, a, fixed_mass,
                                   QuantizationMode.DERIVED, "quaternic", symmetry)
        out.append(ExteriorMass(v0, rec.mass, rec.kappa, exterior_mass(rec, prm)))
    return out


# -- quaternic scattering --------------------------------------------------------------

def closed_form_coefficients(v0_over_e: float) -> tuple[float, float]:
    """``(R^2, T^2)`` as rational functions of ``V0/E``; valid for ``0 <= V0/E <= 1``."""
    x = float(v0_over_e)
    if not 0.0 <= x <= 1.0:
        raise UsageError(f"V0/E must lie in [0, 1], got {x!r}")
    den = 1.0 - 0.75 * x
    return 0.25 * x / den, (1.0 - x) / den


def transmission_slope(energy: float, params: PhysicsParams) -> float:
    """``d T^2 / dE`` of the closed form; ``V0 / (4 E^2 (1 - 3V0/4E)^2)``."""
    x = params.v0 / energy
    return 0.25 * params.v0 / (energy * energy * (1 - 0.75 * x) ** 2)


def _scatter_kappa(energy: float, params: PhysicsParams) -> float:
    return math.sqrt(2 * params.mass * (energy - params.v0)) / params.hbar


def quantization_residual(energy: float, params: PhysicsParams) -> float:
    """``tan^2(kappa ell) - 4 (E/V0 - 1)``."""
    u = _scatter_kappa(energy, params) * params.ell
    return math.tan(u) ** 2 - 4 * (energy / params.v0 - 1)


def _pole_energies(params: PhysicsParams, emax: float) -> list[float]:
    out = []
    j = 0
    while True:
        u = (2 * j + 1) * math.pi / 2
        e = params.v0 + (u * params.hbar / params.ell) ** 2 / (2 * params.mass)
        if e > emax + 1.0:
            return out
        out.append(e)
        j += 1


def quaternic_scatter_levels(params: PhysicsParams, emax: float,
                             nmax: int | None = None) -> list[float]:
    """Quantized scattering energies in ``(V0, emax]``, ascending."""
    _require_well(params)
    v0 = params.v0
    if not emax > v0:
        raise UsageError(f"emax must exceed v0, got {emax!r}")
    span = emax - v0
    # u = 0 (E = V0) solves the condition trivially and is excluded
    lo = v0 + max(span * 1e-6, v0 * 1e-14)
    if lo >= emax:
        return []

    def f(e):
        # tan u = +-a u branches merged by working with the squared form
        return quantization_residual(e, params)

    steps = max(SCAN_STEPS, int(40 * len(_pole_energies(params, emax))))
    roots = bracketed_roots(f, lo, emax, scan_steps=steps, tol=ROOT_TOL * max(1.0, emax),
                            poles=_pole_energies(params, emax),
                            pole_halfwidth=TAN_POLE_HALFWIDTH * max(1.0, span))
    return roots[:nmax] if nmax is not None else roots


def quaternic_scatter_coeffs(energy: float, params: PhysicsParams) -> ScatterPoint:
    """``R = -cos(kappa ell)``, ``T^2 = sin^2(kappa ell)`` plus the closed forms.

    ``residual_f17`` and ``residual_f18`` measure how well the pair obeys
    the ``|Phi|`` matching everywhere and the ``|Phi'|`` matching at
    ``x = ell/2``; the second vanishes only at quantized energies.
    """
    _require_well(params)
    if not (math.isfinite(energy) and energy > params.v0):
        raise UsageError(f"scattering needs energy > v0, got {energy!r}")
    u = _scatter_kappa(energy, params) * params.ell
    k, kappa = wavevectors(energy, params)
    r = -math.cos(u)
    t2 = math.sin(u) ** 2
    r2_closed, t2_closed = closed_form_coefficients(params.v0 / energy)
    res17 = abs(1 + r * r + 2 * r * math.cos(u) - t2)
    res18 = abs(1 + r * r - 2 * r * math.cos(u) - t2 * (k / kappa) ** 2)
    return ScatterPoint(energy, r * r, t2, res17, res18, R=r, T=math.sqrt(t2),
                        R2_closed=r2_closed, T2_closed=t2_closed)


def companion_levels(params: PhysicsParams, emax: float) -> list[float]:
    """Roots of ``1 - V0/E = cot^2(k ell/2)`` on ``(V0, emax]``: the complex
    analogue under quaternic-style matching."""
    _require_well(params)
    v0 = params.v0
    if not emax > v0:
        return []

    def f(e):
        half = wavevectors(e, params)[0] * params.ell / 2
        return math.sin(half) ** 2 * (1 - v0 / e) - math.cos(half) ** 2

    lo = v0 * (1 + 1e-12)
    return bracketed_roots(f, lo, emax, scan_steps=SCAN_STEPS, tol=ROOT_TOL * max(1.0, emax))


@dataclass(frozen=True)
class LimitReport:
    energy: float
    v0_over_e: float
    regime: str
    claimed: str
    claimed_value: float
    R2_closed: float
    T2_closed: float
    conflict: bool
    kappa_ell_over_pi: float
    nearest_multiple: int
    parity: str
    companion_nearest: float | None


REGIME_NEAR = "V0~E"
REGIME_FAR = "V0<<E"


def limit_diagnostics(params: PhysicsParams, energy: float) -> LimitReport:
    """Check the two printed limiting regimes against the closed forms.

    ``V0/E >= 1/2`` counts as ``V0 ~ E``, where the printed claim is
    ``T^2 ~ 1``; below that the claim is ``R^2 ~ 1``.  A claim is flagged
    when the closed-form value of the claimed coefficient is below 1/2.
    """
    _require_well(params)
    if not energy > params.v0:
        raise UsageError(f"limit diagnostics need energy > v0, got {energy!r}")
    x = params.v0 / energy
    r2, t2 = closed_form_coefficients(x)
    if x >= 0.5:
        regime, claimed, value = REGIME_NEAR, "T2~1", t2
    else:
        regime, claimed, value = REGIME_FAR, "R2~1", r2
    ratio = _scatter_kappa(energy, params) * params.ell / math.pi
    nearest = int(round(ratio))
    comp = companion_levels(params, 2 * energy)
    near = min(comp, key=lambda e: abs(e - energy)) if comp else None
    return LimitReport(energy, x, regime, claimed, value, r2, t2, value < 0.5, ratio, nearest,
                       "even" if nearest % 2 == 0 else "odd", near)
