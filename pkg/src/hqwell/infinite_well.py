"""Infinite square well on the closed interval ``[0, ell]``.

Complex solutions exist for three boundary conditions (Dirichlet,
symmetric ``Phi(0) = Phi(ell)`` and antisymmetric ``Phi(0) = -Phi(ell)``);
quaternic basis states survive only the latter two.  Combined solutions
pair two Dirichlet levels on the complex and j parts with a mixing angle,
and form a real Fourier basis once the pairing ``n -> p(n)`` is injective.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import NumericFailure, UnsupportedBoundary, UsageError
from .hilbert import expectation, sampled_overlap
from .numerics import QuadratureRule, simpson_rule
from .wavefunction import (PhysicsParams, PiecewiseProfile, PlaneWaveCombo, StationaryState,
                           TimePart, TrigQuaternic, energy_operator, eval_profile,
                           sample_state)


class BoundaryKind(Enum):
    DIRICHLET = "dirichlet"
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"

    @classmethod
    def parse(cls, value) -> "BoundaryKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise UsageError(f"unknown boundary condition {value!r}") from None

    @property
    def first_index(self) -> int:
        return 0 if self is BoundaryKind.ANTISYMMETRIC else 1

    def mode(self, n: int) -> int:
        """Integer ``q`` with ``k ell = q pi`` for level ``n``."""
        if n < self.first_index:
            raise UsageError(f"{self.value} levels start at n={self.first_index}, got n={n}")
        if self is BoundaryKind.DIRICHLET:
            return n
        if self is BoundaryKind.SYMMETRIC:
            return 2 * n
        return 2 * n + 1


@dataclass(frozen=True)
class SpectrumEntry:
    n: int
    k: float
    energy: float
    gap_ratio: float


def well_rule(params: PhysicsParams, n_nodes: int | None = None) -> QuadratureRule:
    return simpson_rule(0.0, params.ell, *(() if n_nodes is None else (n_nodes,)))


def gap_unit(params: PhysicsParams) -> float:
    """``(1/m) (pi hbar / ell)^2``."""
    return (math.pi * params.hbar / params.ell) ** 2 / params.mass


def level_energy(bc, n: int, params: PhysicsParams) -> float:
    q = BoundaryKind.parse(bc).mode(n)
    return (q * math.pi * params.hbar / params.ell) ** 2 / (2 * params.mass)


def complex_spectrum(bc, params: PhysicsParams, nmax: int) -> list[SpectrumEntry]:
    """The lowest ``nmax`` complex levels for a boundary condition."""
    bc = BoundaryKind.parse(bc)
    if nmax < 1:
        raise UsageError("nmax must be >= 1")
    unit = gap_unit(params)
    out = []
    for n in range(bc.first_index, bc.first_index + nmax):
        e = level_energy(bc, n, params)
        e_next = level_energy(bc, n + 1, params)
        k = bc.mode(n) * math.pi / params.ell
        out.append(SpectrumEntry(n, k, e, (e_next - e) / unit))
    return out


def gap_ratio_exact(bc, n: int) -> Fraction:
    """``(E_{n+1} - E_n) / [(1/m)(pi hbar/ell)^2]`` as an exact rational."""
    bc = BoundaryKind.parse(bc)
    q0, q1 = bc.mode(n), bc.mode(n + 1)
    return Fraction(q1 * q1 - q0 * q0, 2)


def gap_ratio(bc, n: int) -> float:
    return float(gap_ratio_exact(bc, n))


def complex_state(bc, n: int, params: PhysicsParams) -> StationaryState:
    """Normalized complex eigenstate: sine (Dirichlet) or cosine profiles."""
    bc = BoundaryKind.parse(bc)
    k = bc.mode(n) * math.pi / params.ell
    amp = math.sqrt(2.0 / params.ell)
    if bc is BoundaryKind.DIRICHLET:
        form = PlaneWaveCombo.sine(amp, k)
    else:
        form = PlaneWaveCombo.cosine(amp, k)
    profile = PiecewiseProfile.single(0.0, params.ell, form)
    return StationaryState("ComplexWell", n, k, level_energy(bc, n, params), profile, params)


def quaternic_basis_state(symmetry, n: int, phi0: float = 0.0, xi0: float = 0.0,
                          params: PhysicsParams = PhysicsParams()) -> StationaryState:
    """``(1/sqrt(ell)) (cos kx e^{i phi0} + sin kx e^{i xi0} j)``.

    Dirichlet conditions force the profile to vanish identically and are
    rejected with :class:`UnsupportedBoundary`.
    """
    bc = BoundaryKind.parse(symmetry)
    if bc is BoundaryKind.DIRICHLET:
        raise UnsupportedBoundary(
            "Dirichlet conditions admit only the trivial quaternic solution Phi = 0")
    for name, v in (("phi0", phi0), ("xi0", xi0)):
        if not 0.0 <= v <= 2 * math.pi:
            raise UsageError(f"{name} must lie in [0, 2 pi], got {v!r}")
    k = bc.mode(n) * math.pi / params.ell
    form = TrigQuaternic(1.0 / math.sqrt(params.ell), k, phi0, xi0)
    profile = PiecewiseProfile.single(0.0, params.ell, form)
    energy = (params.hbar * k) ** 2 / (2 * params.mass)
    return StationaryState("QuaternicWell", n, k, energy, profile, params, phi0=phi0, xi0=xi0)


def combined_state(n: int, p: int, theta: float,
                   params: PhysicsParams = PhysicsParams()) -> StationaryState:
    """Two Dirichlet levels joined on the complex and j parts.

    ``Psi = sqrt(2/ell) [cos(theta) sin(n pi x/ell) e^{-i E_n t/hbar}
                         + sin(theta) sin(p pi x/ell) e^{+i E_p t/hbar} j]``.
    Both phases are stored as right factors ``e^{-i E t/hbar}``; since
    ``z j = j conj(z)`` the j part reproduces the opposite sign above.
    """
    if n < 1 or p < 1:
        raise UsageError("combined states need n, p >= 1")
    if n == p:
        raise UsageError("combined states need non-degenerate levels (n != p)")
    if not 0.0 <= theta <= math.pi / 2:
        raise UsageError(f"theta must lie in [0, pi/2], got {theta!r}")
    ell = params.ell
    amp = math.sqrt(2.0 / ell)
    kn, kp = n * math.pi / ell, p * math.pi / ell
    en = level_energy(BoundaryKind.DIRICHLET, n, params)
    ep = level_energy(BoundaryKind.DIRICHLET, p, params)
    cpart = PlaneWaveCombo.sine(amp * math.cos(theta), kn)
    jpart = PlaneWaveCombo.sine(amp * math.sin(theta), kp, on_j=True)
    parts = (TimePart(PiecewiseProfile.single(0.0, ell, cpart), en),
             TimePart(PiecewiseProfile.single(0.0, ell, jpart), ep))
    profile = PiecewiseProfile.single(0.0, ell, cpart + jpart)
    mean = en * math.cos(theta) ** 2 + ep * math.sin(theta) ** 2
    return StationaryState("Combined", n, kn, mean, profile, params, p=p, theta=theta,
                           parts=parts)


def combined_energy_formula(n: int, p: int, theta: float, params: PhysicsParams) -> float:
    en = level_energy(BoundaryKind.DIRICHLET, n, params)
    ep = level_energy(BoundaryKind.DIRICHLET, p, params)
    return en * math.cos(theta) ** 2 + ep * math.sin(theta) ** 2


def combined_energy(state: StationaryState, rule: QuadratureRule | None = None) -> float:
    """``<E>`` from the energy operator, checked against the mixing formula."""
    if state.family != "Combined":
        raise UsageError(f"combined_energy needs a Combined state, got {state.family}")
    rule = rule or well_rule(state.params)
    value = expectation(energy_operator(state.params), state, rule)
    expected = combined_energy_formula(state.n, state.p, state.theta, state.params)
    if abs(value - expected) > 1e-8 * max(1.0, abs(expected)):
        raise NumericFailure(f"<E> = {value!r} disagrees with mixing formula {expected!r}")
    return value


def combined_gap_ratio(n: int, p: int, theta: float, params: PhysicsParams,
                       rule: QuadratureRule | None = None) -> float:
    """``(E_{(n+1)p} - E_{np}) / [(1/m)(pi hbar/ell)^2]`` at fixed ``p`` and ``theta``."""
    lower = combined_energy(combined_state(n, p, theta, params), rule)
    upper = combined_energy(combined_state(n + 1, p, theta, params), rule)
    return (upper - lower) / gap_unit(params)


# -- quaternic Fourier series ----------------------------------------------------------

@dataclass(frozen=True)
class PairingRule:
    """Map ``n -> p(n)``; must be injective and never fixed-point."""
    func: Callable[[int], int] = lambda n: n + 1

    def __call__(self, n: int) -> int:
        return int(self.func(n))

    @classmethod
    def from_mapping(cls, mapping: dict[int, int]) -> "PairingRule":
        return cls(lambda n: mapping[n])

    def validate(self, nmax: int):
        seen = {}
        for n in range(1, nmax + 1):
            p = self(n)
            if p < 1:
                raise UsageError(f"p({n}) = {p} is not a positive level")
            if p == n:
                raise UsageError(f"p({n}) = {n} pairs a level with itself")
            if p in seen:
                raise UsageError(f"pairing is not injective: p({seen[p]}) = p({n}) = {p}")
            seen[p] = n


def _common_theta(theta_n, nmax: int) -> float:
    if np.ndim(theta_n) == 0:
        return float(theta_n)
    thetas = [float(t) for t in theta_n]
    if len(thetas) != nmax:
        raise UsageError(f"expected {nmax} mixing angles, got {len(thetas)}")
    if any(t != thetas[0] for t in thetas):
        raise UsageError("basis elements compared in one projection must share theta "
                         "(parallelism condition)")
    return thetas[0]


def fourier_basis(pairing: PairingRule, theta_n, nmax: int,
                  params: PhysicsParams = PhysicsParams()) -> list[StationaryState]:
    pairing.validate(nmax)
    theta = _common_theta(theta_n, nmax)
    return [combined_state(n, pairing(n), theta, params) for n in range(1, nmax + 1)]


def fourier_project(sampled: np.ndarray, pairing: PairingRule, theta_n, nmax: int,
                    rule: QuadratureRule | None = None,
                    params: PhysicsParams = PhysicsParams()) -> list[float]:
    """Real coefficients ``c_n = <Psi(x, 0), Psi_{n p(n)}(x, 0)>``."""
    rule = rule or well_rule(params)
    basis = fourier_basis(pairing, theta_n, nmax, params)
    field = np.asarray(sampled, dtype=float)
    if field.shape != (len(rule), 4):
        raise UsageError(f"sampled field must have shape ({len(rule)}, 4)")
    return [sampled_overlap(field, sample_state(b, rule), rule).real_inner for b in basis]


def fourier_synthesize(coeffs: Sequence[float], pairing: PairingRule, theta_n,
                       params: PhysicsParams = PhysicsParams(),
                       rule: QuadratureRule | None = None) -> np.ndarray:
    """``sum_n c_n Psi_{n p(n)}(x, 0)`` on the rule nodes."""
    rule = rule or well_rule(params)
    coeffs = [float(c) for c in coeffs]
    if not coeffs:
        raise UsageError("need at least one coefficient")
    basis = fourier_basis(pairing, theta_n, len(coeffs), params)
    out = np.zeros((len(rule), 4))
    for c, b in zip(coeffs, basis):
        out += c * sample_state(b, rule)
    return out


def boundary_residual(state: StationaryState, bc) -> float:
    """How far a state is from satisfying a boundary condition at 0 and ell."""
    bc = BoundaryKind.parse(bc)
    a = eval_profile(state.profile, 0.0)
    b = eval_profile(state.profile, state.params.ell)
    if bc is BoundaryKind.DIRICHLET:
        return max(abs(a), abs(b))
    if bc is BoundaryKind.SYMMETRIC:
        return abs(a - b)
    return abs(a + b)
