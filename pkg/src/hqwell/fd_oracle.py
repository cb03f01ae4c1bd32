"""Finite-difference eigenvalue oracle for ``-(hbar^2/2m) d^2/dx^2 + V``.

The oracle knows nothing about analytic spectra: it discretizes the
Hamiltonian on a uniform grid and hands the matrix to the solvers in
:mod:`hqwell.numerics`.  Boundary conditions map onto matrix structure:
Dirichlet and padded wells are plain tridiagonal, periodic and
antiperiodic rings couple the two end nodes with ``-t`` and ``+t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import NumericFailure, UsageError
from .numerics import (MAX_DENSE_N, SymTridiag, dense_sym_eigen, periodic_tridiag_eigen,
                       symtridiag_eigen)
from .wavefunction import PhysicsParams

MIN_GRID = 16
MIN_PADDING = 3.0
POTENTIAL_SUBSAMPLES = 64


class OracleBC(Enum):
    DIRICHLET = "dirichlet"
    PERIODIC = "periodic"
    ANTIPERIODIC = "antiperiodic"
    DECAY_PADDED = "decay-padded"

    @classmethod
    def parse(cls, value) -> "OracleBC":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise UsageError(f"unknown oracle boundary condition {value!r}") from None

    @property
    def ring(self) -> bool:
        return self in (OracleBC.PERIODIC, OracleBC.ANTIPERIODIC)


def square_well_potential(params: PhysicsParams) -> Callable[[np.ndarray], np.ndarray]:
    """``0`` inside ``|x| < ell/2``, ``V0`` outside."""
    half, v0 = params.ell / 2, params.v0

    def v(x):
        return np.where(np.abs(np.asarray(x, dtype=float)) < half, 0.0, v0)
    return v


def zero_potential(x):
    return np.zeros(np.shape(x))


@dataclass(frozen=True)
class OracleConfig:
    grid_points: int
    domain: tuple[float, float]
    bc: OracleBC
    potential: Callable[[np.ndarray], np.ndarray] | None = None
    params: PhysicsParams = field(default_factory=PhysicsParams)

    def __post_init__(self):
        object.__setattr__(self, "bc", OracleBC.parse(self.bc))
        a, b = (float(v) for v in self.domain)
        object.__setattr__(self, "domain", (a, b))
        if int(self.grid_points) != self.grid_points or self.grid_points < MIN_GRID:
            raise UsageError(f"grid_points must be an integer >= {MIN_GRID}, "
                             f"got {self.grid_points!r}")
        if not b > a:
            raise UsageError(f"empty domain [{a}, {b}]")
        if self.potential is None:
            pot = (square_well_potential(self.params) if self.bc is OracleBC.DECAY_PADDED
                   else zero_potential)
            object.__setattr__(self, "potential", pot)
        if self.bc is OracleBC.DECAY_PADDED:
            half, ell = self.params.ell / 2, self.params.ell
            # tolerate round-off in the padded edges
            slack = 1e-12 * ell
            if a > -half - MIN_PADDING * ell + slack or b < half + MIN_PADDING * ell - slack:
                raise UsageError(f"decay padding needs >= {MIN_PADDING} ell of barrier on "
                                 f"each side of the well")

    @property
    def spacing(self) -> float:
        a, b = self.domain
        n = self.grid_points
        return (b - a) / n if self.bc.ring else (b - a) / (n + 1)

    def nodes(self) -> np.ndarray:
        a, _ = self.domain
        h = self.spacing
        idx = np.arange(self.grid_points) if self.bc.ring else np.arange(1, self.grid_points + 1)
        return a + idx * h

    def with_grid(self, n: int) -> "OracleConfig":
        return OracleConfig(n, self.domain, self.bc, self.potential, self.params)


def decay_padded_config(params: PhysicsParams, grid_points: int = 2000,
                        pad_left: float = 3.0, pad_right: float = 4.0) -> OracleConfig:
    """Well ``[-ell/2, ell/2]`` inside ``[-ell/2 - pad_left ell, ell/2 + pad_right ell]``."""
    ell = params.ell
    return OracleConfig(grid_points, (-ell / 2 - pad_left * ell, ell / 2 + pad_right * ell),
                        OracleBC.DECAY_PADDED, None, params)


def cell_averaged_potential(cfg: OracleConfig, subsamples: int = POTENTIAL_SUBSAMPLES) -> np.ndarray:
    """Mean of ``V`` over each grid cell (midpoint sub-sampling).

    Point sampling a step potential gives an O(h) error that depends on
    where the step falls relative to the nodes; cell averages restore
    O(h^2) behaviour.
    """
    x = cfg.nodes()
    h = cfg.spacing
    offsets = ((np.arange(subsamples) + 0.5) / subsamples - 0.5) * h
    v = np.asarray(cfg.potential(x[:, None] + offsets[None, :]), dtype=float)
    if v.shape != (x.size, subsamples):
        raise UsageError("potential must be vectorized over numpy arrays")
    if not np.all(np.isfinite(v)):
        raise NumericFailure("potential returned non-finite values")
    return v.mean(axis=1)


def build_fd_hamiltonian(cfg: OracleConfig, dense: bool = False):
    """Central second-difference Hamiltonian as a :class:`SymTridiag`.

    ``diag = hbar^2/(m h^2) + V``, ``offdiag = -hbar^2/(2 m h^2)``; rings get
    the corner ``-t`` (periodic) or ``+t`` (antiperiodic).
    """
    prm = cfg.params
    h = cfg.spacing
    t = prm.hbar ** 2 / (2 * prm.mass * h * h)
    n = cfg.grid_points
    diag = 2 * t + cell_averaged_potential(cfg)
    off = np.full(n - 1, -t)
    corner = None
    if cfg.bc is OracleBC.PERIODIC:
        corner = -t
    elif cfg.bc is OracleBC.ANTIPERIODIC:
        corner = t
    m = SymTridiag(diag, off, corner)
    return m.dense() if dense else m


def oracle_energies(cfg: OracleConfig, count: int, solver: str = "auto") -> list[float]:
    """Lowest ``count`` eigenvalues, ascending.

    ``solver`` is ``"auto"`` (Sturm bisection, or inertia counting plus
    inverse iteration for rings) or ``"jacobi"`` (dense cyclic Jacobi,
    limited to small grids).
    """
    if not 1 <= count <= cfg.grid_points:
        raise UsageError(f"count must lie in [1, {cfg.grid_points}]")
    m = build_fd_hamiltonian(cfg)
    if solver == "jacobi":
        if cfg.grid_points > MAX_DENSE_N:
            raise UsageError(f"dense solver limited to N <= {MAX_DENSE_N}")
        vals = dense_sym_eigen(m.dense(), count)
    elif solver == "auto":
        vals = periodic_tridiag_eigen(m, count) if cfg.bc.ring else symtridiag_eigen(m, count)
    else:
        raise UsageError(f"unknown solver {solver!r}")
    vals = [float(v) for v in vals]
    if not all(math.isfinite(v) for v in vals):
        raise NumericFailure("eigenvalue solver returned non-finite values")
    return vals


def richardson_ratios(cfg: OracleConfig, exact: float, grids: Sequence[int],
                      level: int = 0) -> list[float]:
    """``error(N_i) / error(N_{i+1})`` for a level with known value."""
    errs = []
    for n in grids:
        vals = oracle_energies(cfg.with_grid(n), level + 1)
        errs.append(abs(vals[level] - exact))
    if any(e == 0 for e in errs[1:]):
        raise NumericFailure("zero discretization error; cannot form a ratio")
    return [a / b for a, b in zip(errs, errs[1:])]


@dataclass(frozen=True)
class PairedLevels:
    levels: list[float]
    spread: list[float]
    zero_mode: float | None


def paired_levels(values: Sequence[float], zero_mode: bool) -> PairedLevels:
    """Collapse a ring spectrum into its doubly degenerate pairs.

    ``spread`` holds the relative splitting of each pair.
    """
    vals = list(values)
    zm = None
    if zero_mode:
        if not vals:
            raise UsageError("no eigenvalues")
        zm, vals = vals[0], vals[1:]
    if len(vals) % 2:
        vals = vals[:-1]
    levels, spread = [], []
    for a, b in zip(vals[::2], vals[1::2]):
        mid = 0.5 * (a + b)
        levels.append(mid)
        spread.append(abs(b - a) / max(abs(mid), 1e-300))
    return PairedLevels(levels, spread, zm)


@dataclass(frozen=True)
class LevelComparison:
    index: int
    analytic: float
    oracle: float
    rel_error: float
    passed: bool


@dataclass(frozen=True)
class SpectrumComparison:
    levels: list[LevelComparison]
    rel_tol: float
    match: str

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.levels)

    @property
    def max_rel_error(self) -> float:
        return max(c.rel_error for c in self.levels)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def compare_spectra(analytic: Sequence[float], oracle: Sequence[float], rel_tol: float,
                    match: str = "index") -> SpectrumComparison:
    """Relative error of each analytic level against the oracle.

    ``match="index"`` pairs lists position by position; ``"nearest"``
    pairs each analytic level with the closest oracle level, for oracle
    spectra that also contain states outside the analytic family.
    """
    analytic, oracle = [float(a) for a in analytic], [float(o) for o in oracle]
    if not analytic or not oracle:
        raise UsageError("compare_spectra needs two non-empty lists")
    if not rel_tol > 0:
        raise UsageError("rel_tol must be positive")
    if match == "index":
        pairs = list(zip(analytic, oracle))
        if len(analytic) > len(oracle):
            raise UsageError("oracle list shorter than the analytic list")
    elif match == "nearest":
        pairs = [(a, min(oracle, key=lambda o: abs(o - a))) for a in analytic]
    else:
        raise UsageError(f"unknown match rule {match!r}")
    out = []
    for i, (a, o) in enumerate(pairs):
        err = abs(a - o) / abs(o) if o != 0 else abs(a - o)
        out.append(LevelComparison(i, a, o, err, err <= rel_tol))
    return SpectrumComparison(out, rel_tol, match)


def padding_error(params: PhysicsParams, count: int, grid_points: int = 2000,
                  extra_pad: float = 1.5) -> float:
    """Largest relative shift of the lowest ``count`` padded-well levels when
    ``extra_pad * ell`` more barrier is added on each side.

    Whole cells are added so the grid spacing and node positions are shared
    and only the padding differs.
    """
    base = decay_padded_config(params, grid_points)
    h = base.spacing
    extra = int(round(extra_pad * params.ell / h))
    a, b = base.domain
    wide = OracleConfig(grid_points + 2 * extra, (a - extra * h, b + extra * h),
                        OracleBC.DECAY_PADDED, None, params)
    lo = oracle_energies(base, count)
    hi = oracle_energies(wide, count)
    return max(abs(x - y) / abs(y) for x, y in zip(lo, hi))
