"""Printed-versus-derived discrepancy report.

Three places where a printed condition disagrees with the algebra it is
meant to summarize are checked mechanically:

* even bound-state energies of the complex finite well (oracle decides),
* antisymmetric quaternic bound-state masses (root condition decides),
* the two limiting regimes of quaternic scattering (closed forms decide).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .fd_oracle import compare_spectra, decay_padded_config, oracle_energies
from .finite_well import (QuantizationMode, bound_energies_complex, limit_diagnostics,
                          quaternic_bound_masses)
from .wavefunction import PhysicsParams

ORACLE_REL_TOL = 1e-3
ORACLE_LEVELS = 6


@dataclass(frozen=True)
class DiscrepancyRow:
    item: str
    source: str
    index: int
    value: float
    reference: float
    rel_error: float
    verdict: str


HEADER = ("item", "source", "index", "value", "reference", "rel_error", "verdict")


def _even_bound_rows(params: PhysicsParams, grid_points: int) -> list[DiscrepancyRow]:
    cfg = decay_padded_config(params, grid_points)
    count = min(ORACLE_LEVELS, grid_points)
    oracle = oracle_energies(cfg, count)
    # only levels below the barrier are bound
    oracle = [e for e in oracle if e < params.v0] or oracle[:1]
    rows = []
    for mode, source in ((QuantizationMode.PAPER_LITERAL, "printed"),
                         (QuantizationMode.DERIVED, "derived")):
        energies = [r.energy for r in bound_energies_complex(params, mode)]
        if not energies:
            rows.append(DiscrepancyRow("even-bound-energy", source, 0, math.nan, math.nan,
                                       math.inf, "fail"))
            continue
        cmp = compare_spectra(energies, oracle, ORACLE_REL_TOL, match="nearest")
        for c in cmp.levels:
            rows.append(DiscrepancyRow("even-bound-energy", source, c.index + 1, c.analytic,
                                       c.oracle, c.rel_error, "pass" if c.passed else "fail"))
    return rows


def _mass_rows(params: PhysicsParams, nmax: int = 3) -> list[DiscrepancyRow]:
    rows = []
    for rec in quaternic_bound_masses(params, "antisymmetric", nmax):
        ref = rec.mass
        for source, value in (("printed", rec.mass_paper_literal), ("derived", rec.mass)):
            err = abs(value - ref) / ref
            rows.append(DiscrepancyRow("antisymmetric-mass", source, rec.n, value, ref, err,
                                       "pass" if err <= 1e-12 else "fail"))
    return rows


def _limit_rows(params: PhysicsParams, ratios=(0.99, 0.01)) -> list[DiscrepancyRow]:
    rows = []
    for i, x in enumerate(ratios, start=1):
        rep = limit_diagnostics(params, params.v0 / x)
        item = "limit-transmission" if rep.claimed.startswith("T2") else "limit-reflection"
        err = abs(1.0 - rep.claimed_value)
        rows.append(DiscrepancyRow(item, "printed", i, 1.0, rep.claimed_value, err,
                                   "conflict" if rep.conflict else "consistent"))
    return rows


def discrepancy_report(v0: float = 50.0, scatter_v0: float = 1.0, grid_points: int = 2000,
                       hbar: float = 1.0, mass: float = 1.0, ell: float = 1.0) -> list[DiscrepancyRow]:
    bound = PhysicsParams(hbar, mass, ell, v0)
    scatter = PhysicsParams(hbar, mass, ell, scatter_v0)
    return _even_bound_rows(bound, grid_points) + _mass_rows(bound) + _limit_rows(scatter)


def summary(rows: list[DiscrepancyRow]) -> dict[str, bool]:
    """Booleans for the three findings the report is meant to establish."""
    def pick(item, source):
        return [r for r in rows if r.item == item and r.source == source]
    even_p, even_d = pick("even-bound-energy", "printed"), pick("even-bound-energy", "derived")
    masses = pick("antisymmetric-mass", "printed")
    near = [r for r in rows if r.item == "limit-transmission"]
    return {
        "printed_even_roots_fail_oracle": any(r.verdict == "fail" for r in even_p),
        "derived_even_roots_pass_oracle": bool(even_d) and all(r.verdict == "pass" for r in even_d),
        "printed_mass_factor_four": bool(masses) and all(
            abs(r.value / r.reference - 4.0) < 1e-12 for r in masses),
        "near_limit_conflicts": bool(near) and near[0].verdict == "conflict",
    }
