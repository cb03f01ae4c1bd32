"""Command-line entry point: deterministic CSV/JSON tables.

Exit codes: 0 success, 1 usage error, 2 numeric failure (including an
empty root set where at least one root was requested).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import audit, fd_oracle, finite_well, infinite_well
from .errors import NumericFailure, UsageError
from .quaternion import field_norm2
from .wavefunction import PhysicsParams, eval_profile

FINITE_V0 = 50.0
SCATTER_V0 = 1.0


class NoRoots(NumericFailure):
    pass


def format_float(x: float) -> str:
    """Shortest decimal with at least 12 significant digits that round-trips."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    for p in range(12, 18):
        s = f"{x:#.{p}g}"
        if float(s) == x:
            return s
    return repr(x)


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    if v is None:
        return ""
    return str(v)


def _json_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v) if math.isfinite(v) else "null"
    return json.dumps(v)


def emit_table(header: Sequence[str], rows: Sequence[Sequence], fmt: str = "csv",
               schema: str = "", params: dict | None = None) -> bytes:
    """Serialize rows; output depends only on its arguments."""
    if fmt == "csv":
        lines = [",".join(header)] + [",".join(_cell(v) for v in row) for row in rows]
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "json":
        def obj(keys, values):
            return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}"
                                   for k, v in zip(keys, values)) + "}"
        params = params or {}
        row_txt = ",\n    ".join(obj(header, r) for r in rows)
        body = (f'{{\n  "schema": {json.dumps(schema)},\n'
                f'  "params": {obj(list(params), list(params.values()))},\n'
                f'  "rows": [' + (f"\n    {row_txt}\n  " if rows else "") + "]\n}\n")
        return body.encode("utf-8")
    raise UsageError(f"unknown format {fmt!r}")


# -- argument parsing --------------------------------------------------------------

def _positive(name):
    def conv(s):
        try:
            v = float(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number") from None
        if not (math.isfinite(v) and v > 0):
            raise argparse.ArgumentTypeError(f"{name} must be positive, got {s}")
        return v
    return conv


def _count(name, minimum=1):
    def conv(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be >= {minimum}, got {s}")
        return v
    return conv


def _finite(name):
    def conv(s):
        try:
            v = float(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number") from None
        if not math.isfinite(v):
            raise argparse.ArgumentTypeError(f"{name} must be finite")
        return v
    return conv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--hbar", type=_positive("hbar"), default=1.0, help="default 1")
    common.add_argument("--mass", type=_positive("mass"), default=1.0, help="default 1")
    common.add_argument("--ell", type=_positive("ell"), default=1.0, help="well width, default 1")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="write to a file instead of stdout")

    p = _Parser(prog="hqwell", description="Quaternic and complex square-well tables.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("infinite", parents=[common], help="infinite-well complex spectrum")
    s.add_argument("--bc", choices=("dirichlet", "symmetric", "antisymmetric"),
                   default="dirichlet")
    s.add_argument("--nmax", type=_count("nmax"), default=5)

    s = sub.add_parser("combined", parents=[common], help="combined quaternic states")
    s.add_argument("--n", type=_count("n"), default=1)
    s.add_argument("--p", type=_count("p"), default=2)
    s.add_argument("--theta", type=_finite("theta"), default=math.pi / 4,
                   help="mixing angle in [0, pi/2], default pi/4")
    s.add_argument("--nmax", type=_count("nmax"), default=1,
                   help="number of consecutive n values starting at --n")

    s = sub.add_parser("finite-bound", parents=[common], help="finite-well bound states")
    s.add_argument("--v0", type=float, default=FINITE_V0, help=f"default {FINITE_V0:g}")
    s.add_argument("--family", choices=("complex", "quaternic"), default="complex")
    s.add_argument("--quantization", choices=("derived", "paper"), default="derived")
    s.add_argument("--symmetry", choices=("symmetric", "antisymmetric"), default="symmetric")
    s.add_argument("--nmax", type=_count("nmax"), default=None)

    s = sub.add_parser("finite-scatter", parents=[common], help="finite-well scattering")
    s.add_argument("--v0", type=float, default=SCATTER_V0, help=f"default {SCATTER_V0:g}")
    s.add_argument("--family", choices=("quaternic", "complex"), default="quaternic")
    s.add_argument("--quantized", action="store_true",
                   help="list quantized quaternic energies in (v0, emax]")
    s.add_argument("--emin", type=_finite("emin"), default=None,
                   help="default v0 (1 + 1e-6)")
    s.add_argument("--emax", type=_finite("emax"), default=None, help="default 100 v0")
    s.add_argument("--samples", type=_count("samples", 2), default=1000)

    s = sub.add_parser("oracle", parents=[common], help="finite-difference cross-check")
    s.add_argument("--bc", choices=("dirichlet", "symmetric", "antisymmetric", "decay-padded"),
                   default="dirichlet")
    s.add_argument("--grid", type=_count("grid", fd_oracle.MIN_GRID), default=2000)
    s.add_argument("--nmax", type=_count("nmax"), default=5)
    s.add_argument("--v0", type=float, default=FINITE_V0, help="decay-padded only")

    s = sub.add_parser("density", parents=[common], help="probability density samples")
    s.add_argument("--family", choices=("complex", "quaternic", "combined", "finite-complex",
                                        "finite-quaternic"), default="complex")
    s.add_argument("--bc", choices=("dirichlet", "symmetric", "antisymmetric"),
                   default="dirichlet")
    s.add_argument("--symmetry", choices=("symmetric", "antisymmetric"), default="symmetric")
    s.add_argument("--n", type=_count("n", 0), default=1)
    s.add_argument("--p", type=_count("p"), default=2)
    s.add_argument("--theta", type=_finite("theta"), default=math.pi / 4)
    s.add_argument("--v0", type=float, default=FINITE_V0, help="finite families only")
    s.add_argument("--samples", type=_count("samples", 2), default=101)

    s = sub.add_parser("discrepancies", parents=[common], help="printed vs derived conditions")
    s.add_argument("--v0", type=float, default=FINITE_V0, help="bound-state well depth")
    s.add_argument("--grid", type=_count("grid", fd_oracle.MIN_GRID), default=2000)
    return p


def _params(a, v0: float = 0.0) -> PhysicsParams:
    return PhysicsParams(a.hbar, a.mass, a.ell, v0)


def _finite_params(a) -> PhysicsParams:
    if not (math.isfinite(a.v0) and a.v0 > 0):
        raise UsageError(f"--v0 must be positive, got {a.v0!r}")
    return _params(a, a.v0)


# -- subcommands ------------------------------------------------------------------------

def cmd_infinite(a):
    prm = _params(a)
    rows = [(e.n, e.k, e.energy, e.gap_ratio)
            for e in infinite_well.complex_spectrum(a.bc, prm, a.nmax)]
    return "spectrum", ("n", "k", "energy", "gap_ratio"), rows, prm


def cmd_combined(a):
    prm = _params(a)
    if not 0 <= a.theta <= math.pi / 2:
        raise UsageError("--theta must lie in [0, pi/2]")
    rule = infinite_well.well_rule(prm)
    rows = []
    for n in range(a.n, a.n + a.nmax):
        if n == a.p:
            continue
        st = infinite_well.combined_state(n, a.p, a.theta, prm)
        e = infinite_well.combined_energy(st, rule)
        gap = (infinite_well.combined_gap_ratio(n, a.p, a.theta, prm, rule)
               if n + 1 != a.p else math.nan)
        rows.append((n, a.p, a.theta, e, gap))
    return "combined", ("n", "p", "theta", "energy", "gap_ratio"), rows, prm


def cmd_finite_bound(a):
    prm = _finite_params(a)
    if a.family == "complex":
        recs = finite_well.bound_energies_complex(prm, a.quantization, a.nmax)
        header = ("n", "energy", "k", "kappa", "A", "B")
        rows = [(r.n, r.energy, r.k, r.kappa, r.A, r.B) for r in recs]
    else:
        recs = finite_well.quaternic_bound_masses(prm, a.symmetry, a.nmax or 3)
        header = ("n", "energy", "k", "kappa", "A", "B", "mass", "mass_printed")
        rows = [(r.n, r.energy, r.k, r.kappa, r.A, r.B, r.mass, r.mass_paper_literal)
                for r in recs]
    if not rows:
        raise NoRoots("no bound states found")
    return f"finite-bound-{a.family}", header, rows, prm


def cmd_finite_scatter(a):
    prm = _finite_params(a)
    v0 = prm.v0
    emin = v0 * (1 + 1e-6) if a.emin is None else a.emin
    emax = 100 * v0 if a.emax is None else a.emax
    if emin <= v0 and not a.quantized:
        raise UsageError("--emin must exceed v0")
    if emax <= v0 or (not a.quantized and emax < emin):
        raise UsageError("--emax must exceed v0 and --emin")
    if a.quantized:
        if a.family != "quaternic":
            raise UsageError("--quantized applies to the quaternic family only")
        energies = finite_well.quaternic_scatter_levels(prm, emax)
        if not energies:
            raise NoRoots(f"no quantized scattering level in ({v0:g}, {emax:g}]")
    else:
        energies = [float(e) for e in np.geomspace(emin, emax, a.samples)]
    if a.family == "quaternic":
        pts = [finite_well.quaternic_scatter_coeffs(e, prm) for e in energies]
        header = ("energy", "R2", "T2", "residual_f17", "residual_f18")
        rows = [(p.energy, p.R2, p.T2, p.residual_f17, p.residual_f18) for p in pts]
    else:
        pts = [finite_well.scatter_complex(e, prm) for e in energies]
        header = ("energy", "R2", "T2", "flux_residual")
        rows = [(p.energy, p.R2, p.T2, p.flux_residual) for p in pts]
    return f"finite-scatter-{a.family}", header, rows, prm


_RING = {"dirichlet": "dirichlet", "symmetric": "periodic", "antisymmetric": "antiperiodic"}


def cmd_oracle(a):
    if a.bc == "decay-padded":
        prm = _finite_params(a)
        cfg = fd_oracle.decay_padded_config(prm, a.grid)
        recs = finite_well.bound_energies_complex(prm)
        if not recs:
            raise NoRoots("no bound states to compare")
        analytic = [r.energy for r in recs][:a.nmax]
        oracle = fd_oracle.oracle_energies(cfg, min(a.grid, max(2 * len(analytic) + 2, 4)))
        cmp = fd_oracle.compare_spectra(analytic, oracle, audit.ORACLE_REL_TOL, "nearest")
    else:
        prm = _params(a)
        bc = fd_oracle.OracleBC.parse(_RING[a.bc])
        cfg = fd_oracle.OracleConfig(a.grid, (0.0, prm.ell), bc, None, prm)
        analytic = [e.energy for e in infinite_well.complex_spectrum(a.bc, prm, a.nmax)]
        if bc is fd_oracle.OracleBC.DIRICHLET:
            oracle = fd_oracle.oracle_energies(cfg, min(a.grid, a.nmax))
        else:
            zero = bc is fd_oracle.OracleBC.PERIODIC
            raw = fd_oracle.oracle_energies(cfg, min(a.grid, 2 * a.nmax + int(zero)))
            oracle = fd_oracle.paired_levels(raw, zero).levels
        cmp = fd_oracle.compare_spectra(analytic, oracle, 1e-4)
    rows = [(c.index + 1, c.analytic, c.oracle, c.rel_error, "pass" if c.passed else "fail")
            for c in cmp.levels]
    return "oracle", ("n", "analytic", "oracle", "rel_error", "verdict"), rows, prm


def cmd_density(a):
    fam = a.family
    if fam in ("finite-complex", "finite-quaternic"):
        prm = _finite_params(a)
        if a.n < 1:
            raise UsageError("--n must be >= 1 for finite-well states")
        if fam == "finite-complex":
            recs = finite_well.bound_energies_complex(prm)
            if len(recs) < a.n:
                raise NoRoots(f"only {len(recs)} bound states exist")
            prof = finite_well.bound_profile_complex(recs[a.n - 1], prm)
        else:
            rec = finite_well.quaternic_bound_masses(prm, a.symmetry, a.n)[-1]
            prof = finite_well.quaternic_bound_profile(rec, prm)
        x = np.linspace(-1.5 * prm.ell, 1.5 * prm.ell, a.samples)
    else:
        prm = _params(a)
        if fam == "complex":
            prof = infinite_well.complex_state(a.bc, a.n, prm).profile
        elif fam == "quaternic":
            prof = infinite_well.quaternic_basis_state(a.symmetry, a.n, params=prm).profile
        else:
            prof = infinite_well.combined_state(a.n, a.p, a.theta, prm).profile
        x = np.linspace(0.0, prm.ell, a.samples)
    dens = field_norm2(eval_profile(prof, x))
    rows = list(zip((float(v) for v in x), (float(d) for d in dens)))
    return f"density-{fam}", ("x", "density"), rows, prm


def cmd_discrepancies(a):
    prm = _finite_params(a)
    rows = audit.discrepancy_report(prm.v0, SCATTER_V0, a.grid, prm.hbar, prm.mass, prm.ell)
    table = [tuple(getattr(r, h) for h in audit.HEADER) for r in rows]
    return "discrepancies", audit.HEADER, table, prm


COMMANDS = {
    "infinite": cmd_infinite,
    "combined": cmd_combined,
    "finite-bound": cmd_finite_bound,
    "finite-scatter": cmd_finite_scatter,
    "oracle": cmd_oracle,
    "density": cmd_density,
    "discrepancies": cmd_discrepancies,
}


def run_command(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout.buffer
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        schema, header, rows, prm = COMMANDS[args.command](args)
        params = {"hbar": prm.hbar, "mass": prm.mass, "ell": prm.ell, "v0": prm.v0}
        data = emit_table(header, rows, args.format, schema, params)
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(data)
        else:
            stdout.write(data)
            stdout.flush()
    except UsageError as exc:
        print(f"hqwell: error: {exc}", file=stderr)
        return 1
    except (NumericFailure, ArithmeticError) as exc:
        print(f"hqwell: numeric failure: {exc}", file=stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run_command())
