"""Quadrature, bracketed root isolation and symmetric eigenvalue solvers.

Everything here is deterministic: the summation order inside a rule is
fixed and bisection never depends on evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import NumericFailure, UsageError
from .quaternion import Quaternion, as_field

DEFAULT_NODES = 2001
TAN_POLE_HALFWIDTH = 1e-6

_EPS = np.finfo(float).eps


# -- quadrature ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuadratureRule:
    a: float
    b: float
    nodes: np.ndarray
    weights: np.ndarray
    degree: int = 3

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise UsageError("nodes and weights differ in length")
        if not self.a <= self.b:
            raise UsageError("rule interval must satisfy a <= b")

    def mapped(self, a: float, b: float) -> "QuadratureRule":
        """The same rule affinely transported to ``[a, b]``."""
        if self.a == a and self.b == b:
            return self
        scale = (b - a) / (self.b - self.a)
        nodes = a + (self.nodes - self.a) * scale
        nodes[0], nodes[-1] = a, b
        return QuadratureRule(a, b, nodes, self.weights * scale, self.degree)

    def __len__(self):
        return len(self.nodes)


def simpson_rule(a: float, b: float, n_nodes: int = DEFAULT_NODES) -> QuadratureRule:
    """Composite Simpson rule with ``n_nodes`` (odd, >= 3) equispaced nodes."""
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise UsageError("composite Simpson needs an odd node count >= 3")
    if not b > a:
        raise UsageError("need b > a")
    nodes = np.linspace(a, b, n_nodes)
    h = (b - a) / (n_nodes - 1)
    w = np.full(n_nodes, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return QuadratureRule(float(a), float(b), nodes, w * (h / 3.0), degree=3)


def integrate(f, rule: QuadratureRule) -> Quaternion:
    """``sum_i w_i f(x_i)`` taken componentwise on quaternion values.

    ``f`` is either a callable evaluated on the node array or an array of
    samples already taken at the nodes (real, complex or ``(N, 4)``).
    """
    values = f(rule.nodes) if callable(f) else f
    values = as_field(values)
    if values.shape[0] != len(rule):
        raise UsageError(f"expected {len(rule)} samples, got {values.shape[0]}")
    bad = ~np.all(np.isfinite(values), axis=-1)
    if bad.any():
        i = int(np.argmax(bad))
        raise NumericFailure(f"non-finite integrand at node {i} (x={rule.nodes[i]!r})")
    return Quaternion.from_array(rule.weights @ values)


# -- root isolation -------------------------------------------------------------

@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise UsageError("bracket needs lo < hi")
        if not self.f_lo * self.f_hi < 0:
            raise UsageError("bracket endpoints must have opposite signs")


def bisect(f: Callable[[float], float], bracket: RootBracket, tol: float,
           max_iter: int = 400, history: list | None = None) -> float:
    """Refine a sign-change bracket until ``hi - lo <= tol``.

    When ``history`` is a list, the best residual seen so far (over both
    endpoints and all midpoints) is appended after every step, so the
    history is non-increasing even when a midpoint replaces the better end.
    """
    lo, hi, flo, fhi = bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi
    best = min(abs(flo), abs(fhi))
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if not math.isfinite(fm):
            raise NumericFailure(f"non-finite value at x={mid!r} during bisection")
        if fm == 0.0:
            lo = hi = mid
            flo = fhi = 0.0
            if history is not None:
                history.append(0.0)
            break
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        if history is not None:
            best = min(best, abs(fm))
            history.append(best)
    if abs(flo) <= abs(fhi):
        return lo
    return hi


def bracketed_roots(f: Callable[[float], float], lo: float, hi: float,
                    scan_steps: int = 1000, tol: float = 1e-12,
                    poles: Iterable[float] = (),
                    pole_halfwidth: float = TAN_POLE_HALFWIDTH) -> list[float]:
    """Roots of ``f`` on ``[lo, hi]`` from a uniform sign-change scan.

    Each sign change is refined by bisection to width ``tol``.  Points
    within ``pole_halfwidth`` of a registered pole are skipped and no
    bracket is formed across a pole.  Tangential roots (no sign change)
    are not detected.  A sign change whose refined residual exceeds both
    bracket residuals is a singularity rather than a root and is dropped.
    Roots closer than ``10 * tol`` are reported once.
    """
    if not lo < hi:
        raise UsageError("need lo < hi")
    if scan_steps < 2:
        raise UsageError("scan_steps must be >= 2")
    if not tol > 0:
        raise UsageError("tol must be positive")

    poles = sorted(p for p in poles if lo - pole_halfwidth <= p <= hi + pole_halfwidth)
    pole_arr = np.asarray(poles, dtype=float)

    def guarded(x):
        return pole_arr.size and np.min(np.abs(x - pole_arr)) < pole_halfwidth

    def segment(x):
        return int(np.searchsorted(pole_arr, x)) if pole_arr.size else 0

    # window edges are always sampled; round-off must not drop them
    grid = {float(x) for x in np.linspace(lo, hi, scan_steps + 1) if not guarded(x)}
    for p in poles:
        grid.update(x for x in (p - pole_halfwidth, p + pole_halfwidth) if lo <= x <= hi)

    samples = []
    for x in sorted(grid):
        fx = f(x)
        if not math.isfinite(fx):
            raise NumericFailure(f"non-finite value at scan point x={x!r}")
        samples.append((x, fx, segment(x)))

    roots: list[float] = []
    for (x0, f0, s0), (x1, f1, s1) in zip(samples, samples[1:]):
        if s0 != s1:
            continue
        if f0 == 0.0:
            roots.append(float(x0))
            continue
        if f0 * f1 < 0:
            r = bisect(f, RootBracket(x0, x1, f0, f1), tol)
            if abs(f(r)) > max(abs(f0), abs(f1)):
                continue
            roots.append(float(r))
    if samples and samples[-1][1] == 0.0:
        roots.append(float(samples[-1][0]))

    merged: list[float] = []
    for r in sorted(roots):
        if merged and r - merged[-1] < 10 * tol:
            continue
        merged.append(r)
    return merged


# -- symmetric tridiagonal eigenvalues ---------------------------------------------

@dataclass(frozen=True, eq=False)
class SymTridiag:
    """Symmetric tridiagonal matrix, optionally with a corner coupling
    ``A[0, N-1] = A[N-1, 0] = corner`` (periodic/antiperiodic rings)."""
    diag: np.ndarray
    offdiag: np.ndarray
    corner: float | None = None

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)
        if d.ndim != 1 or d.size < 1:
            raise UsageError("diag must be a non-empty vector")
        if e.size != max(d.size - 1, 0):
            raise UsageError("offdiag must have length N-1")
        if self.corner is not None and d.size < 3:
            raise UsageError("corner coupling needs N >= 3")

    @property
    def n(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        if self.n > 1:
            a += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        if self.corner is not None:
            a[0, -1] += self.corner
            a[-1, 0] += self.corner
        return a

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        if self.n > 1:
            y[:-1] += self.offdiag * x[1:]
            y[1:] += self.offdiag * x[:-1]
        if self.corner is not None:
            y[0] += self.corner * x[-1]
            y[-1] += self.corner * x[0]
        return y

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros(self.n)
        if self.n > 1:
            ae = np.abs(self.offdiag)
            r[:-1] += ae
            r[1:] += ae
        if self.corner is not None:
            r[0] += abs(self.corner)
            r[-1] += abs(self.corner)
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))


def sturm_count(m: SymTridiag, shifts) -> np.ndarray:
    """Number of eigenvalues strictly below each shift (tridiagonal only)."""
    if m.corner is not None:
        raise UsageError("sturm_count needs a pure tridiagonal matrix")
    x = np.atleast_1d(np.asarray(shifts, dtype=float))
    d = m.diag.tolist()
    e2 = (m.offdiag ** 2).tolist()
    pivmin = float(np.finfo(float).tiny) * max(1.0, max(e2, default=0.0))
    out = np.empty(x.shape, dtype=int)
    for j, sigma in enumerate(x.tolist()):
        count = 0
        q = d[0] - sigma
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
        for di, ei in zip(d[1:], e2):
            q = (di - sigma) - ei / q
            if abs(q) < pivmin:
                q = -pivmin
            if q < 0:
                count += 1
        out[j] = count
    return out


def _ring_count(m: SymTridiag, shifts) -> np.ndarray:
    """Inertia count for a corner-coupled tridiagonal matrix.

    Symmetric elimination of rows 0..N-2 leaves fill only in the last
    column, so the pivots are tracked together with the coupling to the
    last row; Sylvester's law of inertia turns negative pivots into a count.
    """
    x = np.atleast_1d(np.asarray(shifts, dtype=float))
    d = m.diag.tolist()
    e = m.offdiag.tolist()
    c = float(m.corner)
    n = m.n
    pivmin = float(np.finfo(float).tiny / _EPS) * max(1.0, max(v * v for v in e), c * c)
    out = np.empty(x.shape, dtype=int)
    for j, sigma in enumerate(x.tolist()):
        count = 0
        piv = d[0] - sigma
        u = c
        s = d[n - 1] - sigma
        for i in range(n - 2):
            if abs(piv) < pivmin:
                piv = -pivmin
            if piv < 0:
                count += 1
            s -= u * u / piv
            nxt = (d[i + 1] - sigma) - e[i] * e[i] / piv
            w = e[n - 2] if i + 1 == n - 2 else 0.0
            u = w - e[i] * u / piv
            piv = nxt
        if abs(piv) < pivmin:
            piv = -pivmin
        if piv < 0:
            count += 1
        last = s - u * u / piv
        if not last >= 0:
            count += 1
        out[j] = count
    return out


def _bisect_eigenvalues(counter, lo: float, hi: float, count: int, tol: float) -> np.ndarray:
    k = np.arange(count)
    a = np.full(count, lo)
    b = np.full(count, hi)
    for _ in range(300):
        scale = max(abs(lo), abs(hi))
        if np.all(b - a <= max(tol, 4 * _EPS * scale)):
            break
        mid = 0.5 * (a + b)
        below = counter(mid) > k
        b = np.where(below, mid, b)
        a = np.where(below, a, mid)
    return 0.5 * (a + b)


def symtridiag_eigen(m: SymTridiag, count: int, tol: float = 1e-11) -> list[float]:
    """The ``count`` smallest eigenvalues, ascending, by Sturm bisection."""
    if m.corner is not None:
        raise UsageError("corner-coupled matrix: use periodic_tridiag_eigen")
    if not 1 <= count <= m.n:
        raise UsageError(f"count must lie in [1, {m.n}], got {count}")
    lo, hi = m.gershgorin()
    return [float(v) for v in
            _bisect_eigenvalues(lambda x: sturm_count(m, x), lo, hi, count, tol)]


def _thomas(sub: np.ndarray, diag: np.ndarray, sup: np.ndarray, rhs: np.ndarray,
            pivmin: float) -> np.ndarray:
    n = diag.size
    cp = [0.0] * n
    dp = [0.0] * n
    sub_l, diag_l, sup_l, rhs_l = sub.tolist(), diag.tolist(), sup.tolist(), rhs.tolist()
    piv = diag_l[0] if abs(diag_l[0]) >= pivmin else pivmin
    cp[0] = sup_l[0] / piv if n > 1 else 0.0
    dp[0] = rhs_l[0] / piv
    for i in range(1, n):
        piv = diag_l[i] - sub_l[i - 1] * cp[i - 1]
        if abs(piv) < pivmin:
            piv = pivmin
        if i < n - 1:
            cp[i] = sup_l[i] / piv
        dp[i] = (rhs_l[i] - sub_l[i - 1] * dp[i - 1]) / piv
    x = [0.0] * n
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return np.asarray(x)


def _ring_solve(m: SymTridiag, shift: float, rhs: np.ndarray) -> np.ndarray:
    """Solve ``(A - shift) y = rhs`` for a ring matrix via Sherman-Morrison."""
    b = m.diag - shift
    c = float(m.corner)
    e = m.offdiag
    pivmin = _EPS * max(1.0, float(np.max(np.abs(m.diag))), float(np.max(np.abs(e))))
    gam = -b[0] if b[0] != 0 else -1.0
    bb = b.copy()
    bb[0] -= gam
    bb[-1] -= c * c / gam
    u = np.zeros(m.n)
    u[0], u[-1] = gam, c
    y = _thomas(e, bb, e, rhs, pivmin)
    z = _thomas(e, bb, e, u, pivmin)
    vn = c / gam
    denom = 1.0 + z[0] + z[-1] * vn
    return y - ((y[0] + y[-1] * vn) / denom) * z


def periodic_tridiag_eigen(m: SymTridiag, count: int, tol: float = 1e-11) -> list[float]:
    """Smallest eigenvalues of a corner-coupled tridiagonal matrix.

    Inertia bisection isolates each level; inverse iteration followed by a
    Rayleigh quotient then removes the rounding noise of the elimination,
    which matters for resolving degenerate pairs.
    """
    if m.corner is None:
        return symtridiag_eigen(m, count, tol)
    if not 1 <= count <= m.n:
        raise UsageError(f"count must lie in [1, {m.n}], got {count}")
    lo, hi = m.gershgorin()
    coarse = _bisect_eigenvalues(lambda x: _ring_count(m, x), lo, hi, count, tol)
    scale = max(abs(lo), abs(hi), 1.0)
    rng = np.random.default_rng(12345)
    start = rng.standard_normal(m.n)
    out = []
    for lam in coarse:
        offset = 1e3 * _EPS * scale
        for _ in range(8):
            x = start.copy()
            ok = True
            for _ in range(3):
                x = _ring_solve(m, lam + offset, x)
                nrm = np.linalg.norm(x)
                if not (np.isfinite(nrm) and nrm > 0):
                    ok = False
                    break
                x /= nrm
            if ok:
                break
            offset *= 10.0
        else:
            raise NumericFailure(f"inverse iteration failed near {lam!r}")
        rq = float(x @ m.matvec(x))
        # keep the bisection value if polishing jumped to another level
        out.append(rq if abs(rq - lam) <= 1e-6 * scale else float(lam))
    return sorted(out)


# -- dense symmetric eigenvalues -----------------------------------------------------

MAX_DENSE_N = 1024


def dense_sym_eigen(matrix, count: int | None = None, tol: float = 1e-10,
                    max_sweeps: int = 60) -> list[float]:
    """Smallest eigenvalues of a real symmetric matrix by cyclic Jacobi.

    Rotations follow a round-robin ordering so that each step applies
    ``N/2`` disjoint rotations at once; a sweep visits every pair once.
    Iteration stops when the off-diagonal Frobenius norm drops below
    ``tol * ||A||_F``.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise UsageError("matrix must be square")
    n = a.shape[0]
    if n > MAX_DENSE_N:
        raise UsageError(f"dense Jacobi is capped at N={MAX_DENSE_N}")
    if count is None:
        count = n
    if not 1 <= count <= n:
        raise UsageError(f"count must lie in [1, {n}], got {count}")
    norm = float(np.linalg.norm(a))
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-12 * max(1.0, norm):
        raise UsageError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    if n == 1:
        return [float(a[0, 0])]

    m = n + (n % 2)
    if m != n:
        a = np.pad(a, ((0, 1), (0, 1)))

    def off_norm():
        return float(np.linalg.norm(a - np.diag(np.diag(a))))

    for _ in range(max_sweeps):
        if off_norm() <= tol * norm:
            break
        order = list(range(m))
        for _ in range(m - 1):
            p = np.array(order[: m // 2])
            q = np.array(order[m // 2:][::-1])
            app, aqq, apq = a[p, p], a[q, q], a[p, q]
            nz = apq != 0.0
            safe = np.where(nz, apq, 1.0)
            tau = np.where(nz, (aqq - app) / (2.0 * safe), 0.0)
            t = np.where(nz, np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau)), 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            rp, rq = a[p].copy(), a[q].copy()
            a[p] = c[:, None] * rp - s[:, None] * rq
            a[q] = s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
            order = [order[0], order[-1]] + order[1:-1]
    else:
        if off_norm() > tol * norm:
            raise NumericFailure("Jacobi sweeps did not converge")
    ev = np.sort(np.diag(a)[:n])
    return [float(v) for v in ev[:count]]
