"""Numerov integration of u'' = f(r) u, outward from the origin and inward from the tail.

On a ``log_uniform`` grid the march runs in x = ln r on v = u / sqrt(r), which
satisfies v'' = (r**2 f + 1/4) v on a uniform x mesh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import kernels
from .errors import DomainError, RmaxTooSmallError, UnsupportedChannelError
from .origin import (FALL_TO_CENTER, Channel, L2Only, U0Strict, admissible,
                     frobenius, indicial, series_start)
from .potentials import Harmonic, SumOf, Tabulated, evaluate, origin_coefficients

UNIFORM = "uniform"
LOG_UNIFORM = "log_uniform"


@dataclass(frozen=True)
class RadialGrid:
    scheme: str = LOG_UNIFORM
    r_min: float = 1e-6
    r_max: float = 80.0
    n: int = 20000

    def __post_init__(self):
        if self.scheme not in (UNIFORM, LOG_UNIFORM):
            raise DomainError(f"unknown grid scheme {self.scheme!r}")
        if not 0 < self.r_min < self.r_max:
            raise DomainError("grid needs 0 < r_min < r_max")
        if self.n < 64:
            raise DomainError(f"grid needs at least 64 points, got {self.n}")

    @property
    def is_log(self) -> bool:
        return self.scheme == LOG_UNIFORM

    @cached_property
    def t(self) -> np.ndarray:
        """Abscissae in the integration variable (r or ln r)."""
        if self.is_log:
            return np.linspace(math.log(self.r_min), math.log(self.r_max), self.n)
        return np.linspace(self.r_min, self.r_max, self.n)

    @cached_property
    def r(self) -> np.ndarray:
        r = np.exp(self.t) if self.is_log else self.t.copy()
        r[0], r[-1] = self.r_min, self.r_max
        return r

    @property
    def h(self) -> float:
        return (self.t[-1] - self.t[0]) / (self.n - 1)

    @cached_property
    def drdt(self) -> np.ndarray:
        return self.r if self.is_log else np.ones(self.n)


@dataclass
class RadialSolution:
    """u(r) on a grid plus matching diagnostics.

    ``u`` is zero outside the marched range of a partial solution.
    ``f`` holds u''/u along the grid at ``energy``.
    """

    grid: RadialGrid
    u: np.ndarray
    nodes: int
    match_index: int
    logderiv_left: float = math.nan
    logderiv_right: float = math.nan
    energy: float = math.nan
    f: Optional[np.ndarray] = field(default=None, repr=False)
    log_scale: float = 0.0


@dataclass(frozen=True)
class RadialProblem:
    channel: Channel
    potential: object
    mode: object = U0Strict()
    grid: RadialGrid = RadialGrid()

    def __post_init__(self):
        if isinstance(self.mode, U0Strict) and \
                self.report.classification == FALL_TO_CENTER:
            raise UnsupportedChannelError(
                "fall to the center: u(0)=0 does not fix an origin exponent")

    @cached_property
    def coeffs(self):
        return origin_coefficients(self.potential)

    @cached_property
    def report(self):
        return indicial(self.channel, self.coeffs)

    @cached_property
    def v_grid(self) -> np.ndarray:
        return evaluate(self.potential, self.grid.r)

    @cached_property
    def centrifugal(self) -> np.ndarray:
        l = self.channel.l
        return l * (l + 1) / self.grid.r**2

    @cached_property
    def v_eff(self) -> np.ndarray:
        return self.centrifugal / (2.0 * self.channel.mass) + self.v_grid

    @property
    def tail_kind(self) -> str:
        return tail_kind(self.potential)

    @property
    def threshold(self) -> float:
        """Upper end of the bound-state energy range."""
        if self.tail_kind == "confining":
            return float(self.v_grid[-1])
        return 0.0

    def with_mode(self, mode) -> "RadialProblem":
        return RadialProblem(self.channel, self.potential, mode, self.grid)

    def f_grid(self, E: float) -> np.ndarray:
        return self.centrifugal + 2.0 * self.channel.mass * (self.v_grid - E)

    def q_grid(self, E: float) -> np.ndarray:
        """Numerov coefficient in the integration variable."""
        f = self.f_grid(E)
        if self.grid.is_log:
            return self.grid.r**2 * f + 0.25
        return f


def tail_kind(potential) -> str:
    if isinstance(potential, Harmonic):
        return "confining"
    if isinstance(potential, Tabulated):
        return potential.tail_fit
    if isinstance(potential, SumOf):
        kinds = [tail_kind(t) for t in potential.terms]
        return "confining" if "confining" in kinds else "decaying"
    return "decaying"


def effective_f(problem: RadialProblem, E: float, r):
    """f(r) = l(l+1)/r**2 + 2m(V(r) - E), so that u'' = f u."""
    l, m = problem.channel.l, problem.channel.mass
    r = np.asarray(r, dtype=float)
    out = l * (l + 1) / r**2 + 2.0 * m * (evaluate(problem.potential, r) - E)
    return float(out) if out.ndim == 0 else out


def count_nodes(u, rel_tol: float = 1e-14) -> int:
    """Strict sign changes between consecutive nonzero samples.

    Samples with ``|u| < rel_tol * max|u|`` count as zero touches.
    """
    u = np.asarray(u, dtype=float)
    if u.size == 0:
        return 0
    peak = np.max(np.abs(u))
    if peak == 0:
        return 0
    s = np.sign(np.where(np.abs(u) < rel_tol * peak, 0.0, u))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def match_index(problem: RadialProblem, E: float) -> int:
    """Outermost classical turning point, kept 8 points clear of the grid ends.

    Without a turning point (a state below the whole effective potential,
    only possible with an irregular origin admixture) the decay length
    1/kappa of the threshold tail is used instead, under the same clamp.
    """
    n = problem.grid.n
    lo, hi = 8, n - 9
    allowed = np.nonzero(problem.f_grid(E) <= 0)[0]
    if allowed.size:
        i = int(allowed[-1])
    else:
        depth = max(problem.threshold - E, 1e-300)
        r_decay = 1.0 / math.sqrt(2.0 * problem.channel.mass * depth)
        i = int(np.searchsorted(problem.grid.r, r_decay))
    return int(min(max(i, lo), hi))


def _to_w(grid, i, u):
    return u / math.sqrt(grid.r[i]) if grid.is_log else u


def _from_w(grid, w):
    return w * np.sqrt(grid.r) if grid.is_log else w


def _series_mode(problem: RadialProblem):
    mode = problem.mode
    report = problem.report
    if isinstance(mode, L2Only) and report.s_minus is not None and \
            report.s_minus not in admissible(report, mode):
        return U0Strict()
    return mode


# The origin series solves the truncated potential c2/r**2 + c1/r + c0. It is
# trusted while r**2 |2m(V - truncated)| stays below this fraction of the
# regular-to-irregular ratio, and while the recursion converges comfortably
# (|p1| r + |p0| r**2 <= 1).
SERIES_SMALLNESS = 1e-7
# L2Only starts once the regular branch is this large relative to the
# irregular one; earlier, rounding errors swamp it.
REGULAR_VISIBILITY = 1e-3


def _start_index(problem: RadialProblem, E: float, mode, stop: int) -> int:
    if isinstance(mode, U0Strict) or mode.theta == 0:
        return 0
    grid, report = problem.grid, problem.report
    r = grid.r
    m = problem.channel.mass
    c = problem.coeffs
    gap = report.s_plus - report.s_minus
    visibility = np.minimum(1.0, (r / mode.r0) ** gap / abs(mode.theta))
    rest = r**2 * np.abs(2.0 * m * (problem.v_grid - c(r)))
    p1, p0 = abs(2.0 * m * c.c1), abs(2.0 * m * (c.c0 - E))
    untrusted = (rest > SERIES_SMALLNESS * visibility) | (p1 * r + p0 * r**2 > 1.0)
    trusted = np.nonzero(untrusted)[0]
    i_cap = int(trusted[0]) - 1 if trusted.size else grid.n - 1
    r_vis = mode.r0 * (REGULAR_VISIBILITY * abs(mode.theta)) ** (1.0 / gap)
    i_vis = int(np.searchsorted(r, r_vis))
    return max(0, min(i_vis, i_cap, stop - 3))


def _outward_prefix(problem: RadialProblem, E: float, stop: int):
    """Start index i and series values u[0..i+1] for an outward march to ``stop``."""
    mode = _series_mode(problem)
    i = _start_index(problem, E, mode, stop)
    r = problem.grid.r
    if i == 0:
        a, b = series_start(problem.report, problem.coeffs, problem.channel, E,
                            mode, r[0], r[1], order=None)
        return 0, np.array([a, b])
    report, coeffs, ch = problem.report, problem.coeffs, problem.channel
    rr = r[:i + 2]
    reg = frobenius(report, coeffs, ch, E, "plus", rr)
    irr = frobenius(report, coeffs, ch, E, "minus", rr)
    return i, reg - mode.theta * mode.r0 ** (report.s_plus - report.s_minus) * irr


def _start_values(problem: RadialProblem, E: float):
    """Series values at the first two grid points."""
    mode = _series_mode(problem)
    r = problem.grid.r
    return series_start(problem.report, problem.coeffs, problem.channel, E,
                        mode, r[0], r[1], order=None)


# h**2 q / 12 must stay below 1 or the recurrence flips sign every step;
# the cap only bites deep in forbidden regions where q > 0 anyway.
Q_CAP = 6.0


def _march(problem, E, a, b, start, stop):
    grid = problem.grid
    d = 1 if stop > start else -1
    q = np.minimum(problem.q_grid(E), Q_CAP / grid.h**2)
    w, log_scale, nodes = kernels.numerov(
        np.ascontiguousarray(q), grid.h,
        _to_w(grid, start, a), _to_w(grid, start + d, b), start, stop)
    return _from_w(grid, w), log_scale, nodes


def march_outward(problem: RadialProblem, E: float, stop: int):
    """Outward solution on [0, stop] from the origin series: (u, log_scale, nodes)."""
    i, prefix = _outward_prefix(problem, E, stop)
    u, log_scale, nodes = _march(problem, E, prefix[i], prefix[i + 1], i, stop)
    if i:
        u[:i] = prefix[:i] * math.exp(-log_scale)
        nodes += count_nodes(prefix[:i + 1], rel_tol=0.0)
    return u, log_scale, nodes


def logderiv_left(grid: RadialGrid, u, m: int) -> float:
    """d ln u / dr at index m from the three samples m-2..m."""
    du = (3.0 * u[m] - 4.0 * u[m - 1] + u[m - 2]) / (2.0 * grid.h)
    return du / (u[m] * grid.drdt[m])


def logderiv_right(grid: RadialGrid, u, m: int) -> float:
    """d ln u / dr at index m from the three samples m..m+2."""
    du = (-3.0 * u[m] + 4.0 * u[m + 1] - u[m + 2]) / (2.0 * grid.h)
    return du / (u[m] * grid.drdt[m])


def numerov_outward(problem: RadialProblem, E: float, start=None,
                    stop: Optional[int] = None) -> RadialSolution:
    """Integrate from the origin series up to ``stop`` (default: matching index).

    ``start`` overrides the series start values ``(u(r0), u(r1))``.
    """
    m = match_index(problem, E) if stop is None else stop
    if start is None:
        u, log_scale, nodes = march_outward(problem, E, m)
    else:
        a, b = start
        if a == 0 and b == 0:
            raise DomainError("both start values are zero")
        u, log_scale, nodes = _march(problem, E, a, b, 0, m)
    ld = logderiv_left(problem.grid, u, m) if m >= 2 else math.nan
    return RadialSolution(problem.grid, u, nodes, m, logderiv_left=ld, energy=E,
                          log_scale=log_scale)


def numerov_inward(problem: RadialProblem, E: float, tail=None,
                   stop: Optional[int] = None) -> RadialSolution:
    """Integrate from r_max down to ``stop`` (default: matching index)."""
    grid = problem.grid
    if tail is None:
        tail = tail_start(problem.potential, problem.channel, E,
                          grid.r[-1], grid.r[-2])
    a, b = tail
    if a == 0 and b == 0:
        raise DomainError("both tail values are zero")
    m = match_index(problem, E) if stop is None else stop
    u, log_scale, nodes = _march(problem, E, a, b, grid.n - 1, m)
    ld = logderiv_right(grid, u, m) if m <= grid.n - 3 else math.nan
    return RadialSolution(grid, u, nodes, m, logderiv_right=ld, energy=E,
                          log_scale=log_scale)


def _suggest_r_max(potential, E, r_max):
    r = r_max
    for _ in range(60):
        r *= 2.0
        if evaluate(potential, r) > E:
            return 2.0 * r
    return None


def tail_start(potential, channel: Channel, E: float, r_max: float,
               r_prev: float) -> tuple[float, float]:
    """Decaying start (u(r_max), u(r_prev)) from the local WKB exponent at r_max."""
    v_max = evaluate(potential, r_max)
    if not E < v_max:
        suggestion = _suggest_r_max(potential, E, r_max)
        hint = (f"; try r_max >= {suggestion:.6g}" if suggestion
                else "; energy is above the asymptotic threshold")
        raise RmaxTooSmallError(
            f"E={E:.12g} is not below V(r_max)={v_max:.12g}{hint}", suggestion)
    kappa = math.sqrt(2.0 * channel.mass * (v_max - E))
    return 1.0, math.exp(kappa * (r_max - r_prev))
