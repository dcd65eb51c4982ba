"""Bound states by node-count bracketing and log-derivative matching."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import (ConvergenceError, ModeUnavailableError, NoSuchStateError,
                     RmaxTooSmallError)
from .integrator import (RadialProblem, RadialSolution, _march, _suggest_r_max,
                         count_nodes, march_outward, logderiv_left, logderiv_right,
                         match_index, tail_start)
from .origin import CRITICAL, FALL_TO_CENTER, L2Only, U0Strict, origin_log_slope

TOL_E = 1e-10
MISMATCH_TOL = 1e-8
MAX_ITER = 200


@dataclass
class EigenvalueResult:
    E: float
    n_radial: int
    mode: object
    mismatch_residual: float
    iterations: int
    solution: RadialSolution

    @property
    def origin_slope(self) -> float:
        return origin_log_slope(self.solution.grid.r, self.solution.u)


def outward_nodes(problem: RadialProblem, E: float) -> int:
    """Nodes of the outward solution over the whole grid (Dirichlet count at r_max)."""
    return march_outward(problem, E, problem.grid.n - 1)[2]


def _halves(problem, E, m):
    grid = problem.grid
    left, _, _ = march_outward(problem, E, m)
    ta, tb = tail_start(problem.potential, problem.channel, E, grid.r[-1], grid.r[-2])
    right, _, _ = _march(problem, E, ta, tb, grid.n - 1, m)
    return left, right


def _mismatch_at(problem, E, m):
    grid = problem.grid
    left, right = _halves(problem, E, m)
    ll = logderiv_left(grid, left, m)
    lr = logderiv_right(grid, right, m)
    return (ll - lr) / (abs(ll) + abs(lr) + 1.0 / grid.r[m])


def mismatch(problem: RadialProblem, E: float) -> float:
    """Normalised log-derivative mismatch at the matching point, in [-1, 1]."""
    return _mismatch_at(problem, E, match_index(problem, E))


def _lower_bound(problem, n):
    threshold = problem.threshold
    e_lo = float(np.min(problem.v_eff))
    strict = isinstance(problem.mode, U0Strict) or problem.mode.theta == 0
    if e_lo >= threshold:
        if strict:
            raise NoSuchStateError("no bound state: the effective potential has "
                                   "no well below the threshold")
        e_lo = threshold - 1.0
    elif strict:
        # Sturm comparison: no nodes below the effective potential minimum
        return e_lo
    # an irregular admixture can bind below min V_eff; walk down until clear
    for _ in range(400):
        if outward_nodes(problem, e_lo) <= n:
            return e_lo
        e_lo = threshold - 2.0 * (threshold - e_lo)
    raise ConvergenceError("could not find a lower energy bound", (e_lo, threshold))


def bracket_state(problem: RadialProblem, n: int) -> tuple[float, float]:
    """Energies with outward node counts <= n and >= n + 1."""
    if n < 0:
        raise ValueError("n must be non-negative")
    e_lo = _lower_bound(problem, n)
    e_hi = problem.threshold
    if outward_nodes(problem, e_hi) < n + 1:
        raise NoSuchStateError(f"no bound state with {n} nodes below the "
                               f"threshold {e_hi:.6g}")
    return e_lo, e_hi


def _assemble(problem, E, m):
    grid = problem.grid
    left, right = _halves(problem, E, m)
    u = np.concatenate([left[:m], right[m:] * (left[m] / right[m])])
    norm = math.sqrt(np.trapezoid(u * u, grid.r))
    u /= norm
    if u[np.argmax(np.abs(u))] < 0:
        u = -u
    return RadialSolution(grid, u, count_nodes(u), m,
                          logderiv_left=logderiv_left(grid, u, m),
                          logderiv_right=logderiv_right(grid, u, m),
                          energy=E, f=problem.f_grid(E))


def solve_state(problem: RadialProblem, n: int, tol_E: float = TOL_E,
                max_iter: int = MAX_ITER,
                mismatch_tol: float = MISMATCH_TOL) -> EigenvalueResult:
    """Bound state with ``n`` radial nodes.

    Bisection on the outward node count isolates a sign change of the
    mismatch, which Brent's method then refines to ``tol_E``.
    """
    lo, hi = bracket_state(problem, n)
    c_lo, c_hi = outward_nodes(problem, lo), outward_nodes(problem, hi)
    v_rmax = float(problem.v_grid[-1])
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        if c_lo == n and c_hi == n + 1 and lo >= v_rmax:
            r_max = problem.grid.r_max
            hint = _suggest_r_max(problem.potential, lo, r_max)
            raise RmaxTooSmallError(
                f"state n={n} lies above V(r_max)={v_rmax:.6g}; no decaying tail "
                f"to match" + (f", try r_max >= {hint:.6g}" if hint else ""), hint)
        if c_lo == n and c_hi == n + 1 and hi < v_rmax:
            width = hi - lo
            a, b = lo - width, hi
            m = match_index(problem, 0.5 * (lo + hi))
            d_a, d_b = _mismatch_at(problem, a, m), _mismatch_at(problem, b, m)
            if d_a * d_b < 0:
                root, info = brentq(lambda e: _mismatch_at(problem, e, m), a, b,
                                    xtol=tol_E, rtol=4 * np.finfo(float).eps,
                                    maxiter=max_iter, full_output=True,
                                    disp=False)
                iterations += info.iterations
                residual = abs(_mismatch_at(problem, root, m))
                if info.converged and residual <= mismatch_tol:
                    sol = _assemble(problem, root, m)
                    if sol.nodes == n:
                        return EigenvalueResult(root, n, problem.mode, residual,
                                                iterations, sol)
        if hi - lo <= tol_E:
            break
        mid = 0.5 * (lo + hi)
        c = outward_nodes(problem, mid)
        if c <= n:
            lo, c_lo = mid, c
        else:
            hi, c_hi = mid, c
    raise ConvergenceError(f"state n={n} did not converge in {max_iter} iterations "
                           f"(bracket [{lo:.15g}, {hi:.15g}])", (lo, hi))


def spectrum(problem: RadialProblem, n_max: int, tol_E: float = TOL_E) -> list:
    """States n = 0..n_max; stops at the first missing state."""
    out = []
    for n in range(n_max + 1):
        try:
            out.append(solve_state(problem, n, tol_E))
        except NoSuchStateError:
            break
    return out


def sae_scan(problem: RadialProblem, theta_list, n_max: int,
             tol_E: float = TOL_E) -> list:
    """Spectra under L2Only boundary data for each theta: ``[(theta, [results])]``."""
    report = problem.report
    if report.classification in (FALL_TO_CENTER, CRITICAL) or \
            report.s_minus <= -0.5:
        raise ModeUnavailableError(
            f"channel ({report.classification}) admits no square-integrable "
            f"second solution")
    r0 = problem.mode.r0 if isinstance(problem.mode, L2Only) else 1.0
    table = []
    for theta in theta_list:
        p = problem.with_mode(L2Only(float(theta), r0))
        table.append((float(theta), spectrum(p, n_max, tol_E)))
    return table
