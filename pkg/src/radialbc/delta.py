"""Weak-form check of the radial reduction against the 3-D Laplacian.

For psi = u(r)/r and a spherically symmetric test function phi, the 3-D
weak Laplacian minus the naive radial reduction is

    D = 4 pi [ int u (r phi)'' dr - int u'' r phi dr ] = -4 pi u(0) phi(0),

exactly, for every test function. The defect therefore vanishes iff u(0) = 0.
The test functions here are Gaussians phi_w(r) = exp(-r**2 / (2 w**2)).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad, simpson

from .errors import DomainError, ExtrapolationError, PrecisionError
from .integrator import RadialSolution

FOUR_PI = 4.0 * math.pi
# phi_w < 1e-17 beyond this many widths
CUT_WIDTHS = 9.0


def gaussian(r, w):
    return np.exp(-0.5 * (np.asarray(r) / w) ** 2)


def r_phi_dd(r, w):
    """(r phi_w)'' for the Gaussian test function."""
    x2 = (np.asarray(r) / w) ** 2
    return gaussian(r, w) * np.asarray(r) / w**2 * (x2 - 3.0)


def r_phi_d(r, w):
    """(r phi_w)'."""
    return gaussian(r, w) * (1.0 - (np.asarray(r) / w) ** 2)


@dataclass(frozen=True)
class TrialFunction:
    """Analytic pair (u, u'') with its origin value u0."""

    u: Callable
    upp: Callable
    u0: float
    name: str = "trial"

    def __add__(self, other):
        return combine([self, other], [1.0, 1.0])

    def scaled(self, a):
        return combine([self], [a])


def combine(trials, coeffs) -> TrialFunction:
    """Linear combination sum(c_i * trial_i)."""
    trials, coeffs = list(trials), [float(c) for c in coeffs]
    return TrialFunction(
        lambda r: sum(c * t.u(r) for c, t in zip(coeffs, trials)),
        lambda r: sum(c * t.upp(r) for c, t in zip(coeffs, trials)),
        sum(c * t.u0 for c, t in zip(coeffs, trials)),
        "+".join(t.name for t in trials))


BUILTIN_TRIALS = {
    "exp": TrialFunction(lambda r: np.exp(-r), lambda r: np.exp(-r), 1.0, "exp"),
    "rexp": TrialFunction(lambda r: r * np.exp(-r),
                          lambda r: (r - 2.0) * np.exp(-r), 0.0, "rexp"),
    "poly-exp": TrialFunction(lambda r: (1.0 + 2.0 * r) * np.exp(-r),
                              lambda r: (2.0 * r - 3.0) * np.exp(-r), 1.0,
                              "poly-exp"),
    # R ~ 1/r, the irregular l = 0 solution of the free equation
    "const": TrialFunction(lambda r: np.ones_like(np.asarray(r, dtype=float)),
                           lambda r: np.zeros_like(np.asarray(r, dtype=float)),
                           1.0, "const"),
}


@dataclass
class DeltaResidualReport:
    widths: list
    defects: list
    reference: float
    max_abs_error: float


def weak_defect(trial: TrialFunction, w: float) -> float:
    """D(w) by adaptive quadrature; raises PrecisionError if not converged."""
    if not w > 0:
        raise DomainError(f"test-function width must be positive, got {w!r}")

    def integrand(r):
        return trial.u(r) * r_phi_dd(r, w) - trial.upp(r) * r * gaussian(r, w)

    r_cut = CUT_WIDTHS * w
    with warnings.catch_warnings():
        # the error estimate below is the arbiter, not scipy's roundoff warning
        warnings.simplefilter("ignore")
        value, err = quad(integrand, 0.0, r_cut, epsabs=1e-14, epsrel=1e-13,
                          limit=500, points=[w])
    reference = -FOUR_PI * trial.u0
    allowed = 1e-8 * (1.0 + abs(reference)) if math.isfinite(reference) else 1e-8
    if not (math.isfinite(value) and FOUR_PI * err <= allowed):
        raise PrecisionError(f"quadrature error estimate {FOUR_PI * err:.3g} "
                             f"too large at w={w}")
    return FOUR_PI * value


def delta_report(trial: TrialFunction, widths) -> DeltaResidualReport:
    widths = [float(w) for w in widths]
    if len(set(widths)) != len(widths) or any(w <= 0 for w in widths):
        raise DomainError("widths must be positive and distinct")
    defects = [weak_defect(trial, w) for w in widths]
    reference = -FOUR_PI * trial.u0
    return DeltaResidualReport(widths, defects, reference,
                               max(abs(d - reference) for d in defects))


def linearity_probe(u_pair, w: float) -> tuple[float, float]:
    """Defects of both trials in ``u_pair`` at width ``w``."""
    first, second = u_pair
    return weak_defect(first, w), weak_defect(second, w)


@dataclass(frozen=True)
class OriginFit:
    """u ~ c r**s on the innermost decade, mapped to u(0)."""

    c: float
    s: float
    status: str  # "vanishing", "finite" or "divergent"
    r_ref: float = 1.0

    @property
    def u0(self) -> float:
        if self.status == "vanishing":
            return 0.0
        if self.status == "finite":
            # the fit evaluated where the data end; c alone is the value at r = 1
            return self.c * self.r_ref**self.s
        return math.copysign(math.inf, self.c)


def extrapolate_u0(r, u, slope_tol: float = 0.05, fit_tol: float = 1e-3) -> OriginFit:
    """Fit the innermost decade of samples to c r**s."""
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    sel = r <= 10.0 * r[0]
    if np.count_nonzero(sel) < 3:
        sel = np.zeros_like(sel)
        sel[:3] = True
    rs, us = r[sel], u[sel]
    if np.any(us == 0) or not (np.all(us > 0) or np.all(us < 0)):
        raise ExtrapolationError("innermost samples change sign or vanish; "
                                 "no power law fits")
    x, y = np.log(rs), np.log(np.abs(us))
    s, lnc = np.polyfit(x, y, 1)
    resid = np.max(np.abs(y - (s * x + lnc)))
    if resid > fit_tol:
        raise ExtrapolationError(f"innermost behaviour is not a power law "
                                 f"(log residual {resid:.3g})")
    c = math.copysign(math.exp(lnc), us[0])
    if s > slope_tol:
        status = "vanishing"
    elif s >= -slope_tol:
        status = "finite"
    else:
        status = "divergent"
    return OriginFit(c, float(s), status, float(r[0]))


def sampled_defect(solution: RadialSolution, w: float, fit: Optional[OriginFit] = None):
    """D(w) for a sampled solution, u'' = f u along the grid.

    The grid part is composite Simpson in the integration variable with a
    Richardson (h vs 2h) error check. The piece [0, r_min] is done by parts:
    boundary terms at r_min from the samples, the r = 0 term from the fitted
    u0. Returns ``(D, error_estimate)``; D is infinite when the fit diverges.
    """
    grid = solution.grid
    if solution.f is None:
        raise DomainError("solution carries no f(r) samples")
    if fit is None:
        fit = extrapolate_u0(grid.r, solution.u)
    if fit.status == "divergent":
        # int u'' r phi ~ c s(s-1) int r**(s-1) dr diverges at 0
        return math.copysign(math.inf, -fit.c * fit.s * (fit.s - 1.0)), math.inf

    r = grid.r
    stop = int(np.searchsorted(r, CUT_WIDTHS * w))
    stop = min(max(stop, 8), grid.n - 1)
    if (stop % 2) == 1:
        stop = min(stop + 1, grid.n - 1)
    sl = slice(0, stop + 1)
    rr, u = r[sl], solution.u[sl]
    g = (u * r_phi_dd(rr, w) - solution.f[sl] * u * rr * gaussian(rr, w)) \
        * grid.drdt[sl]
    t = grid.t[sl]
    fine = simpson(g, x=t)
    coarse = simpson(g[::2], x=t[::2])
    err = abs(fine - coarse) / 15.0

    r0 = r[0]
    du0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * grid.h * grid.drdt[0])
    cap = u[0] * r_phi_d(r0, w) - du0 * r0 * gaussian(r0, w) - fit.u0
    return FOUR_PI * (fine + cap), FOUR_PI * err


@dataclass(frozen=True)
class Verdict:
    compatible: bool
    defect: float
    u0: float
    origin_slope: float
    width: float
    status: str

    @property
    def finite_defect(self):
        return self.defect if math.isfinite(self.defect) else None


def check_compatibility(solution: RadialSolution, tol: float = 1e-6,
                        w: Optional[float] = None) -> Verdict:
    """Compatible iff |D(w*)| <= tol, with w* the median grid radius by default."""
    if w is None:
        w = float(np.median(solution.grid.r))
    fit = extrapolate_u0(solution.grid.r, solution.u)
    defect, err = sampled_defect(solution, w, fit)
    if math.isfinite(defect) and err > 1e-8 * (1.0 + abs(defect)):
        raise PrecisionError(f"grid quadrature error estimate {err:.3g} too large")
    return Verdict(bool(abs(defect) <= tol), defect, fit.u0, fit.s, w, fit.status)
