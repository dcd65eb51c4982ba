"""Indicial analysis of the radial equation at r = 0 and series start values.

Near the origin u'' = [lambda_eff / r**2 + ...] u with
``lambda_eff = l(l+1) + 2 m c2``, so u ~ r**s with s(s-1) = lambda_eff.
Under the strict boundary condition u(0) = 0 only the ``s_plus`` branch is
kept; the square-integrability-only mode admixes ``s_minus`` with a mixing
parameter ``theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import (DomainError, ModeUnavailableError, NonNormalizableError,
                     UnsupportedChannelError)
from .potentials import OriginCoefficients

STANDARD = "standard"
LIMIT_CIRCLE_WINDOW = "limit_circle_window"
CRITICAL = "critical"
FALL_TO_CENTER = "fall_to_center"

_CRITICAL_TOL = 1e-13


@dataclass(frozen=True)
class Channel:
    l: int = 0
    mass: float = 1.0

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 0:
            raise DomainError(f"l must be a non-negative integer, got {self.l!r}")
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass!r}")


@dataclass(frozen=True)
class U0Strict:
    """u(0) = 0: keep only the regular branch."""

    name = "u0"


@dataclass(frozen=True)
class L2Only:
    """Square integrability only; theta mixes in the irregular branch at scale r0."""

    theta: float = 0.0
    r0: float = 1.0
    name = "l2"

    def __post_init__(self):
        if not self.r0 > 0:
            raise DomainError(f"L2Only.r0 must be positive, got {self.r0!r}")


BoundaryMode = Union[U0Strict, L2Only]


@dataclass(frozen=True)
class IndicialReport:
    lambda_eff: float
    discriminant: float
    classification: str
    s_plus: Optional[float] = None
    s_minus: Optional[float] = None
    real_part: Optional[float] = None
    imag_part: Optional[float] = None
    ambiguity: bool = False

    @property
    def nu(self):
        """Half the exponent gap, sqrt(discriminant)."""
        return None if self.s_plus is None else 0.5 * (self.s_plus - self.s_minus)


def indicial(channel: Channel, coeffs: OriginCoefficients) -> IndicialReport:
    lam = channel.l * (channel.l + 1) + 2.0 * channel.mass * coeffs.c2
    disc = 0.25 + lam
    if abs(disc) <= _CRITICAL_TOL * max(1.0, abs(lam)):
        return IndicialReport(lam, 0.0, CRITICAL, 0.5, 0.5)
    if disc < 0:
        return IndicialReport(lam, disc, FALL_TO_CENTER, real_part=0.5,
                              imag_part=math.sqrt(-disc))
    root = math.sqrt(disc)
    # 1 - s_plus is exact for s_plus >= 1/2, so s_plus + s_minus == 1 holds exactly
    s_plus = 0.5 + root
    s_minus = 1.0 - s_plus
    if s_minus > 0:
        return IndicialReport(lam, disc, LIMIT_CIRCLE_WINDOW, s_plus, s_minus,
                              ambiguity=True)
    return IndicialReport(lam, disc, STANDARD, s_plus, s_minus)


def admissible(report: IndicialReport, mode: BoundaryMode) -> frozenset:
    """Origin exponents a mode accepts.

    The strict mode always returns ``{s_plus}``, also in the limit-circle
    window where ``s_minus`` vanishes at 0 too (``report.ambiguity`` is set).
    """
    if report.classification == FALL_TO_CENTER:
        raise UnsupportedChannelError("fall to the center: no real exponents")
    if isinstance(mode, U0Strict):
        return frozenset({report.s_plus})
    if report.s_minus > -0.5:
        return frozenset({report.s_plus, report.s_minus})
    return frozenset({report.s_plus})


def _log_case(report: IndicialReport) -> bool:
    gap = report.s_plus - report.s_minus
    return abs(gap - round(gap)) < 1e-12 and round(gap) >= 1


def frobenius(report: IndicialReport, coeffs: OriginCoefficients,
              channel: Channel, E: float, branch: str, r, order=None):
    """One origin branch r**s (1 + a1 r + a2 r**2 + ...) of the radial equation
    for the truncated potential c2/r**2 + c1/r + c0.

    ``order=None`` keeps adding terms until they drop below 1e-17 (at most
    40); the irregular branch always stops before a resonant (logarithmic)
    order.
    """
    s = report.s_plus if branch == "plus" else report.s_minus
    r = np.asarray(r, dtype=float)
    p1 = 2.0 * channel.mass * coeffs.c1
    p0 = 2.0 * channel.mass * (coeffs.c0 - E)
    max_order = 40 if order is None else order
    total = np.ones_like(r)
    a_prev2, a_prev, rk = 0.0, 1.0, np.ones_like(r)
    small_before = False
    for k in range(1, max_order + 1):
        denom = k * (k + 2.0 * s - 1.0)
        if abs(denom) < 1e-12:
            break
        a_k = (p1 * a_prev + p0 * a_prev2) / denom
        rk = rk * r
        term = a_k * rk
        total = total + term
        # the recursion is two-term, so one vanishing term is not convergence
        small = bool(np.all(np.abs(term) <= 1e-17 * np.abs(total)))
        if order is None and small and small_before:
            break
        small_before = small
        a_prev2, a_prev = a_prev, a_k
    out = r**s * total
    return float(out) if out.ndim == 0 else out


def start_error_bound(report, coeffs, channel, E, r1) -> float:
    """Relative size of the first omitted term of the one-correction series at ``r1``."""
    s = report.s_plus
    m = channel.mass
    a1 = m * coeffs.c1 / s
    a2 = 2.0 * m * (coeffs.c1 * a1 + (coeffs.c0 - E)) / (4.0 * s + 2.0)
    return abs(a2) * r1 * r1


def series_start(report: IndicialReport, coeffs: OriginCoefficients,
                 channel: Channel, E: float, mode: BoundaryMode,
                 r1: float, r2: float, order=1) -> tuple[float, float]:
    """Start values (u(r1), u(r2)) for outward integration.

    With the default ``order=1`` the series keeps one ``c1`` correction,
    ``u = r**s (1 + a r)`` with ``a = m c1 / s``; ``order=None`` sums the
    Frobenius recursion to convergence. In :class:`L2Only` mode::

        u = r**s_plus (1 + a_plus r) - theta (r/r0)**s_minus r0**s_plus (1 + a_minus r)

    A positive ``theta`` gives the irregular branch the sign that the
    decaying solution of a repulsive inverse-square well carries at small r.
    """
    if not 0 < r1 < r2:
        raise DomainError("series_start needs 0 < r1 < r2")
    if report.classification == FALL_TO_CENTER:
        raise UnsupportedChannelError(
            "fall to the center: discriminant < 0, no real origin exponent")
    r = np.array([r1, r2])

    if isinstance(mode, U0Strict) or mode.theta == 0:
        u = frobenius(report, coeffs, channel, E, "plus", r, order)
        return float(u[0]), float(u[1])

    s_m, s_p = report.s_minus, report.s_plus
    if report.classification == CRITICAL:
        raise ModeUnavailableError(
            "critical coupling: the second solution is logarithmic")
    if s_m <= -0.5:
        raise NonNormalizableError(
            f"irregular exponent {s_m:.6g} <= -1/2 is not square integrable")
    if order is not None and coeffs.c1 != 0 and _log_case(report):
        order = 0
    reg = frobenius(report, coeffs, channel, E, "plus", r, order)
    irr = frobenius(report, coeffs, channel, E, "minus", r, order)
    u = reg - mode.theta * mode.r0 ** (s_p - s_m) * irr
    return float(u[0]), float(u[1])


def origin_log_slope(r, u, k: int = 1) -> float:
    """d ln|u| / d ln r from the innermost ``k + 1`` samples."""
    lr = math.log(r[k]) - math.log(r[0])
    return (math.log(abs(u[k])) - math.log(abs(u[0]))) / lr
