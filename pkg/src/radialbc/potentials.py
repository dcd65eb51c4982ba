"""Central potentials V(r), their origin expansions, and tabulated input.

Units: hbar = 1. A potential is one of the frozen dataclasses below; all
functions here are pure.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, InsufficientDataError, ParseError

DEFAULT_ORIGIN_WINDOW = 8


@dataclass(frozen=True)
class OriginCoefficients:
    """V(r) = c2/r**2 + c1/r + c0 + o(1) as r -> 0."""

    c2: float = 0.0
    c1: float = 0.0
    c0: float = 0.0

    def __add__(self, other):
        return OriginCoefficients(self.c2 + other.c2, self.c1 + other.c1,
                                  self.c0 + other.c0)

    def __call__(self, r):
        return self.c2 / r**2 + self.c1 / r + self.c0


@dataclass(frozen=True)
class Coulomb:
    Z: float

    def __call__(self, r):
        return -self.Z / r


@dataclass(frozen=True)
class Harmonic:
    """V = m omega**2 r**2 / 2; the mass is part of the potential."""

    omega: float
    mass: float = 1.0

    def __call__(self, r):
        return 0.5 * self.mass * self.omega**2 * r**2


@dataclass(frozen=True)
class InverseSquare:
    alpha: float

    def __call__(self, r):
        return self.alpha / r**2


@dataclass(frozen=True)
class Tabulated:
    """Sampled potential with monotone cubic interpolation.

    Below the first sample the origin fit is used; above the last sample the
    tail fit: ``c/r`` for decaying tails, ``a + b r**2`` for confining ones.
    """

    r: tuple
    v: tuple
    origin_fit: OriginCoefficients
    tail_fit: str
    tail_params: tuple
    _interp: PchipInterpolator = field(repr=False, compare=False, default=None)

    def __call__(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        r_lo, r_hi = self.r[0], self.r[-1]
        out = np.empty_like(r)
        inner = r < r_lo
        outer = r > r_hi
        mid = ~(inner | outer)
        out[mid] = self._interp(r[mid])
        out[inner] = self.origin_fit(r[inner])
        if self.tail_fit == "decaying":
            (c,) = self.tail_params
            out[outer] = c / r[outer]
        else:
            a, b = self.tail_params
            out[outer] = a + b * r[outer] ** 2
        # reproduce samples exactly at the abscissae
        knots = np.asarray(self.r)
        idx = np.minimum(np.searchsorted(knots, r), len(knots) - 1)
        hit = knots[idx] == r
        out[hit] = np.asarray(self.v)[idx[hit]]
        return out


@dataclass(frozen=True)
class SumOf:
    terms: tuple

    def __call__(self, r):
        total = 0.0
        for t in self.terms:
            total = total + t(r)
        return total


PotentialSpec = Union[Coulomb, Harmonic, InverseSquare, SumOf, Tabulated]


def sum_of(*terms) -> SumOf:
    """Build a flattened sum; nested sums are expanded in order."""
    flat = []
    for t in terms:
        if isinstance(t, SumOf):
            flat.extend(t.terms)
        else:
            flat.append(t)
    if not flat:
        raise DomainError("SumOf needs at least one term")
    tabs = [t for t in flat if isinstance(t, Tabulated)]
    if any(t.r != tabs[0].r for t in tabs[1:]):
        raise DomainError("SumOf contains tabulated terms on conflicting grids")
    return SumOf(tuple(flat))


def evaluate(spec: PotentialSpec, r):
    """V(r) for scalar or array ``r``; ``r`` must be positive."""
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"potential evaluated at non-positive r: {np.min(arr)!r}")
    out = np.asarray(spec(np.atleast_1d(arr)), dtype=float)
    return float(out[0]) if arr.ndim == 0 else out


def _fit_origin(r, v, k):
    r = np.asarray(r[:k], dtype=float)
    v = np.asarray(v[:k], dtype=float)
    a = np.column_stack([1.0 / r**2, 1.0 / r, np.ones_like(r)])
    scale = np.abs(a).max(axis=0)
    coef, *_ = np.linalg.lstsq(a / scale, v, rcond=None)
    c2, c1, c0 = coef / scale
    return OriginCoefficients(float(c2), float(c1), float(c0))


def origin_coefficients(spec: PotentialSpec, k: int | None = None) -> OriginCoefficients:
    """Leading origin behaviour c2/r**2 + c1/r + c0 of ``spec``.

    Exact for catalog potentials and their sums. For tabulated data a least
    squares fit over the innermost ``k`` samples (default 8).
    """
    if isinstance(spec, Coulomb):
        return OriginCoefficients(0.0, -spec.Z, 0.0)
    if isinstance(spec, Harmonic):
        return OriginCoefficients()
    if isinstance(spec, InverseSquare):
        return OriginCoefficients(spec.alpha, 0.0, 0.0)
    if isinstance(spec, SumOf):
        total = OriginCoefficients()
        for t in spec.terms:
            total = total + origin_coefficients(t, k)
        return total
    if isinstance(spec, Tabulated):
        if k is None or k == DEFAULT_ORIGIN_WINDOW:
            return spec.origin_fit
        if len(spec.r) < 4:
            raise InsufficientDataError("need at least 4 samples for an origin fit")
        return _fit_origin(spec.r, spec.v, max(3, min(k, len(spec.r))))
    raise TypeError(f"not a potential: {spec!r}")


def tabulated(r, v, k: int = DEFAULT_ORIGIN_WINDOW) -> Tabulated:
    """Build a :class:`Tabulated` potential from samples, fitting both ends."""
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    if r.ndim != 1 or r.shape != v.shape:
        raise DomainError("r and V must be 1-d arrays of equal length")
    if len(r) < 4:
        raise InsufficientDataError(f"need at least 4 samples, got {len(r)}")
    if not np.all(np.isfinite(r)) or not np.all(np.isfinite(v)):
        raise DomainError("non-finite sample")
    if r[0] <= 0 or np.any(np.diff(r) <= 0):
        raise DomainError("sample radii must be positive and strictly increasing")

    origin = _fit_origin(r, v, max(3, min(k, len(r))))
    n_tail = max(2, math.ceil(0.1 * len(r)))
    rt, vt = r[-n_tail:], v[-n_tail:]
    # an attractive tail rising towards zero (-Z/r) is still decaying
    if np.all(np.diff(vt) > 0) and vt[-1] > 0:
        kind = "confining"
        a = np.column_stack([np.ones_like(rt), rt**2])
        params, *_ = np.linalg.lstsq(a, vt, rcond=None)
        params = (float(params[0]), float(params[1]))
    else:
        kind = "decaying"
        params = (float(np.sum(vt / rt) / np.sum(1.0 / rt**2)),)
    return Tabulated(tuple(r.tolist()), tuple(v.tolist()), origin, kind, params,
                     PchipInterpolator(r, v, extrapolate=False))


def load_tabulated(source, k: int = DEFAULT_ORIGIN_WINDOW) -> Tabulated:
    """Parse a two-column ``r,V`` CSV stream (bytes or text) into a potential.

    Lines starting with ``#`` and blank lines are skipped. Errors name the
    offending 1-based line number.
    """
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    rows = []
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip().replace("−", "-")
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise ParseError(f"expected 2 columns, got {len(parts)}", lineno)
        try:
            rv, vv = float(parts[0]), float(parts[1])
        except ValueError:
            raise ParseError(f"non-numeric entry {line!r}", lineno) from None
        if not (math.isfinite(rv) and math.isfinite(vv)):
            raise ParseError("NaN or Inf entry", lineno)
        if rv <= 0:
            raise ParseError(f"radius must be positive, got {rv!r}", lineno)
        if rows and rv <= rows[-1][0]:
            raise ParseError(f"r column not strictly increasing ({rv!r} after "
                             f"{rows[-1][0]!r})", lineno)
        rows.append((rv, vv))
    if len(rows) < 4:
        raise ParseError(f"need at least 4 data rows, got {len(rows)}")
    r, v = zip(*rows)
    return tabulated(r, v, k)
