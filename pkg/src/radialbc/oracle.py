"""Finite-difference cross-check for the strict (u(0) = 0) spectrum.

The operator (-d2/dr2 + l(l+1)/r**2 + 2 m V) / (2m) is discretised with the
three-point stencil on a uniform grid and Dirichlet walls at ``r_min - h`` and
``r_max``. Eigenvalues come from Sturm-sequence bisection, so nothing here
touches the Numerov path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ModeUnavailableError
from .integrator import RadialGrid, RadialProblem
from .kernels import sturm_count
from .origin import L2Only
from .potentials import evaluate


@dataclass(frozen=True)
class FDMatrix:
    """Symmetric tridiagonal operator; ``r`` holds the unknowns' radii."""

    diag: np.ndarray
    off: np.ndarray
    h: float
    r: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.diag)

    def gershgorin(self) -> tuple[float, float]:
        rad = np.zeros(self.dim)
        rad[:-1] += np.abs(self.off)
        rad[1:] += np.abs(self.off)
        return float(np.min(self.diag - rad)), float(np.max(self.diag + rad))

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)


def fd_matrix(problem: RadialProblem) -> FDMatrix:
    grid = problem.grid
    if grid.is_log:
        raise DomainError("the finite-difference oracle needs a uniform grid")
    if isinstance(problem.mode, L2Only) and problem.mode.theta != 0:
        raise ModeUnavailableError("the oracle certifies the u(0)=0 mode only")
    h = grid.h
    if abs(grid.r_min - h) > 1e-9 * h:
        raise DomainError(f"uniform oracle grid must start at r_min = h "
                          f"(got r_min={grid.r_min!r}, h={h!r})")
    l, m = problem.channel.l, problem.channel.mass
    # wall at r_max; for l >= 1 the origin wall moves out to r_min
    r = grid.r[1:-1] if l >= 1 else grid.r[:-1]
    v = evaluate(problem.potential, r)
    diag = (2.0 / h**2 + l * (l + 1) / r**2 + 2.0 * m * v) / (2.0 * m)
    off = np.full(len(r) - 1, -1.0 / (2.0 * m * h**2))
    return FDMatrix(diag, off, h, r)


def inertia_count(matrix: FDMatrix, E: float) -> int:
    """Number of eigenvalues strictly below ``E``."""
    return int(sturm_count(matrix.diag, matrix.off, float(E)))


def _bisect(matrix, j, lo, hi):
    # smallest E with more than j eigenvalues below it
    while True:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi or hi - lo <= 4e-16 * max(abs(lo), abs(hi)):
            return 0.5 * (lo + hi)
        if inertia_count(matrix, mid) > j:
            hi = mid
        else:
            lo = mid


def fd_spectrum(problem: RadialProblem, k: int, matrix: FDMatrix | None = None) -> np.ndarray:
    """The ``k`` lowest eigenvalues, ascending."""
    if matrix is None:
        matrix = fd_matrix(problem)
    if not 1 <= k <= matrix.dim:
        raise DomainError(f"k must lie in [1, {matrix.dim}], got {k}")
    lo, hi = matrix.gershgorin()
    pad = 1e-12 * max(1.0, abs(lo), abs(hi))
    lo, hi = lo - pad, hi + pad
    out = np.empty(k)
    for j in range(k):
        start = out[j - 1] if j else lo
        out[j] = _bisect(matrix, j, start - pad, hi)
    return out


def oracle_problem(channel, potential, r_max: float, n: int) -> RadialProblem:
    """Strict-mode problem on the uniform grid {h, 2h, ..., r_max}, h = r_max / n."""
    h = r_max / n
    return RadialProblem(channel, potential, grid=RadialGrid("uniform", h, r_max, n))
