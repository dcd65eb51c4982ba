"""Radial Schrodinger equation with explicit origin boundary conditions.

Bound states by Numerov shooting under either u(0) = 0 or square
integrability plus a mixing parameter, a weak-form delta-defect check, and a
finite-difference oracle.
"""

from .delta import (BUILTIN_TRIALS, TrialFunction, check_compatibility,
                    delta_report, linearity_probe, weak_defect)
from .eigensolver import (EigenvalueResult, bracket_state, mismatch, sae_scan,
                          solve_state, spectrum)
from .errors import *  # noqa: F401,F403
from .integrator import (RadialGrid, RadialProblem, RadialSolution,
                         numerov_inward, numerov_outward)
from .kernels import BACKEND
from .oracle import fd_spectrum, inertia_count, oracle_problem
from .origin import Channel, L2Only, U0Strict, admissible, indicial, series_start
from .potentials import (Coulomb, Harmonic, InverseSquare, OriginCoefficients,
                         SumOf, Tabulated, evaluate, load_tabulated,
                         origin_coefficients, sum_of, tabulated)

__version__ = "0.1.0"
