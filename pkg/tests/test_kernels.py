import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radialbc import _kernels_py, kernels

compiled = pytest.importorskip("radialbc._kernels")


def test_backend_selected():
    if os.environ.get("RADIALBC_PURE_PYTHON"):
        assert kernels.BACKEND == "python"
        assert kernels.numerov is _kernels_py.numerov
    else:
        assert kernels.BACKEND == "compiled"
        assert kernels.numerov is compiled.numerov


@settings(max_examples=40, deadline=None)
@given(st.integers(10, 400), st.floats(-50, 50), st.floats(1e-3, 0.1),
       st.booleans())
def test_numerov_backends_agree(n, q0, h, inward):
    rng = np.random.default_rng(n)
    q = q0 + rng.normal(size=n)
    start, stop = (n - 1, 0) if inward else (0, n - 1)
    a = compiled.numerov(q, h, 1.0, 1.1, start, stop)
    b = _kernels_py.numerov(q, h, 1.0, 1.1, start, stop)
    assert np.array_equal(a[0], b[0])
    assert a[1] == b[1] and a[2] == b[2]


def test_numerov_rescales():
    q = np.full(2000, 400.0)
    w, log_scale, nodes = compiled.numerov(q, 0.05, 1.0, 2.0, 0, 1999)
    assert log_scale > 0 and np.all(np.isfinite(w)) and nodes == 0
    assert abs(w[-1]) < 1e101


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 300), st.floats(-20, 20))
def test_sturm_backends_agree(n, e):
    rng = np.random.default_rng(n)
    d, off = rng.normal(size=n) * 5, rng.normal(size=max(n - 1, 0))
    assert compiled.sturm_count(d, off, e) == _kernels_py.sturm_count(d, off, e)
    assert compiled.sturm_count(d, off, e) == int(np.sum(
        np.linalg.eigvalsh(np.diag(d) + np.diag(off, 1) + np.diag(off, -1)) < e))


def test_pure_python_fallback_gives_same_energy():
    code = ("from radialbc import *; import radialbc.kernels as k;"
            "print(k.BACKEND, repr(solve_state(RadialProblem(Channel(0), Coulomb(1.0),"
            " grid=RadialGrid(n=4000)), 0).E))")
    env = dict(os.environ, RADIALBC_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    from radialbc import Channel, Coulomb, RadialGrid, RadialProblem, solve_state
    here = solve_state(RadialProblem(Channel(0), Coulomb(1.0), grid=RadialGrid(n=4000)), 0).E
    assert out[0] == "python"
    assert float(out[1]) == here
