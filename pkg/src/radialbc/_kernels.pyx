# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Numerov march and Sturm-sequence inertia count."""

import numpy as np

from libc.math cimport fabs, log

cdef double BIG = 1e100
cdef double LOG_BIG = log(1e100)


def numerov(const double[::1] q, double h, double wa, double wb,
            Py_ssize_t start, Py_ssize_t stop):
    """March w'' = q w from ``start`` to ``stop`` (inclusive) in either direction.

    Returns ``(w, log_scale, nodes)``; entries outside the marched range are 0.
    """
    cdef Py_ssize_t n = q.shape[0]
    if not (0 <= start < n and 0 <= stop < n) or abs(stop - start) < 1:
        raise IndexError("start/stop outside grid")
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] w = out
    cdef Py_ssize_t d = 1 if stop > start else -1
    cdef double c = h * h / 12.0
    cdef double log_scale = 0.0
    cdef Py_ssize_t i, j, nodes = 0
    cdef double last_sign = 0.0, wn

    w[start] = wa
    w[start + d] = wb
    if wa != 0.0:
        last_sign = 1.0 if wa > 0 else -1.0
    if wb != 0.0:
        if last_sign != 0.0 and (wb > 0) != (last_sign > 0):
            nodes += 1
        last_sign = 1.0 if wb > 0 else -1.0

    i = start + d
    while i != stop:
        wn = (2.0 * (1.0 + 5.0 * c * q[i]) * w[i]
              - (1.0 - c * q[i - d]) * w[i - d]) / (1.0 - c * q[i + d])
        w[i + d] = wn
        if wn != 0.0:
            if last_sign != 0.0 and (wn > 0) != (last_sign > 0):
                nodes += 1
            last_sign = 1.0 if wn > 0 else -1.0
        if fabs(wn) > BIG:
            j = start
            while True:
                w[j] /= BIG
                if j == i + d:
                    break
                j += d
            log_scale += LOG_BIG
        i += d
    return out, log_scale, nodes


def sturm_count(const double[::1] diag, const double[::1] off, double e):
    """Number of eigenvalues of the symmetric tridiagonal (diag, off) below ``e``."""
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i, count = 0
    cdef double piv, pivmin = 1e-300
    piv = diag[0] - e
    if fabs(piv) < pivmin:
        piv = -pivmin
    if piv < 0:
        count += 1
    for i in range(1, n):
        piv = (diag[i] - e) - off[i - 1] * off[i - 1] / piv
        if fabs(piv) < pivmin:
            piv = -pivmin
        if piv < 0:
            count += 1
    return count
