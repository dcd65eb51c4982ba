"""Pure-Python versions of the compiled kernels, used when the extension is absent."""

import math

import numpy as np

BIG = 1e100
LOG_BIG = math.log(BIG)


def numerov(q, h, wa, wb, start, stop):
    """March w'' = q w from ``start`` to ``stop`` (inclusive) in either direction.

    Returns ``(w, log_scale, nodes)``; entries outside the marched range are 0.
    """
    q = np.ascontiguousarray(q, dtype=np.float64)
    n = q.shape[0]
    if not (0 <= start < n and 0 <= stop < n) or abs(stop - start) < 1:
        raise IndexError("start/stop outside grid")
    ql = q.tolist()
    w = [0.0] * n
    d = 1 if stop > start else -1
    c = h * h / 12.0
    log_scale = 0.0
    nodes = 0
    last_sign = 0.0

    w[start] = float(wa)
    w[start + d] = float(wb)
    for val in (w[start], w[start + d]):
        if val != 0.0:
            s = 1.0 if val > 0 else -1.0
            if last_sign != 0.0 and s != last_sign:
                nodes += 1
            last_sign = s

    i = start + d
    while i != stop:
        wn = (2.0 * (1.0 + 5.0 * c * ql[i]) * w[i]
              - (1.0 - c * ql[i - d]) * w[i - d]) / (1.0 - c * ql[i + d])
        w[i + d] = wn
        if wn != 0.0:
            s = 1.0 if wn > 0 else -1.0
            if last_sign != 0.0 and s != last_sign:
                nodes += 1
            last_sign = s
        if abs(wn) > BIG:
            lo, hi = sorted((start, i + d))
            for j in range(lo, hi + 1):
                w[j] /= BIG
            log_scale += LOG_BIG
        i += d
    return np.array(w), log_scale, nodes


def sturm_count(diag, off, e):
    """Number of eigenvalues of the symmetric tridiagonal (diag, off) below ``e``."""
    diag = np.asarray(diag, dtype=np.float64).tolist()
    off = np.asarray(off, dtype=np.float64).tolist()
    pivmin = 1e-300
    count = 0
    piv = diag[0] - e
    if abs(piv) < pivmin:
        piv = -pivmin
    if piv < 0:
        count += 1
    for i in range(1, len(diag)):
        piv = (diag[i] - e) - off[i - 1] * off[i - 1] / piv
        if abs(piv) < pivmin:
            piv = -pivmin
        if piv < 0:
            count += 1
    return count
