"""numpy implementations of the hot kernels.

These mirror ``_kernels.pyx`` argument for argument and are used whenever
the compiled module is unavailable (or ``ZEROPAIR_PURE=1`` is set).
"""

from __future__ import annotations

import numpy as np

from ._rs_coeffs import COEFFS

_TWO_PI = 2.0 * np.pi
# theta(t) asymptotic tail: 1/(48t) + 7/(5760t^3) + ...
_THETA_TAIL = (
    1.0 / 48.0,
    7.0 / 5760.0,
    31.0 / 80640.0,
    127.0 / 430080.0,
    511.0 / 1216512.0,
)
# reversed for np.polyval
_RS_POLY = tuple(np.array(c[::-1], dtype=np.float64) for c in COEFFS)

_CHUNK_CELLS = 1 << 21


def theta_series(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    inv = 1.0 / t
    inv2 = inv * inv
    tail = np.zeros_like(t)
    for c in reversed(_THETA_TAIL):
        tail = tail * inv2 + c
    return 0.5 * t * np.log(t / _TWO_PI) - 0.5 * t - np.pi / 8.0 + tail * inv


def z_riemann_siegel(t: np.ndarray, n_corr: int) -> np.ndarray:
    """Hardy Z by the Riemann-Siegel formula with ``n_corr`` correction terms."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    out = np.empty_like(t)
    if t.size == 0:
        return out
    tau = t / _TWO_PI
    a = np.sqrt(tau)
    n_terms = np.floor(a).astype(np.int64)
    th = theta_series(t)

    nmax = int(n_terms.max())
    n = np.arange(1, nmax + 1, dtype=np.float64)
    logn = np.log(n)
    rsqrt = 1.0 / np.sqrt(n)
    # sort by term count so each chunk trims its own matrix width
    order = np.argsort(n_terms, kind="stable")
    step = max(1, _CHUNK_CELLS // max(nmax, 1))
    for lo in range(0, t.size, step):
        idx = order[lo:lo + step]
        width = int(n_terms[idx].max())
        ph = th[idx, None] - t[idx, None] * logn[None, :width]
        terms = np.cos(ph) * rsqrt[None, :width]
        terms[np.arange(width)[None, :] >= n_terms[idx, None]] = 0.0
        out[idx] = 2.0 * terms.sum(axis=1)

    p = a - n_terms
    x = p - 0.5
    r = np.zeros_like(t)
    w = np.ones_like(t)
    scale = 1.0 / a
    for k in range(n_corr + 1):
        r += np.polyval(_RS_POLY[k], x) * w
        w = w * scale
    sign = np.where(n_terms % 2 == 1, 1.0, -1.0)
    return out + sign * tau ** -0.25 * r


def pair_gaps(gamma: np.ndarray, mult: np.ndarray, umax: float):
    """All ordered positive gaps ``g = gamma[j] - gamma[i] <= umax``.

    Returns ``(gaps, weights)`` with weight ``mult[i] * mult[j]``; ``gamma``
    must be sorted.  Gaps are formed as plain differences so that comparisons
    against ``umax`` agree with a brute-force double loop bit for bit.
    """
    gamma = np.ascontiguousarray(gamma, dtype=np.float64)
    mult = np.ascontiguousarray(mult, dtype=np.int64)
    first = []
    offset = []
    n = gamma.size
    for d in range(1, n):
        g = gamma[d:] - gamma[:-d]
        within = g <= umax
        # sorted input: once no pair at offset d is within umax, none further is
        if not within.any():
            break
        i = np.flatnonzero(within & (g > 0.0))
        first.append(i)
        offset.append(np.full(i.size, d, dtype=np.int64))
    if not first:
        return np.empty(0), np.empty(0, dtype=np.int64)
    i = np.concatenate(first)
    d = np.concatenate(offset)
    # i-major order, matching the compiled sweep
    order = np.lexsort((d, i))
    i = i[order]
    j = i + d[order]
    return gamma[j] - gamma[i], mult[i] * mult[j]
