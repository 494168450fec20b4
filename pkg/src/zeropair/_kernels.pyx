# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pure.py`` for the reference numpy versions."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, log, sqrt, floor, pow, M_PI

from ._rs_coeffs import COEFFS

cnp.import_array()

cdef double TWO_PI = 2.0 * M_PI

cdef int _NPOLY = len(COEFFS)
_poly_len = np.array([len(c) for c in COEFFS], dtype=np.int64)
_width = int(_poly_len.max())
_poly = np.zeros((_NPOLY, _width), dtype=np.float64)
for _k, _c in enumerate(COEFFS):
    _poly[_k, :len(_c)] = _c

cdef double[:, ::1] POLY = _poly
cdef long[::1] POLY_LEN = _poly_len


cdef inline double _theta(double t) nogil:
    cdef double inv = 1.0 / t
    cdef double inv2 = inv * inv
    cdef double tail = 511.0 / 1216512.0
    tail = tail * inv2 + 127.0 / 430080.0
    tail = tail * inv2 + 31.0 / 80640.0
    tail = tail * inv2 + 7.0 / 5760.0
    tail = tail * inv2 + 1.0 / 48.0
    return 0.5 * t * log(t / TWO_PI) - 0.5 * t - M_PI / 8.0 + tail * inv


cdef inline double _horner(int k, double x) nogil:
    cdef long j
    cdef double acc = 0.0
    for j in range(POLY_LEN[k] - 1, -1, -1):
        acc = acc * x + POLY[k, j]
    return acc


def theta_series(t):
    cdef const double[::1] tv = np.ascontiguousarray(t, dtype=np.float64).ravel()
    out = np.empty(tv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(tv.shape[0]):
            ov[i] = _theta(tv[i])
    return out


def z_riemann_siegel(t, int n_corr):
    cdef const double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    out = np.empty(tv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    if tv.shape[0] == 0:
        return out
    cdef long nmax = <long>floor(sqrt(np.max(t) / TWO_PI)) + 1
    logn_arr = np.log(np.arange(1, nmax + 1, dtype=np.float64))
    rsq_arr = 1.0 / np.sqrt(np.arange(1, nmax + 1, dtype=np.float64))
    cdef double[::1] logn = logn_arr
    cdef double[::1] rsq = rsq_arr
    cdef Py_ssize_t i
    cdef long n, N
    cdef double tt, tau, a, th, acc, p, x, r, w, sgn
    cdef int k
    with nogil:
        for i in range(tv.shape[0]):
            tt = tv[i]
            tau = tt / TWO_PI
            a = sqrt(tau)
            N = <long>floor(a)
            th = _theta(tt)
            acc = 0.0
            for n in range(N):
                acc = acc + cos(th - tt * logn[n]) * rsq[n]
            p = a - N
            x = p - 0.5
            r = 0.0
            w = 1.0
            for k in range(n_corr + 1):
                r = r + _horner(k, x) * w
                w = w / a
            sgn = 1.0 if N % 2 == 1 else -1.0
            ov[i] = 2.0 * acc + sgn * pow(tau, -0.25) * r
    return out


def pair_gaps(gamma, mult, double umax):
    cdef const double[::1] g = np.ascontiguousarray(gamma, dtype=np.float64)
    cdef const long long[::1] m = np.ascontiguousarray(mult, dtype=np.int64)
    cdef Py_ssize_t n = g.shape[0]
    cdef Py_ssize_t i, j, total = 0, pos = 0
    cdef double d
    with nogil:
        for i in range(n):
            j = i + 1
            while j < n:
                d = g[j] - g[i]
                if d > umax:
                    break
                if d > 0.0:
                    total += 1
                j += 1
    gaps = np.empty(total, dtype=np.float64)
    weights = np.empty(total, dtype=np.int64)
    cdef double[::1] gv = gaps
    cdef long long[::1] wv = weights
    with nogil:
        for i in range(n):
            j = i + 1
            while j < n:
                d = g[j] - g[i]
                if d > umax:
                    break
                if d > 0.0:
                    gv[pos] = d
                    wv[pos] = m[i] * m[j]
                    pos += 1
                j += 1
    return gaps, weights
