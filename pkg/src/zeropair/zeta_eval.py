"""Riemann-Siegel theta, Hardy Z, Euler-Maclaurin zeta and direct S(t).

Everything here runs in double precision.  ``hardy_z`` switches between the
Riemann-Siegel formula (fast, used for scanning) and ``e^{i theta}`` times the
Euler-Maclaurin zeta below ``EvalConfig.em_crossover_t``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from . import _backend
from .errors import DomainError, PoleError, UnwrapError

_TWO_PI = 2.0 * math.pi
_HALF_LOG_2PI = 0.5 * math.log(_TWO_PI)


@dataclass(frozen=True)
class EvalConfig:
    rs_correction_terms: int = 3
    em_terms: int = 20
    em_crossover_t: float = 600.0
    arg_path_step: float = 0.05

    def __post_init__(self):
        if not 0 <= self.rs_correction_terms <= 4:
            raise ValueError("rs_correction_terms must be in [0, 4]")
        if self.em_terms < 1:
            raise ValueError("em_terms must be positive")
        if self.em_crossover_t < 10:
            raise ValueError("em_crossover_t must be >= 10")
        if not self.arg_path_step > 0:
            raise ValueError("arg_path_step must be positive")


DEFAULT_CONFIG = EvalConfig()


# -- theta ------------------------------------------------------------------

_STIRLING = None


def _stirling_coeffs():
    global _STIRLING
    if _STIRLING is None:
        b = bernoulli(24)
        _STIRLING = [b[2 * j] / (2 * j * (2 * j - 1)) for j in range(1, 13)]
    return _STIRLING


def _loggamma_shifted(z: complex) -> complex:
    # continuous branch: shift into Re >= 12, Stirling there, undo with principal logs
    shift = 0j
    while z.real < 12.0:
        shift += cmath.log(z)
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0j
    for c in reversed(_stirling_coeffs()):
        series = series * inv2 + c
    return (z - 0.5) * cmath.log(z) - z + _HALF_LOG_2PI + series * inv - shift


def _theta_small(t: float) -> float:
    return _loggamma_shifted(complex(0.25, 0.5 * t)).imag - 0.5 * t * math.log(math.pi)


def rs_theta(t):
    """Riemann-Siegel theta for scalar or array ``t >= 1``.

    Uses the asymptotic series for ``t >= 10`` and the log-Gamma
    representation (Stirling after an upward shift) below that.
    """
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr < 1.0) or np.any(~np.isfinite(arr)):
        raise DomainError("rs_theta needs t >= 1")
    flat = arr.ravel()
    out = np.empty_like(flat)
    big = flat >= 10.0
    if big.any():
        out[big] = _backend.theta_series(flat[big])
    for i in np.flatnonzero(~big):
        out[i] = _theta_small(float(flat[i]))
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


# -- Euler-Maclaurin --------------------------------------------------------


@lru_cache(maxsize=None)
def _em_bernoulli(m: int) -> np.ndarray:
    b = bernoulli(2 * m)
    return np.array([b[2 * k] / math.factorial(2 * k) for k in range(1, m + 1)])


def _em_cutoff(abs_s: float, m: int) -> int:
    return int(max(2 * m, math.ceil(abs_s / math.pi) + 1))


def _zeta_em_array(s: np.ndarray, m: int) -> np.ndarray:
    """Euler-Maclaurin zeta at each entry of the complex array ``s``."""
    s = np.asarray(s, dtype=np.complex128)
    N = _em_cutoff(float(np.abs(s).max()), m)
    n = np.arange(1, N, dtype=np.float64)
    logn = np.log(n)
    bcoef = _em_bernoulli(m)
    logN = math.log(N)
    out = np.empty(s.shape, dtype=np.complex128)
    flat_s = s.ravel()
    flat_o = out.reshape(-1)
    step = max(1, (1 << 20) // max(N, 1))
    for lo in range(0, flat_s.size, step):
        sc = flat_s[lo:lo + step]
        head = np.exp(-sc[:, None] * logn[None, :]).sum(axis=1)
        Ns = np.exp(-sc * logN)
        acc = head + 0.5 * Ns + N * Ns / (sc - 1.0)
        # rising factorial s(s+1)...(s+2k-2) times N^{-s-2k+1}
        rise = sc.copy()
        powN = Ns / N
        tail = np.zeros_like(sc)
        for k in range(m):
            tail += bcoef[k] * rise * powN
            rise = rise * (sc + 2 * k + 1) * (sc + 2 * k + 2)
            powN = powN / (N * N)
        flat_o[lo:lo + step] = acc + tail
    return out


def zeta_em(s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """zeta(s) by Euler-Maclaurin summation with ``cfg.em_terms`` corrections."""
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError("s must be finite")
    if s.real <= 0:
        raise DomainError("zeta_em covers Re(s) > 0 only")
    return complex(_zeta_em_array(np.array([s]), cfg.em_terms)[0])


# -- Hardy Z ----------------------------------------------------------------


def _z_em(t: np.ndarray, cfg: EvalConfig) -> np.ndarray:
    z = _zeta_em_array(0.5 + 1j * t, cfg.em_terms)
    return (np.exp(1j * rs_theta(t)) * z).real


def hardy_z(t, cfg: EvalConfig = DEFAULT_CONFIG):
    """Hardy's Z(t) = e^{i theta(t)} zeta(1/2 + it), scalar or vectorised."""
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr < 2.0) or np.any(~np.isfinite(arr)):
        raise DomainError("hardy_z needs t >= 2")
    flat = arr.ravel()
    out = np.empty_like(flat)
    low = flat < cfg.em_crossover_t
    if low.any():
        out[low] = _z_em(flat[low], cfg)
    if (~low).any():
        out[~low] = _backend.z_riemann_siegel(flat[~low], cfg.rs_correction_terms)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


# -- S(t) by argument tracking ---------------------------------------------

_MAX_HALVINGS = 12


def s_direct(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """S(t) = arg zeta(1/2 + it) / pi, continued along 2 -> 2+it -> 1/2+it.

    On the vertical leg |zeta(2+iy) - 1| <= zeta(2) - 1 < 1, so zeta stays in
    the right half-plane and the continuous argument there is the principal
    one.  The horizontal leg is sampled every ``arg_path_step`` in sigma; any
    step whose argument increment reaches pi/2 is bisected, and a step that
    still jumps after repeated bisection raises ``UnwrapError``.
    """
    t = float(t)
    if not t >= 2.0:
        raise DomainError("s_direct needs t >= 2")
    h = cfg.arg_path_step
    n_steps = max(1, math.ceil(1.5 / h))
    sig = np.linspace(2.0, 0.5, n_steps + 1)
    vals = _zeta_em_array(sig + 1j * t, cfg.em_terms)
    total = cmath.phase(vals[0])
    for j in range(n_steps):
        total += _arg_increment(sig[j], sig[j + 1], vals[j], vals[j + 1], t, cfg, 0)
    return total / math.pi


def _arg_increment(s0, s1, z0, z1, t, cfg, depth):
    d = cmath.phase(z1 / z0)
    if abs(d) < 0.5 * math.pi:
        return d
    if depth >= _MAX_HALVINGS:
        raise UnwrapError(
            f"argument jump {d:.3f} at t={t} between sigma={s0} and {s1} after {depth} halvings"
        )
    mid = 0.5 * (s0 + s1)
    zm = complex(_zeta_em_array(np.array([mid + 1j * t]), cfg.em_terms)[0])
    return (_arg_increment(s0, mid, z0, zm, t, cfg, depth + 1)
            + _arg_increment(mid, s1, zm, z1, t, cfg, depth + 1))
