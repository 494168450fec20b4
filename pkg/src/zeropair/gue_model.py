"""GUE pair-correlation integrals and the Poisson / picket-fence null models."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._quad import integrate_panels
from .errors import DomainError
from .scale import m_inverse, m_main

_PI2 = math.pi ** 2
_SERIES_DENSITY = 1e-4
_SERIES_LOGTERM = 1e-3


def _density(a):
    a = np.asarray(a, dtype=np.float64)
    x2 = (math.pi * a) ** 2
    small = np.abs(a) < _SERIES_DENSITY
    # 1 - sinc^2 = x^2/3 - 2x^4/45 + ...
    series = x2 / 3.0 - 2.0 * x2 * x2 / 45.0
    return np.where(small, series, 1.0 - np.sinc(a) ** 2)


def gue_pair_density(alpha):
    """1 - (sin(pi a) / (pi a))^2, with the removable singularity filled in."""
    out = _density(alpha)
    return float(out) if np.ndim(out) == 0 else out


def _half_periods(lam: float):
    k = np.arange(0, math.ceil(2 * lam) + 1) * 0.5
    k = k[k < lam]
    return k, np.append(k[1:], lam)


def _integrate(f, lam, tol):
    if lam <= 0:
        return 0.0
    a, b = _half_periods(lam)
    per_panel = tol / max(a.size, 1)
    return float(integrate_panels(f, a, b, order=10, rel_tol=1e-15,
                                  abs_tol=per_panel).sum())


def gue_cdf(lam: float, tol: float = 1e-12) -> float:
    """F(lambda) = integral_0^lambda (1 - sinc^2), folded over half-periods."""
    if lam < 0:
        raise DomainError("lambda must be >= 0")
    if tol < 1e-12:
        tol = 1e-12
    return _integrate(_density, lam, tol)


def predicted_pairs(T: float, U: float) -> float:
    """GUE prediction T L F(U L) for N(T, U)."""
    if not T >= 2 or not U > 0:
        raise DomainError("need T >= 2 and U > 0")
    L = math.log(T) / (2 * math.pi)
    return T * L * gue_cdf(U * L)


class TriangleIntegral(NamedTuple):
    value: float
    asymptote_residual: float
    sinc2_integral: float
    log_component: float


def _logterm(a):
    # (1 - cos 2 pi a) / a, series near 0
    a = np.asarray(a, dtype=np.float64)
    x = 2 * math.pi * a
    small = np.abs(a) < _SERIES_LOGTERM
    safe = np.where(small, 1.0, a)
    series = (x * x / 2.0 - x ** 4 / 24.0 + x ** 6 / 720.0) / np.where(small, a, 1.0)
    series = np.where(a == 0, 0.0, series)
    return np.where(small, series, (1.0 - np.cos(x)) / safe)


def triangle_gue_integral(lam: float, tol: float = 1e-10) -> TriangleIntegral:
    """Integral over [-lambda, lambda] of (lambda - |a|) sinc^2(a).

    Also returns the two pieces it splits into,
    ``sinc2_integral`` = integral_{-lambda}^{lambda} sinc^2 and
    ``log_component`` = (1/pi^2) integral_0^lambda (1 - cos 2 pi a)/a,
    with value = lambda * sinc2_integral - log_component.
    """
    if lam < 1:
        raise DomainError("triangle_gue_integral needs lambda >= 1")
    value = 2.0 * _integrate(lambda a: (lam - a) * np.sinc(a) ** 2, lam, tol / 2)
    sinc2 = 2.0 * _integrate(lambda a: np.sinc(a) ** 2, lam, tol / (4 * lam))
    logc = _integrate(_logterm, lam, tol * _PI2 / 2) / _PI2
    return TriangleIntegral(value, value - (lam - math.log(lam) / _PI2), sinc2, logc)


@dataclass(frozen=True)
class GueIntegralTable:
    lambda_grid: np.ndarray
    F_values: np.ndarray
    triangle_values: np.ndarray
    residuals: np.ndarray
    quadrature_tol: float

    def to_csv(self) -> str:
        buf = io.StringIO(newline="")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda", "F", "triangle", "residual"])
        for row in zip(self.lambda_grid, self.F_values, self.triangle_values, self.residuals):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def gue_table(lambda_grid: Sequence[float], tol: float = 1e-10) -> GueIntegralTable:
    grid = np.asarray(lambda_grid, dtype=np.float64)
    if np.any(np.diff(grid) <= 0) or np.any(grid < 0):
        raise DomainError("lambda grid must be increasing and non-negative")
    F = np.array([gue_cdf(v, tol) for v in grid])
    tri = np.full(grid.size, np.nan)
    res = np.full(grid.size, np.nan)
    for i, v in enumerate(grid):
        if v >= 1:
            r = triangle_gue_integral(float(v), tol)
            tri[i], res[i] = r.value, r.asymptote_residual
    return GueIntegralTable(grid, F, tri, res, tol)


def sample_control(kind: str, T: float, seed: int = 0):
    """Null-model ordinates up to T.

    ``poisson``: inhomogeneous Poisson points with intensity M'(t) on
    (2 pi, T], drawn as a unit-rate process in x = M(t) and mapped back.
    ``picket_fence``: gamma_n with M(gamma_n) = n exactly.
    """
    from .zero_source import Provenance, ZeroSet

    if not T >= 100:
        raise DomainError("sample_control needs T >= 100")
    top = m_main(T)
    if kind == "poisson":
        rng = np.random.default_rng(seed)
        n = rng.poisson(top + 1.0)
        x = np.sort(top - (top + 1.0) * rng.random(n))  # (-1, M(T)]
        x = x[x > -1.0 + 1e-12]
        gam = np.minimum(m_inverse(x), T)
        gam = gam[gam > 0]
    elif kind == "picket_fence":
        gam = m_inverse(np.arange(1, math.floor(top) + 1, dtype=np.float64))
        gam = gam[gam <= T]
    else:
        raise DomainError(f"unknown control kind {kind!r}")
    gam = np.unique(gam)
    n = gam.size
    return ZeroSet(np.full(n, 0.5), gam, np.ones(n, dtype=np.int64), 0.0, T, Provenance.SYNTHETIC, True)
