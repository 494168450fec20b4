"""Second moments of Delta_U N and Delta_U S, and the two short-interval propositions.

Delta_U N(t) = N(t+U) - N(t) is a step function whose breakpoints are the
ordinates gamma and gamma - U; every integral here is assembled segment by
segment between consecutive breakpoints, so jumps are never integrated
across.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from ._quad import integrate_panels
from .counting_stats import pair_gaps_upto, zero_census
from .errors import DomainError
from .scale import log_scale, m_main  # noqa: F401  (m_main re-exported)
from .zero_source import ZeroSet
from .zeta_eval import rs_theta

_PI = math.pi
_PI2 = _PI * _PI

__all__ = [
    "m_main", "m_main_integral", "delta_u_segments", "delta_u_moment2_N",
    "pair_triangle_sum", "overlap_measure", "s_from_zeros", "delta_u_moment_S",
    "TsangParams", "tsang_prediction", "MomentReport", "proposition_report",
]


def m_main_integral(T: float) -> float:
    """M(T) as (1/2pi) integral_{2pi e}^T log(t/2pi) dt, by Gauss-Legendre."""
    if T < 2:
        raise DomainError("m_main needs T >= 2")
    a, b = 2 * _PI * math.e, float(T)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    edges = np.linspace(a, b, 65)
    val = integrate_panels(lambda t: np.log(t / (2 * _PI)), edges[:-1], edges[1:],
                           rel_tol=1e-14, abs_tol=1e-15).sum()
    return sign * float(val) / (2 * _PI)


class Segments(NamedTuple):
    lo: np.ndarray
    hi: np.ndarray
    value: np.ndarray  # Delta_U N on [lo, hi)


def delta_u_segments(zs: ZeroSet, T: float, U: float, start: float) -> Segments:
    """Constant pieces of Delta_U N on [start, T]."""
    g = zs.gamma
    cum = np.concatenate(([0], np.cumsum(zs.mult)))
    pts = np.concatenate(([start, T], g, g - U))
    pts = np.unique(pts[(pts >= start) & (pts <= T)])
    lo, hi = pts[:-1], pts[1:]
    mid = 0.5 * (lo + hi)
    val = cum[np.searchsorted(g, mid + U, side="right")] - cum[np.searchsorted(g, mid, side="right")]
    return Segments(lo, hi, val.astype(np.float64))


def _check_window(zs: ZeroSet, T: float, U: float) -> None:
    if not U > 0:
        raise DomainError("U must be positive")
    if not T > max(zs.range_lo, 0.0):
        raise DomainError("T must exceed the start of the zero range")
    zs.require_complete(T + U)


def _start_N(zs: ZeroSet) -> float:
    return max(0.0, zs.range_lo)


def delta_u_moment2_N(zs: ZeroSet, T: float, U: float) -> float:
    """Exact integral_0^T (Delta_U N(t))^2 dt."""
    _check_window(zs, T, U)
    seg = delta_u_segments(zs, T, U, _start_N(zs))
    return float(np.sum(seg.value ** 2 * (seg.hi - seg.lo)))


class PairTriangle(NamedTuple):
    direct: float
    stieltjes: float
    N_circledast: int


def pair_triangle_sum(zs: ZeroSet, T: float, U: float) -> PairTriangle:
    """Sum over ordered pairs 0 < gamma, gamma' <= T, |gamma' - gamma| <= U of
    (U - |gamma' - gamma|), weighted by multiplicity, two ways.

    ``direct`` adds the pair terms; ``stieltjes`` is U N_circledast(T) plus
    twice the exact integral of the step function u -> N(T, u) over [0, U].
    """
    if not U > 0:
        raise DomainError("U must be positive")
    zs.require_complete(T)
    census = zero_census(zs, T)
    gaps, w = pair_gaps_upto(zs, T, U)

    # direct: diagonal rho = rho', same-ordinate rho != rho', then gamma != gamma'
    same_line = (census.N_circledast - census.N_star) * U
    direct = U * census.N_star + same_line + 2.0 * float(np.sum(w * (U - gaps)))

    order = np.argsort(gaps, kind="stable")
    g = np.append(gaps[order], U)
    level = np.cumsum(w[order]).astype(np.float64)  # N(T, u) on [g_k, g_{k+1})
    integral = float(np.sum(level * np.diff(g)))
    return PairTriangle(direct, U * census.N_circledast + 2.0 * integral, census.N_circledast)


def overlap_measure(gamma: float, gamma_p: float, U: float, T: float) -> float:
    """Length of {t in [0, T] : t < gamma, gamma' <= t + U}."""
    if not U > 0:
        raise DomainError("U must be positive")
    lo = max(max(gamma, gamma_p) - U, 0.0)
    hi = min(min(gamma, gamma_p), T)
    return max(0.0, hi - lo)


def s_from_zeros(zs: ZeroSet, t: float) -> float:
    """S(t) = N(t) - theta(t)/pi - 1 from the counted zeros."""
    if t < 2:
        raise DomainError("s_from_zeros needs t >= 2")
    zs.require_complete(t)
    return zs.count(t) - rs_theta(float(t)) / _PI - 1.0


def _start_S(zs: ZeroSet) -> float:
    return max(2.0, zs.range_lo)


def _delta_theta(t, U):
    return (rs_theta(t + U) - rs_theta(t)) / _PI


def segment_integral(zs: ZeroSet, T: float, U: float, integrand, *, rel_tol: float = 1e-8,
                     abs_tol: float = 1e-12) -> float:
    """integral_{max(2, lo)}^T integrand(t, Delta_U N(t)) dt, one Gauss-Legendre
    refinement per constant segment of Delta_U N."""
    _check_window(zs, T, U)
    seg = delta_u_segments(zs, T, U, _start_S(zs))
    keep = seg.hi > seg.lo
    vals = integrate_panels(integrand, seg.lo[keep], seg.hi[keep], seg.value[keep],
                            order=8, rel_tol=rel_tol, abs_tol=abs_tol)
    return float(np.sum(vals))


def delta_u_moment_S(zs: ZeroSet, T: float, U: float, k: int = 1, *,
                     rel_tol: float = 1e-8) -> float:
    """integral (Delta_U S(t))^{2k} dt over [max(2, range_lo), T].

    Delta_U S = Delta_U N - (theta(t+U) - theta(t))/pi, smooth on every
    segment; [0, 2] is left out since S is only defined from t = 2 and it
    contributes O(1).
    """
    if k < 1:
        raise DomainError("k must be a positive integer")
    p = 2 * int(k)
    return segment_integral(zs, T, U, lambda t, dn: (dn - _delta_theta(t, U)) ** p,
                            rel_tol=rel_tol)


def trivial_bound_constants(zs: ZeroSet, T: float, U: float) -> tuple[float, float]:
    """max |Delta_U N| / ((1+U) L) and max |Delta_U S| / L over [2, T]."""
    _check_window(zs, T, U)
    seg = delta_u_segments(zs, T, U, _start_S(zs))
    L = float(log_scale(T))
    # Delta_U theta is monotone, so extremes of Delta_U S sit at segment ends
    ends = np.concatenate((seg.value - _delta_theta(seg.lo, U), seg.value - _delta_theta(seg.hi, U)))
    return float(np.abs(seg.value).max() / ((1 + U) * L)), float(np.abs(ends).max() / L)


@dataclass(frozen=True)
class TsangParams:
    T: float
    H: float
    h: float
    k: int = 1
    eta: float = 0.75

    def __post_init__(self):
        if not 0.5 < self.eta < 1:
            raise DomainError("eta must lie in (1/2, 1)")
        if not self.T ** self.eta < self.H <= self.T:
            raise DomainError("need T^eta < H <= T")
        if self.h < 0:
            raise DomainError("h must be >= 0")
        if self.k < 1:
            raise DomainError("k must be a positive integer")

    @property
    def A_k(self) -> float:
        k = self.k
        return math.factorial(2 * k) / (2 ** k * _PI ** (2 * k) * math.factorial(k))


def tsang_prediction(p: TsangParams) -> float:
    """Main term H A_k (log(2 + h log T))^k of the 2k-th moment of S(t+h) - S(t)."""
    return p.H * p.A_k * math.log(2.0 + p.h * math.log(p.T)) ** p.k


@dataclass(frozen=True)
class MomentReport:
    T: float
    U: float
    lam: float
    exact_N_moment: float
    pair_sum: float
    stieltjes_sum: float
    prop1_residual: float
    S_moment: float
    lem2_residual: float
    lem1_prediction: float
    boundary_bound: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def proposition_report(zs: ZeroSet, T: float, U: float) -> MomentReport:
    L = float(log_scale(T))
    exact = delta_u_moment2_N(zs, T, U)
    tri = pair_triangle_sum(zs, T, U)
    s2 = delta_u_moment_S(zs, T, U, 1)
    return MomentReport(
        T=float(T),
        U=float(U),
        lam=U * L,
        exact_N_moment=exact,
        pair_sum=tri.direct,
        stieltjes_sum=tri.stieltjes,
        prop1_residual=exact - tri.direct,
        S_moment=s2,
        lem2_residual=exact - T * (U * L) ** 2 - s2,
        lem1_prediction=T / _PI2 * math.log(2.0 + U * L),
        boundary_bound=((1.0 + U) * L) ** 2,
    )
