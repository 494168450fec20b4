"""Zero census, the pair-correlation counting function N(T,U) and its histogram."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from . import _backend
from .errors import DomainError, IncompleteSetError, UnsortedSetError
from .gue_model import gue_cdf
from .scale import log_scale
from .zero_source import ZeroSet
from .zeta_eval import rs_theta

# edges are closed on the right; lattice gaps that sit on an edge up to
# rounding are counted in the bin below it
EDGE_SLACK = 1e-9


@dataclass(frozen=True)
class Census:
    N: int
    N_star: int
    N_circledast: int
    N_star_offline: int
    N_ominus: int
    N_zero: int
    N_simple: int
    simple_lower_bound: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def _check_sorted(zs: ZeroSet) -> None:
    g, b = zs.gamma, zs.beta
    if g.size > 1:
        dg = np.diff(g)
        if np.any(dg < 0) or np.any((dg == 0) & (np.diff(b) <= 0)):
            raise UnsortedSetError("zero set is not sorted by (gamma, beta)")


def _upto(zs: ZeroSet, T: float):
    zs.require_complete(T)
    _check_sorted(zs)
    k = np.searchsorted(zs.gamma, T, side="right")
    return zs.beta[:k], zs.gamma[:k], zs.mult[:k]


def zero_census(zs: ZeroSet, T: float) -> Census:
    """All seven counting functions at height T.

    N*_{beta != 1/2} is the multiplicity-counted sum of m over off-line
    zeros, i.e. the sum of m^2 over distinct off-line zeros: every such zero
    contributes m * m' = m^2 symmetric pairs with its mirror 1 - beta, which
    has the same multiplicity.
    """
    beta, gamma, mult = _upto(zs, T)
    m = mult.astype(np.int64)
    N = int(m.sum())
    N_star = int((m * m).sum())
    if gamma.size:
        starts = np.flatnonzero(np.concatenate(([True], gamma[1:] != gamma[:-1])))
        group = np.add.reduceat(m, starts)
        N_circ = int((group * group).sum())
    else:
        N_circ = 0
    off = beta != 0.5
    N_off = int((m[off] * m[off]).sum())
    return Census(
        N=N,
        N_star=N_star,
        N_circledast=N_circ,
        N_star_offline=N_off,
        N_ominus=N_circ - N_star - N_off,
        N_zero=int(m[~off].sum()),
        N_simple=int((m == 1).sum()),
        simple_lower_bound=2 * N - N_star,
    )


def pair_gaps_upto(zs: ZeroSet, T: float, umax: float):
    """Positive ordered gaps <= umax among zeros with gamma <= T, with weights m m'."""
    _, gamma, mult = _upto(zs, T)
    return _backend.pair_gaps(gamma, mult, umax)


def pair_count(zs: ZeroSet, T: float, U: float) -> int:
    """N(T, U): ordered pairs 0 < gamma, gamma' <= T with 0 < gamma' - gamma <= U."""
    if not U > 0:
        raise DomainError("U must be positive")
    gaps, w = pair_gaps_upto(zs, T, U)
    return int(w.sum())


def unfolded_ordinates(gamma) -> np.ndarray:
    """theta(gamma)/pi: ordinates rescaled to unit mean spacing."""
    gamma = np.asarray(gamma, dtype=np.float64)
    out = np.empty_like(gamma)
    ok = gamma >= 1.0
    out[ok] = rs_theta(gamma[ok]) / math.pi
    # below t=1 theta is not needed in practice; keep order with a flat map
    out[~ok] = gamma[~ok]
    return out


@dataclass(frozen=True)
class CorrelationHistogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    predicted: np.ndarray
    T: float
    L: float
    normalisation: float
    unfolded: bool

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def density(self) -> np.ndarray:
        return self.counts / (self.normalisation * self.widths)

    @property
    def predicted_density(self) -> np.ndarray:
        return self.predicted / (self.normalisation * self.widths)

    def to_csv(self) -> str:
        buf = io.StringIO(newline="")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda_lo", "lambda_hi", "count", "predicted", "density", "predicted_density"])
        for lo, hi, c, p, d, pd in zip(self.bin_edges[:-1], self.bin_edges[1:], self.counts,
                                       self.predicted, self.density, self.predicted_density):
            w.writerow([repr(float(lo)), repr(float(hi)), int(c), repr(float(p)),
                        repr(float(d)), repr(float(pd))])
        return buf.getvalue()


def _bin_counts(gaps, weights, edges):
    # count(g <= e) at every edge, then difference
    order = np.argsort(gaps, kind="stable")
    g = gaps[order]
    cw = np.concatenate(([0], np.cumsum(weights[order])))
    idx = np.searchsorted(g, edges * (1.0 + EDGE_SLACK), side="right")
    cum = cw[idx]
    return np.diff(cum)


def correlation_histogram(zs: ZeroSet, T: float, lambda_max: float, n_bins: int, *,
                          unfold: bool = True) -> CorrelationHistogram:
    """Histogram of ordered pair gaps in units of the mean spacing.

    ``unfold=True`` measures gaps between theta(gamma)/pi, which have unit
    mean spacing at every height; counts are normalised by the number of
    zeros N(T).  ``unfold=False`` is the literal N(T, U) with U = lambda/L,
    normalised by T L.  Either way the prediction is normalisation times the
    GUE mass of each bin.
    """
    if not lambda_max <= 10:
        raise DomainError("lambda_max must be <= 10")
    if n_bins < 4:
        raise DomainError("need at least 4 bins")
    _, gamma, mult = _upto(zs, T)
    L = float(log_scale(T))
    edges = np.linspace(0.0, lambda_max, n_bins + 1)
    if unfold:
        x = unfolded_ordinates(gamma)
        gaps, w = _backend.pair_gaps(x, mult, lambda_max * (1.0 + 2 * EDGE_SLACK))
        norm = float(mult.sum())
    else:
        gaps, w = _backend.pair_gaps(gamma, mult, lambda_max / L * (1.0 + 2 * EDGE_SLACK))
        gaps = gaps * L
        norm = T * L
    counts = _bin_counts(gaps, w, edges)
    F = np.array([gue_cdf(e) for e in edges])
    return CorrelationHistogram(edges, counts, norm * np.diff(F), float(T), L, norm, unfold)


def repulsion_probe(zs: ZeroSet, T: float, lambda0_list: Sequence[float], *,
                    unfold: bool = False) -> list[tuple[float, float]]:
    """Ratios N(T, lambda0/L) / (T L) for each lambda0 in (0, 1).

    With ``unfold=True`` the gaps are measured in unfolded units and divided
    by N(T) instead, the finite-height analogue of T L.
    """
    lams = [float(v) for v in lambda0_list]
    if any(not 0 < v < 1 for v in lams):
        raise DomainError("lambda0 values must lie in (0, 1)")
    if not lams:
        return []
    _, gamma, mult = _upto(zs, T)
    L = float(log_scale(T))
    top = max(lams)
    if unfold:
        gaps, w = _backend.pair_gaps(unfolded_ordinates(gamma), mult, top)
        norm, unit = float(mult.sum()), 1.0
    else:
        gaps, w = _backend.pair_gaps(gamma, mult, top / L)
        norm, unit = T * L, L
    return [(lam, float(w[gaps <= lam / unit].sum()) / norm if norm else 0.0) for lam in lams]


def repulsion_csv(rows) -> str:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda0", "ratio"])
    for lam, r in rows:
        w.writerow([repr(lam), repr(r)])
    return buf.getvalue()
