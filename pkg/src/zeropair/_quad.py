"""Vectorised adaptive Gauss-Legendre quadrature over many panels at once."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _nodes(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _panel(f, a, b, p, order):
    x, w = _nodes(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    pts = mid[:, None] + half[:, None] * x[None, :]
    vals = f(pts) if p is None else f(pts, p[:, None])
    return half * (vals * w[None, :]).sum(axis=1)


def integrate_panels(f, a, b, params=None, *, order: int = 8, rel_tol: float = 1e-8,
                     abs_tol: float = 1e-12, max_depth: int = 40) -> np.ndarray:
    """Integral of ``f`` over each panel [a_i, b_i]; one value per panel.

    ``f`` takes a 2-d array of abscissae (plus, when ``params`` is given,
    the matching per-panel parameter as a column) and must be smooth inside
    every panel.  A panel (or sub-panel) is accepted once one Gauss-Legendre pass
    and the sum over its two halves agree to ``max(rel_tol*|I|, abs_tol)``;
    otherwise it is bisected.  Accepted pieces are summed per panel in a
    fixed (sorted) order, so results do not depend on how refinement went.
    """
    a = np.atleast_1d(np.asarray(a, dtype=np.float64))
    b = np.atleast_1d(np.asarray(b, dtype=np.float64))
    n_panels = a.size
    owner = np.arange(n_panels)
    p = None if params is None else np.atleast_1d(np.asarray(params, dtype=np.float64))
    pieces_owner = []
    pieces_val = []
    whole = _panel(f, a, b, p, order) if a.size else np.empty(0)
    for _ in range(max_depth):
        if a.size == 0:
            break
        m = 0.5 * (a + b)
        sub = None if p is None else p[owner]
        left = _panel(f, a, m, sub, order)
        right = _panel(f, m, b, sub, order)
        fine = left + right
        ok = np.abs(fine - whole) <= np.maximum(rel_tol * np.abs(fine), abs_tol)
        pieces_owner.append(owner[ok])
        pieces_val.append(fine[ok])
        bad = ~ok
        a = np.concatenate((a[bad], m[bad]))
        b = np.concatenate((m[bad], b[bad]))
        owner = np.concatenate((owner[bad], owner[bad]))
        whole = np.concatenate((left[bad], right[bad]))
    else:
        # give up refining: keep the last estimate
        pieces_owner.append(owner)
        pieces_val.append(whole)
    out = np.zeros(n_panels)
    if not pieces_owner:
        return out
    own = np.concatenate(pieces_owner)
    val = np.concatenate(pieces_val)
    order_idx = np.lexsort((val, own))
    own, val = own[order_idx], val[order_idx]
    if own.size:
        starts = np.flatnonzero(np.concatenate(([True], own[1:] != own[:-1])))
        out[own[starts]] = np.add.reduceat(val, starts)
    return out
