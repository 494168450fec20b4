"""Height scale: L(T), the smooth counting function M(T) and its inverse."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import lambertw

from .errors import DomainError

_TWO_PI = 2.0 * math.pi


def log_scale(T):
    """L = log(T) / 2pi."""
    return np.log(T) / _TWO_PI


@dataclass(frozen=True)
class ScaleContext:
    T: float

    def __post_init__(self):
        if not self.T >= 2:
            raise DomainError("ScaleContext needs T >= 2")

    @property
    def L(self) -> float:
        return math.log(self.T) / _TWO_PI


@dataclass(frozen=True)
class CorrelationWindow:
    """A gap U = lambda / L with the bracketing constants lambda0 <= lambda <= lambda1."""

    scale: ScaleContext
    lam: float
    lambda0: float
    lambda1: float

    def __post_init__(self):
        if not 0 < self.lambda0 <= self.lam <= self.lambda1:
            raise DomainError("need 0 < lambda0 <= lambda <= lambda1")

    @property
    def U(self) -> float:
        return self.lam / self.scale.L


def m_main(T):
    """M(T) = (T/2pi) log(T / 2pi e)."""
    T = np.asarray(T, dtype=np.float64)
    if np.any(T < 2):
        raise DomainError("m_main needs T >= 2")
    out = T / _TWO_PI * (np.log(T / _TWO_PI) - 1.0)
    return float(out) if out.ndim == 0 else out


def m_density(t):
    """M'(t) = log(t / 2pi) / 2pi, the local zero density."""
    return np.log(np.asarray(t, dtype=np.float64) / _TWO_PI) / _TWO_PI


def m_inverse(x):
    """Solve M(t) = x for t > 2pi (valid for x > -1)."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= -1.0):
        raise DomainError("M is only invertible above its minimum M(2pi) = -1")
    # y log(y/e) = x with y = t/2pi  =>  y = e * exp(W(x/e))
    y = math.e * np.exp(lambertw(x / math.e).real)
    t = _TWO_PI * y
    # one Newton polish in double precision
    t = t - (t / _TWO_PI * (np.log(t / _TWO_PI) - 1.0) - x) / (np.log(t / _TWO_PI) / _TWO_PI)
    return float(t) if t.ndim == 0 else t
