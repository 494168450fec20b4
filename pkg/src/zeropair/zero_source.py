"""ZeroSets: scanning Z(t), ingesting ordinate tables, synthetic sets, cache I/O."""

from __future__ import annotations

import enum
import hashlib
import math
import os
import time
import urllib.request
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np
from filelock import FileLock

from . import zeta_eval
from .errors import (
    CacheVersionError,
    ChecksumError,
    ConvergenceError,
    DomainError,
    FetchError,
    IncompleteSetError,
    MonotonicityError,
    NoSignChangeError,
    ParseError,
    UnsortedSetError,
)
from .scale import m_main
from .zeta_eval import DEFAULT_CONFIG, EvalConfig

CACHE_MAGIC = "zeropair-v1"


class Provenance(str, enum.Enum):
    COMPUTED = "computed"
    INGESTED = "ingested"
    SYNTHETIC = "synthetic"


class ZeroRecord(NamedTuple):
    beta: float
    gamma: float
    mult: int


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ZeroSet:
    """Sorted multiset of zeros beta + i gamma with multiplicities.

    Stored column-wise; ``records`` gives the row view.  Membership is
    half-open, ``range_lo < gamma <= range_hi``.
    """

    beta: np.ndarray
    gamma: np.ndarray
    mult: np.ndarray
    range_lo: float
    range_hi: float
    provenance: Provenance
    complete: bool

    def __post_init__(self):
        object.__setattr__(self, "beta", _frozen(self.beta, np.float64))
        object.__setattr__(self, "gamma", _frozen(self.gamma, np.float64))
        object.__setattr__(self, "mult", _frozen(self.mult, np.int64))
        object.__setattr__(self, "provenance", Provenance(self.provenance))
        object.__setattr__(self, "range_lo", float(self.range_lo))
        object.__setattr__(self, "range_hi", float(self.range_hi))
        object.__setattr__(self, "complete", bool(self.complete))
        b, g, m = self.beta, self.gamma, self.mult
        if not (b.shape == g.shape == m.shape) or g.ndim != 1:
            raise ValueError("beta, gamma, mult must be 1-d arrays of equal length")
        if self.range_lo > self.range_hi:
            raise ValueError("range_lo must not exceed range_hi")
        if g.size:
            dg = np.diff(g)
            if np.any(dg < 0) or np.any((dg == 0) & (np.diff(b) <= 0)):
                raise UnsortedSetError("records must be sorted by gamma then beta, without duplicates")
            if g[0] <= self.range_lo or g[-1] > self.range_hi:
                raise ValueError("ordinates must lie in (range_lo, range_hi]")
            if np.any(b <= 0) or np.any(b >= 1):
                raise ValueError("beta must lie in (0, 1)")
            if np.any(m < 1):
                raise ValueError("multiplicities must be >= 1")
            if self.provenance is Provenance.COMPUTED and (np.any(b != 0.5) or np.any(m != 1)):
                raise ValueError("computed zeros are simple and on the critical line")

    @classmethod
    def from_records(cls, records: Iterable, range_lo, range_hi, provenance, complete):
        rows = sorted((float(b), float(g), int(m)) for b, g, m in records)
        rows.sort(key=lambda r: (r[1], r[0]))
        if rows:
            b, g, m = zip(*rows)
        else:
            b, g, m = (), (), ()
        return cls(np.array(b), np.array(g), np.array(m, dtype=np.int64),
                   range_lo, range_hi, provenance, complete)

    def __len__(self):
        return self.gamma.size

    @property
    def records(self) -> list[ZeroRecord]:
        return [ZeroRecord(float(b), float(g), int(m))
                for b, g, m in zip(self.beta, self.gamma, self.mult)]

    def __eq__(self, other):
        if not isinstance(other, ZeroSet):
            return NotImplemented
        return (np.array_equal(self.beta, other.beta)
                and np.array_equal(self.gamma, other.gamma)
                and np.array_equal(self.mult, other.mult)
                and self.range_lo == other.range_lo
                and self.range_hi == other.range_hi
                and self.provenance is other.provenance
                and self.complete == other.complete)

    __hash__ = None

    def count(self, t: float) -> int:
        """Multiplicity-weighted N(t) over the set."""
        k = np.searchsorted(self.gamma, t, side="right")
        return int(self.mult[:k].sum())

    def require_complete(self, hi: float) -> None:
        if not self.complete:
            raise IncompleteSetError(f"zero set ({self.range_lo}, {self.range_hi}] is not complete")
        if hi > self.range_hi:
            raise IncompleteSetError(f"zeros are known up to {self.range_hi}, need {hi}")

    def truncated(self, hi: float) -> "ZeroSet":
        """The sub-set with gamma <= hi (range clipped accordingly)."""
        k = np.searchsorted(self.gamma, hi, side="right")
        return ZeroSet(self.beta[:k], self.gamma[:k], self.mult[:k], self.range_lo,
                       min(hi, self.range_hi), self.provenance, self.complete)


# -- scanning ---------------------------------------------------------------

_WARP_KNEE = 40.0
_THETA_KNEE = None


def _unfold(t):
    """Grid coordinate: theta(t)/pi above the knee, its tangent line below."""
    global _THETA_KNEE
    if _THETA_KNEE is None:
        _THETA_KNEE = zeta_eval.rs_theta(_WARP_KNEE) / math.pi
    t = np.asarray(t, dtype=np.float64)
    slope = math.log(_WARP_KNEE / (2 * math.pi)) / (2 * math.pi)
    low = _THETA_KNEE + (t - _WARP_KNEE) * slope
    high = zeta_eval.rs_theta(np.maximum(t, _WARP_KNEE)) / math.pi
    return np.where(t < _WARP_KNEE, low, high)


def _fold(u):
    """Inverse of ``_unfold`` by Newton iteration."""
    u = np.asarray(u, dtype=np.float64)
    slope = math.log(_WARP_KNEE / (2 * math.pi)) / (2 * math.pi)
    _unfold(_WARP_KNEE)
    t = np.where(u < _THETA_KNEE, _WARP_KNEE + (u - _THETA_KNEE) / slope, 0.0)
    hi = u >= _THETA_KNEE
    if hi.any():
        # theta/pi + 1 ~ M + 7/8, so start from M^{-1}
        from .scale import m_inverse
        x = m_inverse(np.maximum(u[hi] - 7.0 / 8.0 + 1.0, -0.5))
        x = np.maximum(x, _WARP_KNEE)
        target = u[hi]
        live = np.arange(x.size)
        # elements leave the loop on their own test, so a grid point does not
        # depend on which batch it was folded in
        for _ in range(50):
            xl = x[live]
            f = zeta_eval.rs_theta(xl) / math.pi - target[live]
            dx = f / (np.log(xl / (2 * math.pi)) / (2 * math.pi))
            x[live] = np.maximum(xl - dx, _WARP_KNEE)
            live = live[np.abs(dx) > 1e-13 * xl]
            if live.size == 0:
                break
        t[hi] = x
    return t


def rvm_count(t: float, cfg: EvalConfig = DEFAULT_CONFIG) -> int:
    """N(t) = theta(t)/pi + 1 + S(t), which must come out an integer."""
    v = zeta_eval.rs_theta(t) / math.pi + 1.0 + zeta_eval.s_direct(t, cfg)
    n = round(v)
    if abs(v - n) > 1e-3:
        raise ConvergenceError(f"theta/pi + 1 + S at t={t} is {v!r}, not an integer")
    return int(n)


def _refine_many(a, b, za, zb, tol, cfg, max_iter=200):
    """Vectorised bisection down to ~sqrt(tol) scale, then a secant polish."""
    a = np.array(a, dtype=np.float64)
    b = np.array(b, dtype=np.float64)
    za = np.array(za, dtype=np.float64)
    zb = np.array(zb, dtype=np.float64)
    coarse = max(tol * 1e3, 1e-7)
    for _ in range(max_iter):
        active = (b - a) > coarse
        if not active.any():
            break
        m = 0.5 * (a[active] + b[active])
        zm = zeta_eval.hardy_z(m, cfg)
        left = np.sign(zm) == np.sign(za[active])
        ia = np.flatnonzero(active)
        a[ia[left]] = m[left]
        za[ia[left]] = zm[left]
        b[ia[~left]] = m[~left]
        zb[ia[~left]] = zm[~left]
        exact = zm == 0
        a[ia[exact]] = m[exact]
        b[ia[exact]] = m[exact]
    else:
        raise ConvergenceError("bisection did not converge")
    x = np.where(za == zb, 0.5 * (a + b), a - za * (b - a) / np.where(za == zb, 1.0, zb - za))
    x = np.clip(x, a, b)
    for _ in range(max_iter):
        active = (b - a) > tol
        if not active.any():
            break
        ia = np.flatnonzero(active)
        half = 0.45 * tol
        lo = np.maximum(x[ia] - half, a[ia])
        hi = np.minimum(x[ia] + half, b[ia])
        zl = zeta_eval.hardy_z(lo, cfg)
        zh = zeta_eval.hardy_z(hi, cfg)
        ok = np.sign(zl) != np.sign(zh)
        a[ia[ok]], b[ia[ok]] = lo[ok], hi[ok]
        za[ia[ok]], zb[ia[ok]] = zl[ok], zh[ok]
        # secant guess missed: keep the half containing the root, re-aim
        miss = ia[~ok]
        if miss.size:
            m = 0.5 * (a[miss] + b[miss])
            zm = zeta_eval.hardy_z(m, cfg)
            left = np.sign(zm) == np.sign(za[miss])
            a[miss[left]], za[miss[left]] = m[left], zm[left]
            b[miss[~left]], zb[miss[~left]] = m[~left], zm[~left]
            x[miss] = 0.5 * (a[miss] + b[miss])
    else:
        raise ConvergenceError("secant polish did not converge")
    return np.clip(x, a, b)


def refine_zero(bracket_lo: float, bracket_hi: float, tol: float = 1e-9,
                cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Locate the zero of Z in a sign-change bracket to width ``tol``."""
    if tol < 1e-12:
        raise DomainError("tol must be >= 1e-12")
    za = zeta_eval.hardy_z(bracket_lo, cfg)
    zb = zeta_eval.hardy_z(bracket_hi, cfg)
    if za == 0:
        return float(bracket_lo)
    if zb == 0:
        return float(bracket_hi)
    if math.copysign(1, za) == math.copysign(1, zb):
        raise NoSignChangeError(f"Z has the same sign at {bracket_lo} and {bracket_hi}")
    return float(_refine_many([bracket_lo], [bracket_hi], [za], [zb], tol, cfg)[0])


@dataclass(frozen=True)
class _Chunk:
    lo: float
    hi: float
    u_lo: float
    u_hi: float


def _chunk_grid(chunk: _Chunk, density: float):
    k0 = math.floor(chunk.u_lo * density) + 1
    k1 = math.ceil(chunk.u_hi * density) - 1
    inner = _fold(np.arange(k0, k1 + 1, dtype=np.float64) / density) if k1 >= k0 else np.empty(0)
    inner = inner[(inner > chunk.lo) & (inner < chunk.hi)]
    return np.concatenate(([chunk.lo], inner, [chunk.hi]))


def _scan_chunk(chunk: _Chunk, cfg: EvalConfig, points_per_spacing: int,
                max_doublings: int, tol: float):
    expected = rvm_count(chunk.hi, cfg) - rvm_count(chunk.lo, cfg)
    found = -1
    for level in range(max_doublings + 1):
        grid = _chunk_grid(chunk, points_per_spacing * 2 ** level)
        z = zeta_eval.hardy_z(grid, cfg)
        change = np.flatnonzero(np.signbit(z[1:]) != np.signbit(z[:-1]))
        found = change.size
        if found == expected:
            gam = _refine_many(grid[change], grid[change + 1], z[change], z[change + 1], tol, cfg)
            # a root landing on the lower endpoint belongs to the previous chunk
            return gam, level
    raise IncompleteSetError(
        f"({chunk.lo}, {chunk.hi}]: {found} sign changes after {max_doublings} doublings, "
        f"Riemann-von Mangoldt expects {expected}"
    )


def _scan_chunk_star(args):
    return _scan_chunk(*args)


def scan_zeros(t_lo: float, t_hi: float, cfg: EvalConfig = DEFAULT_CONFIG, *,
               points_per_spacing: int = 4, chunk_spacings: int = 1024,
               max_doublings: int = 10, tol: float = 1e-9,
               workers: Optional[int] = None) -> ZeroSet:
    """All critical-line zeros with t_lo < gamma <= t_hi from sign changes of Z.

    The grid sits at fixed points of the coordinate theta(t)/pi, so it does
    not depend on how the range is split.  The range is cut into chunks of
    ``chunk_spacings`` mean spacings; each chunk's sign-change count must
    equal the Riemann-von Mangoldt count difference across it, doubling the
    chunk's grid until it does.  ``workers > 1`` farms chunks out to
    processes; the result is identical to the serial scan.
    """
    if not 2 <= t_lo < t_hi <= 1e6:
        raise DomainError("scan_zeros needs 2 <= t_lo < t_hi <= 1e6")
    u_lo, u_hi = (float(v) for v in _unfold([t_lo, t_hi]))
    c0 = math.floor(u_lo / chunk_spacings) + 1
    c1 = math.ceil(u_hi / chunk_spacings) - 1
    cuts_u = [c * chunk_spacings for c in range(c0, c1 + 1)]
    cuts_t = [float(v) for v in _fold(np.array(cuts_u, dtype=np.float64))] if cuts_u else []
    edges_t = [t_lo] + cuts_t + [t_hi]
    edges_u = [u_lo] + [float(v) for v in cuts_u] + [u_hi]
    chunks = [_Chunk(edges_t[i], edges_t[i + 1], edges_u[i], edges_u[i + 1])
              for i in range(len(edges_t) - 1)]
    jobs = [(c, cfg, points_per_spacing, max_doublings, tol) for c in chunks]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_chunk_star, jobs))
    else:
        results = [_scan_chunk_star(j) for j in jobs]
    gam = np.concatenate([r[0] for r in results]) if results else np.empty(0)
    gam = gam[(gam > t_lo) & (gam <= t_hi)]
    n = gam.size
    return ZeroSet(np.full(n, 0.5), gam, np.ones(n, dtype=np.int64),
                   t_lo, t_hi, Provenance.COMPUTED, True)


# -- R-vM -------------------------------------------------------------------


@dataclass(frozen=True)
class RvmReport:
    count: int
    rvm_value: float
    S_at_T: float
    passed: bool

    @property
    def pass_(self) -> bool:
        return self.passed


def rvm_consistency(zs: ZeroSet, T: float, cfg: EvalConfig = DEFAULT_CONFIG) -> RvmReport:
    """Compare the multiplicity-weighted count up to T with M(T) + 7/8 + S(T)."""
    zs.require_complete(T)
    if zs.range_lo > 14.0:
        raise IncompleteSetError("R-vM needs the zeros from the bottom of the strip")
    count = zs.count(T)
    s = zeta_eval.s_direct(T, cfg)
    value = m_main(T) + 7.0 / 8.0 + s
    ok = count == round(value) and abs(count - value) < 0.5
    return RvmReport(count, float(value), float(s), bool(ok))


# -- ingest -----------------------------------------------------------------


def _read_locator(source: str, timeout: float, retries: int) -> str:
    if source.startswith(("http://", "https://")):
        last = None
        for attempt in range(1, retries + 1):
            try:
                with urllib.request.urlopen(source, timeout=timeout) as resp:
                    return resp.read().decode("utf-8")
            except OSError as exc:
                last = exc
                if attempt < retries:
                    time.sleep(min(2.0 ** (attempt - 1), 8.0) * 0.1)
        raise FetchError(source, retries, last)
    if source.startswith("file:"):
        source = source[len("file:"):]
    return Path(source).read_text(encoding="utf-8")


def parse_ordinates(text: str) -> list[float]:
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            v = float(s)
        except ValueError:
            raise ParseError(lineno, s) from None
        if not math.isfinite(v) or v <= 0:
            raise ParseError(lineno, s, "ordinate must be positive and finite")
        if values and v <= values[-1]:
            raise MonotonicityError(lineno, v, values[-1])
        values.append(v)
    return values


def ingest_zeros(source: str, range_hint: Optional[tuple[float, float]] = None, *,
                 first_index: Optional[int] = None, timeout: float = 10.0,
                 retries: int = 3) -> ZeroSet:
    """Read a plain-text ordinate table (one per line, '#' comments allowed).

    The table is trusted; it is marked complete only when the caller states
    that it starts at the first zero (``first_index=1``).
    """
    gam = parse_ordinates(_read_locator(str(source), timeout, retries))
    if range_hint is not None:
        lo, hi = (float(v) for v in range_hint)
        if gam and (gam[0] <= lo or gam[-1] > hi):
            raise DomainError(f"ordinates fall outside the range hint ({lo}, {hi}]")
    else:
        lo, hi = 0.0, (gam[-1] if gam else 0.0)
    complete = bool(gam) and first_index == 1
    n = len(gam)
    return ZeroSet(np.full(n, 0.5), np.array(gam), np.ones(n, dtype=np.int64),
                   lo, hi, Provenance.INGESTED, complete)


# -- synthetic --------------------------------------------------------------


@dataclass(frozen=True)
class SyntheticSpec:
    n_critical: int = 0
    n_quadruple_pairs: int = 0
    n_extra_horizontal: int = 0
    mult_distribution: tuple = ((1, 1.0),)
    range: tuple = (0.0, 100.0)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mult_distribution",
                           tuple((int(m), float(w)) for m, w in self.mult_distribution))
        object.__setattr__(self, "range", tuple(float(v) for v in self.range))
        if min(self.n_critical, self.n_quadruple_pairs, self.n_extra_horizontal) < 0:
            raise ValueError("counts must be >= 0")
        if not self.mult_distribution or any(m < 1 or w <= 0 for m, w in self.mult_distribution):
            raise ValueError("mult_distribution needs multiplicities >= 1 with positive weights")
        lo, hi = self.range
        if not lo < hi:
            raise ValueError("range must satisfy lo < hi")
        if self.n_extra_horizontal and not (self.n_critical or self.n_quadruple_pairs):
            raise ValueError("extra horizontal zeros need an existing ordinate to sit on")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def synthesize(spec: SyntheticSpec) -> ZeroSet:
    """Seeded synthetic zero set, closed under beta -> 1 - beta at fixed gamma."""
    rng = np.random.default_rng(spec.seed)
    lo, hi = spec.range
    mvals = np.array([m for m, _ in spec.mult_distribution])
    mw = np.array([w for _, w in spec.mult_distribution])
    mw = mw / mw.sum()

    def draw_mult():
        return int(rng.choice(mvals, p=mw))

    def draw_beta(taken):
        while True:
            b = 0.5 + 0.49 * (1.0 - rng.random())  # (0.5, 0.99]
            if b != 0.5 and b not in taken and 1.0 - b not in taken:
                return b

    n_lines = spec.n_critical + spec.n_quadruple_pairs
    gam = np.sort(hi - (hi - lo) * rng.random(n_lines))
    # jitter exact coincidences apart; ordinates stay in (lo, hi]
    for i in range(1, gam.size):
        if gam[i] <= gam[i - 1]:
            gam[i] = np.nextafter(gam[i - 1], np.inf)
    if gam.size and gam[-1] > hi:
        raise ValueError("range too narrow for the requested number of ordinates")
    kinds = np.array([0] * spec.n_critical + [1] * spec.n_quadruple_pairs)
    rng.shuffle(kinds)

    lines: list[dict] = []
    for g, kind in zip(gam, kinds):
        zeros: dict[float, int] = {}
        if kind == 0:
            zeros[0.5] = draw_mult()
        else:
            b = draw_beta(zeros)
            zeros[b] = zeros[1.0 - b] = draw_mult()
        lines.append({"gamma": float(g), "zeros": zeros})

    for _ in range(spec.n_extra_horizontal):
        line = lines[int(rng.integers(len(lines)))]
        zeros = line["zeros"]
        if 0.5 not in zeros and rng.random() < 0.5:
            zeros[0.5] = draw_mult()
        else:
            b = draw_beta(zeros)
            zeros[b] = zeros[1.0 - b] = draw_mult()

    records = [(b, line["gamma"], m) for line in lines for b, m in line["zeros"].items()]
    return ZeroSet.from_records(records, lo, hi, Provenance.SYNTHETIC, True)


# -- cache ------------------------------------------------------------------


def _body(zs: ZeroSet) -> str:
    return "".join(f"{float(b)!r},{float(g)!r},{int(m)}\n"
                   for b, g, m in zip(zs.beta, zs.gamma, zs.mult))


def dumps_zeros(zs: ZeroSet) -> str:
    body = _body(zs)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    header = (f"{CACHE_MAGIC} {zs.provenance.value} {zs.range_lo!r} {zs.range_hi!r} "
              f"{'true' if zs.complete else 'false'} {digest}\n")
    return header + body


def loads_zeros(text: str) -> ZeroSet:
    header, _, body = text.partition("\n")
    parts = header.split(" ")
    if not parts or parts[0] != CACHE_MAGIC:
        raise CacheVersionError(f"expected header {CACHE_MAGIC!r}, got {parts[0] if parts else ''!r}")
    if len(parts) != 6:
        raise CacheVersionError("malformed cache header")
    _, prov, lo, hi, complete, digest = parts
    if hashlib.sha256(body.encode("utf-8")).hexdigest() != digest:
        raise ChecksumError("cache body does not match its sha256")
    rows = [line.split(",") for line in body.splitlines() if line]
    b = np.array([float(r[0]) for r in rows])
    g = np.array([float(r[1]) for r in rows])
    m = np.array([int(r[2]) for r in rows], dtype=np.int64)
    return ZeroSet(b, g, m, float(lo), float(hi), Provenance(prov), complete == "true")


def store_zeros(zs: ZeroSet, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = dumps_zeros(zs)
    with FileLock(str(path) + ".lock"):
        tmp = path.with_name(path.name + ".tmp")
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)


def load_zeros(path) -> ZeroSet:
    with open(path, encoding="utf-8", newline="") as fh:
        return loads_zeros(fh.read())
