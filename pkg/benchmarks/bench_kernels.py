"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--scan-to 30000]

Each kernel is run on identical inputs through both backends; the outputs
are compared before any timing is reported.  The two backends round
differently, so scanned ordinates agree to the refinement tolerance rather
than bit for bit.
"""

from __future__ import annotations

import argparse
import time
from contextlib import contextmanager

import numpy as np

from zeropair import _backend, _pure, zero_source

try:
    from zeropair import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


@contextmanager
def backend(mod):
    saved = (_backend.theta_series, _backend.z_riemann_siegel, _backend.pair_gaps)
    _backend.theta_series, _backend.z_riemann_siegel, _backend.pair_gaps = (
        mod.theta_series, mod.z_riemann_siegel, mod.pair_gaps)
    try:
        yield
    finally:
        _backend.theta_series, _backend.z_riemann_siegel, _backend.pair_gaps = saved


def cases(n_points):
    rng = np.random.default_rng(0)
    t_theta = np.sort(rng.uniform(10.0, 1e5, n_points))
    t_z = np.sort(rng.uniform(600.0, 1e5, n_points // 2))
    g = np.sort(rng.uniform(0.0, 1e5, n_points // 4)).astype(np.float64)
    m = np.ones(g.size, dtype=np.int64)
    return [
        ("theta_series", lambda k: k.theta_series(t_theta)),
        ("z_riemann_siegel", lambda k: k.z_riemann_siegel(t_z, 3)),
        ("pair_gaps", lambda k: k.pair_gaps(g, m, 3.0)),
    ]


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=400_000)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--scan-to", type=float, default=2e4, help="end-to-end scan height")
    args = p.parse_args(argv)

    if _kernels is None:
        print("compiled kernels are not built; only the fallback is available")
        return 1

    print(f"{'kernel':<18} {'compiled [s]':>13} {'pure [s]':>10} {'speedup':>8}")
    for name, run in cases(args.points):
        a, b = run(_kernels), run(_pure)
        a, b = (a if isinstance(a, tuple) else (a,)), (b if isinstance(b, tuple) else (b,))
        assert all(np.allclose(x, y, rtol=1e-12, atol=1e-9) for x, y in zip(a, b)), name
        tc = best_of(lambda: run(_kernels), args.repeat)
        tp = best_of(lambda: run(_pure), args.repeat)
        print(f"{name:<18} {tc:>13.4f} {tp:>10.4f} {tp / tc:>7.2f}x")

    timings = {}
    for label, mod in (("compiled", _kernels), ("pure", _pure)):
        with backend(mod):
            t0 = time.perf_counter()
            zs = zero_source.scan_zeros(2.0, args.scan_to)
            timings[label] = (time.perf_counter() - t0, zs.gamma)
    gc, gp = timings["compiled"][1], timings["pure"][1]
    dg = float(np.max(np.abs(gc - gp))) if gc.size == gp.size else float("nan")
    tc, tp = timings["compiled"][0], timings["pure"][0]
    print(f"{'scan (2, ' + format(args.scan_to, 'g') + ']':<18} {tc:>13.4f} {tp:>10.4f} {tp / tc:>7.2f}x"
          f"   zeros {gc.size} vs {gp.size}, max |dgamma| = {dg:.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
