"""Pick the compiled kernels when importable, else the numpy fallback."""

import os

from . import _pure

BACKEND = "pure"
kernels = _pure

if not os.environ.get("ZEROPAIR_PURE"):
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        kernels = _pure

theta_series = kernels.theta_series
z_riemann_siegel = kernels.z_riemann_siegel
pair_gaps = kernels.pair_gaps
