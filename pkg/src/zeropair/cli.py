"""``zeropair`` command line: zeros, ingest, report, verify.

Exit codes: 0 pass, 2 Riemann-von Mangoldt consistency failure, 3 tolerance
failure, 4 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import counting_stats, gue_model, moments, zero_source
from .errors import ConfigError, IncompleteSetError, ZeroPairError
from .scale import log_scale
from .zero_source import Provenance, SyntheticSpec

EXIT_OK = 0
EXIT_CONSISTENCY = 2
EXIT_TOLERANCE = 3
EXIT_INPUT = 4

CACHE_NAME = "zeros.cache"
T_MAX_CAP = 1e6


@dataclass
class RunConfig:
    cache_dir: Path = Path("./zeropair-cache")
    t_max: float = 1000.0
    lambda_grid: tuple = (0.5, 1.0, 2.0)
    bins: int = 12
    lambda_max: float = 3.0
    lambda0: tuple = (0.05, 0.1, 0.2)
    seed: int = 0
    source: Optional[str] = None
    first_index: Optional[int] = None
    output_format: str = "csv"
    synthetic_spec: Optional[Path] = None
    workers: int = 1
    height: Optional[float] = None
    s2_norm: str = "UL"

    def validate(self) -> "RunConfig":
        if not 2 < self.t_max <= T_MAX_CAP:
            raise ConfigError(f"--t-max must lie in (2, {T_MAX_CAP:g}], got {self.t_max:g}")
        grid = [float(v) for v in self.lambda_grid]
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] <= 0:
            raise ConfigError("--lambda-grid must be a positive increasing list")
        if self.bins < 4:
            raise ConfigError("--bins must be >= 4")
        if self.output_format not in ("json", "csv"):
            raise ConfigError("--format must be json or csv")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("--seed must be a 64-bit unsigned integer")
        if self.s2_norm not in ("UL", "UlogT"):
            raise ConfigError("--s2-norm must be UL or UlogT")
        return self

    @property
    def cache_path(self) -> Path:
        return Path(self.cache_dir) / CACHE_NAME


# -- config assembly --------------------------------------------------------

_FLOAT_LIST = ("lambda_grid", "lambda0")


def _parse_list(text: str) -> tuple:
    try:
        return tuple(float(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"not a comma-separated list of numbers: {text!r}") from None


def _coerce(key: str, value):
    fields = RunConfig.__dataclass_fields__
    if key not in fields:
        raise ConfigError(f"unknown config key {key!r}")
    if value is None:
        return None
    if key in _FLOAT_LIST:
        return _parse_list(value) if isinstance(value, str) else tuple(value)
    if key in ("t_max", "lambda_max", "height"):
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{key}: not a number: {value!r}") from None
    if key in ("bins", "seed", "workers", "first_index"):
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key}: not an integer: {value!r}") from None
    if key in ("cache_dir", "synthetic_spec"):
        return Path(value)
    return value


def read_config_file(path) -> dict:
    """key = value lines, '#' comments; keys are the long flag names with '_' or '-'."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        if "=" not in s:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        k, v = (p.strip() for p in s.split("=", 1))
        k = k.replace("-", "_")
        if k == "format":
            k = "output_format"
        out[k] = _coerce(k, v.strip('"').strip("'"))
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        values.update(read_config_file(args.config))
    for key in RunConfig.__dataclass_fields__:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = _coerce(key, v)
    env = os.environ.get("ZEROPAIR_CACHE")
    if env:
        values["cache_dir"] = Path(env)
    return RunConfig(**values).validate()


# -- helpers ----------------------------------------------------------------


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_synthetic_spec(path) -> tuple[SyntheticSpec, tuple]:
    """JSON object with SyntheticSpec fields.  Optional ``declared_lo`` and
    ``declared_hi`` widen the range the set claims to be complete on beyond
    the range the ordinates are drawn from."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    declared = (data.pop("declared_lo", None), data.pop("declared_hi", None))
    if "mult_distribution" in data:
        data["mult_distribution"] = tuple(tuple(p) for p in data["mult_distribution"])
    if "range" in data:
        data["range"] = tuple(data["range"])
    try:
        spec = SyntheticSpec(**data)
        return spec, tuple(None if v is None else float(v) for v in declared)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad synthetic spec {path}: {exc}") from None


def synthetic_set(cfg: RunConfig):
    spec, (lo, hi) = load_synthetic_spec(cfg.synthetic_spec)
    zs = zero_source.synthesize(spec)
    lo = zs.range_lo if lo is None else lo
    hi = zs.range_hi if hi is None else hi
    if lo > zs.range_lo or hi < zs.range_hi:
        raise ConfigError("declared range must contain the drawn range")
    return replace(zs, range_lo=lo, range_hi=hi)


def _ingest(cfg: RunConfig):
    src = cfg.source
    return zero_source.ingest_zeros(src, first_index=cfg.first_index)


def _rvm_check(zs) -> Optional[zero_source.RvmReport]:
    if not zs.complete or zs.provenance is Provenance.SYNTHETIC or len(zs) == 0:
        return None
    if zs.provenance is Provenance.COMPUTED:
        T = zs.range_hi
    else:
        # ingested tables end on a zero; probe halfway below the last one
        T = 0.5 * (zs.gamma[-1] + zs.gamma[-2]) if len(zs) > 1 else 0.5 * (zs.gamma[0] + 2.0)
        zs = zs.truncated(T)
    return zero_source.rvm_consistency(zs, T)


# -- commands ---------------------------------------------------------------


def cmd_zeros(cfg: RunConfig) -> int:
    if cfg.source:
        zs = _ingest(cfg)
    elif cfg.synthetic_spec:
        zs = synthetic_set(cfg)
    else:
        zs = zero_source.scan_zeros(2.0, cfg.t_max, workers=cfg.workers)
    rep = _rvm_check(zs)
    zero_source.store_zeros(zs, cfg.cache_path)
    _log(f"wrote {len(zs)} zeros ({zs.provenance.value}) to {cfg.cache_path}")
    if rep is None:
        _log("R-vM check skipped (set is synthetic or not complete)")
        return EXIT_OK
    _log(f"R-vM: count={rep.count} M+7/8+S={rep.rvm_value:.6f} S={rep.S_at_T:.6f} "
         f"{'pass' if rep.passed else 'FAIL'}")
    return EXIT_OK if rep.passed else EXIT_CONSISTENCY


def cmd_ingest(cfg: RunConfig) -> int:
    if not cfg.source:
        raise ConfigError("ingest needs --source")
    zs = _ingest(cfg)
    zero_source.store_zeros(zs, cfg.cache_path)
    _log(f"wrote {len(zs)} ingested zeros to {cfg.cache_path}")
    return EXIT_OK


def _load_cache(cfg: RunConfig):
    if not cfg.cache_path.exists():
        raise FileNotFoundError(f"no cache at {cfg.cache_path}; run `zeropair zeros` first")
    return zero_source.load_zeros(cfg.cache_path)


def _rows_text(header, rows, fmt) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _hist_rows(h):
    return [(float(lo), float(hi), int(c), float(p), float(d), float(pd))
            for lo, hi, c, p, d, pd in zip(h.bin_edges[:-1], h.bin_edges[1:], h.counts,
                                           h.predicted, h.density, h.predicted_density)]


_HIST_HEADER = ["lambda_lo", "lambda_hi", "count", "predicted", "density", "predicted_density"]


def cmd_report(cfg: RunConfig) -> int:
    zs = _load_cache(cfg)
    T = cfg.height if cfg.height is not None else zs.range_hi
    out = Path(cfg.cache_dir)
    ext = cfg.output_format
    census = counting_stats.zero_census(zs, T)
    _write(out / "census.json", census.to_json())

    hist = counting_stats.correlation_histogram(zs, T, cfg.lambda_max, cfg.bins)
    _write(out / f"correlation.{ext}", _rows_text(_HIST_HEADER, _hist_rows(hist), ext))

    rep = counting_stats.repulsion_probe(zs, T, cfg.lambda0)
    _write(out / f"repulsion.{ext}", _rows_text(["lambda0", "ratio"], rep, ext))

    if T >= 100:
        for kind in ("poisson", "picket_fence"):
            ctl = gue_model.sample_control(kind, T, cfg.seed)
            h = counting_stats.correlation_histogram(ctl, T, cfg.lambda_max, cfg.bins)
            _write(out / f"control_{kind}.{ext}", _rows_text(_HIST_HEADER, _hist_rows(h), ext))
    _log(f"report at T={T:g}: N={census.N} N*={census.N_star} N(*)={census.N_circledast}")
    return EXIT_OK


def _verify_height(hi: float, lam_max: float) -> float:
    T = hi
    for _ in range(50):
        T_new = hi - lam_max / float(log_scale(T))
        if abs(T_new - T) < 1e-12:
            break
        T = T_new
    return T * (1 - 1e-12)


VERIFY_HEADER = [
    "kind", "lambda", "U", "T", "exact_N_moment", "pair_sum", "stieltjes_sum", "S_moment",
    "lem1_prediction", "prop1_residual", "lem2_residual", "boundary_bound", "ratio", "check", "pass",
]


def verify_rows(zs, cfg: RunConfig):
    """One row per (check, lambda).  Returns (rows, all_passed)."""
    grid = [float(v) for v in cfg.lambda_grid]
    if cfg.height is not None:
        T = cfg.height
    else:
        T = _verify_height(zs.range_hi, max(grid))
    zeta_like = zs.provenance is not Provenance.SYNTHETIC
    L = float(log_scale(T))
    rows = []
    ok_all = True
    nan = float("nan")
    for lam in grid:
        U = lam / L
        r = moments.proposition_report(zs, T, U)
        g = zs.gamma
        lo = max(zs.range_lo, 0.0)
        boundary_free = not np.any((g <= lo + U) | ((g > T - U) & (g <= T + U)))
        scale = max(1.0, abs(r.pair_sum))
        base = [lam, U, T, r.exact_N_moment, r.pair_sum, r.stieltjes_sum, r.S_moment,
                r.lem1_prediction, r.prop1_residual, r.lem2_residual, r.boundary_bound]

        ok = abs(r.pair_sum - r.stieltjes_sum) <= 1e-9 * scale
        rows.append(["stieltjes", *base, (r.pair_sum - r.stieltjes_sum) / scale, "rel<1e-9", ok])
        ok_all &= ok
        if boundary_free:
            ok = abs(r.prop1_residual) <= 1e-9 * scale
            rows.append(["pair_sum", *base, r.prop1_residual / scale, "rel<1e-9", ok])
        else:
            ok = abs(r.prop1_residual) <= 4 * r.boundary_bound
            rows.append(["pair_sum", *base, r.prop1_residual / r.boundary_bound, "<=4*bound", ok])
        ok_all &= ok
        if zeta_like:
            if cfg.s2_norm == "UL":
                pred = r.lem1_prediction
            else:
                pred = T / math.pi ** 2 * math.log(2 + U * math.log(T))
            ratio = r.S_moment / pred
            ok = 0.6 <= ratio <= 1.4
            rows.append([f"s2[{cfg.s2_norm}]", *base, ratio, "in[0.6,1.4]", ok])
            ok_all &= ok
    for lam in grid:
        if lam < 1:
            continue
        tri = gue_model.triangle_gue_integral(lam)
        blank = [lam, nan, nan, nan, nan, nan, nan, nan, nan, nan, nan]
        if lam >= 10:
            ok = abs(tri.asymptote_residual) < 1
            rows.append(["triangle", *blank, tri.asymptote_residual, "|res|<1", ok])
            ok_all &= ok
        ok = abs(tri.sinc2_integral - 1) < 2 / lam
        rows.append(["sinc2", *blank, tri.sinc2_integral - 1, "|I-1|<2/lambda", ok])
        ok_all &= ok
    return rows, bool(ok_all)


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.synthetic_spec:
        zs = synthetic_set(cfg)
    else:
        zs = _load_cache(cfg)
    rows, ok = verify_rows(zs, cfg)
    ext = cfg.output_format
    _write(Path(cfg.cache_dir) / f"verify.{ext}", _rows_text(VERIFY_HEADER, rows, ext))
    for r in rows:
        print(f"{'PASS' if r[-1] else 'FAIL'}  {r[0]:<10} lambda={r[1]:<8g} {r[-2]:<16} value={r[-3]:.6g}")
    print("verify:", "all checks passed" if ok else "tolerance failure")
    return EXIT_OK if ok else EXIT_TOLERANCE


COMMANDS = {"zeros": cmd_zeros, "ingest": cmd_ingest, "report": cmd_report, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--cache-dir", dest="cache_dir",
                        help="cache/output directory (ZEROPAIR_CACHE overrides)")
    common.add_argument("--t-max", dest="t_max", type=float)
    common.add_argument("--lambda-grid", dest="lambda_grid", help="comma list, e.g. 0.5,1,2")
    common.add_argument("--bins", type=int)
    common.add_argument("--lambda-max", dest="lambda_max", type=float)
    common.add_argument("--lambda0", help="comma list of repulsion probes")
    common.add_argument("--seed", type=int)
    common.add_argument("--source", help="file:PATH, PATH or http(s)://URL")
    common.add_argument("--first-index", dest="first_index", type=int,
                        help="index of the first ingested zero; 1 marks the table complete")
    common.add_argument("--format", dest="output_format", choices=("json", "csv"))
    common.add_argument("--synthetic-spec", dest="synthetic_spec")
    common.add_argument("--workers", type=int)
    common.add_argument("--height", type=float, help="evaluation height T (default: from cache)")
    common.add_argument("--s2-norm", dest="s2_norm", choices=("UL", "UlogT"),
                        help="log argument of the Delta_U S second-moment main term")

    p = argparse.ArgumentParser(prog="zeropair", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("zeros", parents=[common], help="scan or ingest zeros into the cache")
    sub.add_parser("ingest", parents=[common], help="ingest an ordinate table into the cache")
    sub.add_parser("report", parents=[common], help="census, correlation and repulsion reports")
    sub.add_parser("verify", parents=[common], help="check the moment identities and asymptotics")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except IncompleteSetError as exc:
        _log(f"zeropair: incomplete zero set: {exc}")
        return EXIT_INPUT
    except (ZeroPairError, OSError, json.JSONDecodeError) as exc:
        _log(f"zeropair: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
