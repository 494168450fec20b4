import csv
import json
import shutil
import subprocess
import sys

import pytest

from zeropair import cli, zero_source
from zeropair.errors import ConfigError


@pytest.fixture(autouse=True)
def _no_env_cache(monkeypatch):
    monkeypatch.delenv("ZEROPAIR_CACHE", raising=False)


@pytest.fixture(scope="module")
def cache_1000(tmp_path_factory):
    d = tmp_path_factory.mktemp("c1000")
    assert cli.main(["zeros", "--t-max", "1000", "--cache-dir", str(d)]) == 0
    return d


def test_zeros_1000(cache_1000):
    zs = zero_source.load_zeros(cache_1000 / cli.CACHE_NAME)
    assert len(zs) == 649 and zs.complete


def test_zeros_from_fixture(tmp_path, fixtures_dir):
    rc = cli.main(["zeros", "--source", f"file:{fixtures_dir / 'first3.txt'}", "--cache-dir", str(tmp_path)])
    assert rc == 0
    assert len(zero_source.load_zeros(tmp_path / cli.CACHE_NAME)) == 3


def test_ingest_complete_table_checks_rvm(tmp_path, cache_1000):
    zs = zero_source.load_zeros(cache_1000 / cli.CACHE_NAME)
    table = tmp_path / "table.txt"
    table.write_text("".join(f"{float(g)!r}\n" for g in zs.gamma[:100]))
    args = ["zeros", "--source", str(table), "--first-index", "1", "--cache-dir", str(tmp_path)]
    assert cli.main(args) == 0
    table.write_text("".join(f"{float(g)!r}\n" for i, g in enumerate(zs.gamma[:100]) if i != 50))
    assert cli.main(args) == cli.EXIT_CONSISTENCY


def test_t_max_cap(tmp_path):
    assert cli.main(["zeros", "--t-max", "2e6", "--cache-dir", str(tmp_path)]) == cli.EXIT_INPUT


def test_bad_source_is_input_error(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("abc\n")
    assert cli.main(["ingest", "--source", str(bad), "--cache-dir", str(tmp_path)]) == cli.EXIT_INPUT


def test_report_files(cache_1000, tmp_path):
    d = tmp_path / "r"
    shutil.copytree(cache_1000, d)
    assert cli.main(["report", "--cache-dir", str(d)]) == 0
    census = json.loads((d / "census.json").read_text())
    assert census["N_star"] == census["N"] == census["N_zero"] == 649
    rows = list(csv.reader((d / "correlation.csv").open()))
    assert rows[0][3] == "predicted" and len(rows) == 13
    assert float(rows[-1][1]) == 3.0
    assert (d / "repulsion.csv").read_text().startswith("lambda0,ratio\n")


def test_report_json_format(cache_1000, tmp_path):
    d = tmp_path / "j"
    shutil.copytree(cache_1000, d)
    assert cli.main(["report", "--cache-dir", str(d), "--format", "json", "--bins", "6"]) == 0
    assert len(json.loads((d / "correlation.json").read_text())) == 6


def test_report_missing_cache(tmp_path):
    assert cli.main(["report", "--cache-dir", str(tmp_path / "none")]) == cli.EXIT_INPUT


def test_report_synthetic_census_identity(tmp_path, fixtures_dir):
    spec = fixtures_dir / "synthetic_boundary_free.json"
    assert cli.main(["zeros", "--synthetic-spec", str(spec), "--cache-dir", str(tmp_path)]) == 0
    assert cli.main(["report", "--cache-dir", str(tmp_path)]) == 0
    c = json.loads((tmp_path / "census.json").read_text())
    assert c["N_circledast"] == c["N_star"] + c["N_star_offline"] + c["N_ominus"]
    assert c["N_circledast"] > c["N_star"] > c["N"] - 1


def test_verify_synthetic_boundary_free(tmp_path, fixtures_dir):
    spec = fixtures_dir / "synthetic_boundary_free.json"
    rc = cli.main(["verify", "--synthetic-spec", str(spec), "--height", "100",
                   "--lambda-grid", "0.5,1,1.5", "--cache-dir", str(tmp_path)])
    assert rc == 0
    rows = list(csv.DictReader((tmp_path / "verify.csv").open()))
    pair = [r for r in rows if r["kind"] == "pair_sum"]
    assert len(pair) == 3 and all(r["check"] == "rel<1e-9" and r["pass"] == "True" for r in pair)


def test_verify_truncated_cache(tmp_path, cache_1000):
    zs = zero_source.load_zeros(cache_1000 / cli.CACHE_NAME)
    zero_source.store_zeros(zs.truncated(500.0), tmp_path / cli.CACHE_NAME)
    assert cli.main(["verify", "--cache-dir", str(tmp_path), "--height", "900"]) == cli.EXIT_INPUT


def test_verify_computed_literal_s2_norm(tmp_path, zeros_10k):
    # the literal log(2 + U L) normalisation overshoots at desk heights; see README
    zero_source.store_zeros(zeros_10k, tmp_path / cli.CACHE_NAME)
    rc = cli.main(["verify", "--cache-dir", str(tmp_path), "--lambda-grid", "2"])
    rows = list(csv.DictReader((tmp_path / "verify.csv").open()))
    s2 = [r for r in rows if r["kind"].startswith("s2")][0]
    assert rc == (0 if s2["pass"] == "True" else cli.EXIT_TOLERANCE)
    assert all(r["pass"] == "True" for r in rows if not r["kind"].startswith("s2"))


def test_verify_computed_logT_form(tmp_path, zeros_10k):
    zero_source.store_zeros(zeros_10k, tmp_path / cli.CACHE_NAME)
    rc = cli.main(["verify", "--cache-dir", str(tmp_path), "--lambda-grid", "0.5,1,2",
                   "--s2-norm", "UlogT"])
    assert rc == 0


def test_env_overrides_cache_dir(tmp_path, monkeypatch, fixtures_dir):
    monkeypatch.setenv("ZEROPAIR_CACHE", str(tmp_path / "env"))
    rc = cli.main(["zeros", "--source", str(fixtures_dir / "first3.txt"),
                   "--cache-dir", str(tmp_path / "flag")])
    assert rc == 0
    assert (tmp_path / "env" / cli.CACHE_NAME).exists()
    assert not (tmp_path / "flag").exists()


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# run settings\nt_max = 500\nbins = 8\nlambda-grid = 0.5, 1\nformat = json\n")
    args = cli.build_parser().parse_args(["report", "--config", str(cfg), "--bins", "6"])
    rc = cli.build_config(args)
    assert rc.t_max == 500 and rc.bins == 6 and rc.lambda_grid == (0.5, 1.0)
    assert rc.output_format == "json"


def test_config_validation():
    with pytest.raises(ConfigError):
        cli.RunConfig(lambda_grid=(1.0, 0.5)).validate()
    with pytest.raises(ConfigError):
        cli.RunConfig(bins=3).validate()
    with pytest.raises(ConfigError):
        cli._coerce("nonsense", "1")


def test_report_deterministic(cache_1000, tmp_path):
    outs = []
    for name in ("a", "b"):
        d = tmp_path / name
        shutil.copytree(cache_1000, d)
        assert cli.main(["report", "--cache-dir", str(d), "--seed", "5"]) == 0
        outs.append({p.name: p.read_bytes() for p in sorted(d.iterdir()) if not p.name.endswith(".lock")})
    assert outs[0] == outs[1]


def test_console_script(tmp_path, fixtures_dir):
    out = subprocess.run([sys.executable, "-m", "zeropair.cli", "zeros", "--source",
                          str(fixtures_dir / "first3.txt"), "--cache-dir", str(tmp_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "wrote 3 zeros" in out.stderr
