import os
from pathlib import Path

import pytest

from zeropair import zero_source

FIXTURES = Path(__file__).parent / "fixtures"
# first 10^5 zeros sit below this height (gamma_100000 = 74920.827...)
T_BIG = 75000.0


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def zeros_big(tmp_path_factory):
    """Computed zeros on (2, 75000]; ZEROPAIR_TEST_ZEROS names a reusable cache."""
    env = os.environ.get("ZEROPAIR_TEST_ZEROS")
    path = Path(env) if env else tmp_path_factory.mktemp("zeros") / "big.cache"
    if path.exists():
        zs = zero_source.load_zeros(path)
        if zs.range_lo == 2.0 and zs.range_hi == T_BIG and zs.complete:
            return zs
    zs = zero_source.scan_zeros(2.0, T_BIG)
    zero_source.store_zeros(zs, path)
    return zs


@pytest.fixture(scope="session")
def zeros_10k(zeros_big):
    return zeros_big.truncated(1e4)


# -- acceptance summary -----------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def record_acceptance(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} | {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
