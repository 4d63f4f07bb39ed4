import numpy as np
import pytest

from growthlab.grid import DIRICHLET, Grid2D, clamped_bump, sample


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20250809)


@pytest.fixture(scope="session")
def grid32():
    return Grid2D(32, DIRICHLET)


@pytest.fixture(scope="session")
def grid64():
    return Grid2D(64, DIRICHLET)


@pytest.fixture(scope="session")
def bump32(grid32):
    return clamped_bump(grid32)


@pytest.fixture(scope="session")
def bump64(grid64):
    return clamped_bump(grid64)


def sine_field(grid):
    return sample(grid, lambda X, Y: np.sin(np.pi * X) * np.sin(np.pi * Y))


# one pass/fail line per acceptance criterion, printed at the end of the run
_criterion_results: dict[str, str] = {}


def record_criterion(name: str, ok: bool, detail: str = ""):
    _criterion_results[name] = ("PASS" if ok else "FAIL") + (f" - {detail}" if detail else "")
    assert ok, f"{name}: {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criterion_results):
        terminalreporter.write_line(f"{name}: {_criterion_results[name]}")
