import numpy as np
import pytest

from copula_lag.synthetic import write_synthetic_tetouan


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def tetouan_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "tetouan.csv"
    write_synthetic_tetouan(path)
    return path


def gaussian_pair(rho, n, seed):
    r = np.random.default_rng(seed)
    return r.multivariate_normal([0.0, 0.0], [[1.0, rho], [rho, 1.0]], n)


_ACCEPTANCE = []


@pytest.fixture
def report():
    """Collect one pass/fail line per acceptance criterion."""
    def add(criterion, ok, detail):
        _ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok
    return add


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
