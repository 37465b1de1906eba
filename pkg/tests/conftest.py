import numpy as np
import pytest

from qqpft.battery import random_param_pair
from qqpft.grid_signal import GridSpec, QSignal2D, lp_norm

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_line():
    """Record a one-line verdict that is echoed in the terminal summary."""
    def record(criterion: int, passed: bool, detail: str) -> None:
        line = f"criterion {criterion:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def spec32():
    return GridSpec(32, 14.0)


def rand_pair(rng):
    return random_param_pair(rng)


def rand_quat_signal(spec, rng):
    return QSignal2D(spec, rng.normal(size=(spec.n, spec.n, 4)))


def unit(f):
    return f.scaled(1.0 / lp_norm(f, 2))


def rel_l2(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))
