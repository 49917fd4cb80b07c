import pytest

from curvewire.geometry import reference_double_gaussian, reference_single_gaussian
from curvewire.sweep import SweepConfig, run_spectrum

ACCEPTANCE_LINES = []


def record_criterion(name, passed, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  criterion {name}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def single_gaussian():
    return reference_single_gaussian()


@pytest.fixture(scope="session")
def single_spectrum(single_gaussian):
    return run_spectrum(SweepConfig(profile=single_gaussian, threads=4))


@pytest.fixture(scope="session")
def double_pairs():
    """Even/odd double Gaussians per shift, padded to a common domain."""
    pairs = {}
    for s in (0.15, 0.25):
        pad = max(reference_double_gaussian(s, par).padding for par in ("even", "odd"))
        pairs[s] = {par: reference_double_gaussian(s, par, padding=pad) for par in ("even", "odd")}
    return pairs
