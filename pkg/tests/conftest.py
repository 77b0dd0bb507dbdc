import numpy as np
import pytest

from antipt.linalg import expm_series
from antipt.model import SystemParams, h_apt


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def oracle_propagator(params: SystemParams, tau: float) -> np.ndarray:
    """exp(-i H_APT tau) by the series route only."""
    return expm_series(-1j * h_apt(params) * tau)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the test body sets ``state['detail']``."""
    state = {"detail": ""}
    yield state
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    ACCEPTANCE_LINES.append(
        f"{'PASS' if ok else 'FAIL'}  {request.node.name}  {state['detail']}")


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    if rep.when == "call":
        item.rep_call = rep
    return rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
