"""Shared fixtures and the acceptance summary printed after the run."""
import numpy as np
import pytest

from kreinbounds import _kernels

_ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=sorted(_kernels.available_backends()))
def backend(request):
    """Kernel implementation module, one run per importable backend."""
    return _kernels.available_backends()[request.param]


@pytest.fixture
def acceptance():
    """Call ``acceptance(number, ok, detail)`` to register a criterion outcome."""
    def record(number, ok, detail=""):
        _ACCEPTANCE[number] = (bool(ok), detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
