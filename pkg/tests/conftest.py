import pytest

from faultloc.formula.solver import BACKEND

BACKENDS = ["python"] + (["cython"] if BACKEND == "cython" else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.REPORT:
        terminalreporter.section("acceptance criteria")
        terminalreporter.write_line(f"SAT backend: {BACKEND}")
        for line in sorted(mod.REPORT):
            terminalreporter.write_line(line)
