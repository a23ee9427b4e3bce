import importlib
import sys

import pytest
from hypothesis import settings

from dunkl_approx import _kernels_py

settings.register_profile("repo", derandomize=True, deadline=None)
settings.load_profile("repo")


def _backends():
    out = [pytest.param(_kernels_py, id="python")]
    try:
        compiled = importlib.import_module("dunkl_approx._kernels")
    except ImportError:
        out.append(pytest.param(None, id="compiled",
                                marks=pytest.mark.skip(reason="extension not built")))
    else:
        out.append(pytest.param(compiled, id="compiled"))
    return out


@pytest.fixture(params=_backends())
def backend(request):
    return request.param


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not (mod.RESULTS or mod.REPORTS):
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
    for line in mod.REPORTS:
        terminalreporter.write_line(line)
