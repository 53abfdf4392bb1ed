import pytest

from fas import group as g


@pytest.fixture
def rng():
    return g.make_rng(20240611)


@pytest.fixture(scope="module", params=g.available_backends())
def backend(request):
    prev = g.set_backend(request.param)
    yield request.param
    g.set_backend(prev)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
