import gmpy2
import pytest

from toeplitz_spectra import PrecisionContext, Symbol
from toeplitz_spectra.presets import BILAPLACIAN, SEVEN_BAND, SHIFTED_BILAPLACIAN, TRIDIAGONAL


def pytest_addoption(parser):
    parser.addoption("--run-long", action="store_true", default=False,
                     help="run full-scale reproductions (hours)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-long"):
        return
    skip = pytest.mark.skip(reason="full-scale run; pass --run-long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def ctx128():
    return PrecisionContext(128)


@pytest.fixture
def ctx53():
    return PrecisionContext(53)


@pytest.fixture
def tridiagonal():
    def make(ctx):
        return Symbol.from_mapping(TRIDIAGONAL, ctx)
    return make


@pytest.fixture
def bilaplacian():
    def make(ctx):
        return Symbol.from_mapping(BILAPLACIAN, ctx)
    return make


@pytest.fixture
def shifted_bilaplacian():
    def make(ctx):
        return Symbol.from_mapping(SHIFTED_BILAPLACIAN, ctx)
    return make


@pytest.fixture
def seven_band():
    def make(ctx):
        return Symbol.from_mapping(SEVEN_BAND, ctx)
    return make


def closed_form_tridiagonal(n, ctx):
    """2 - 2 sqrt(2) cos(j pi/(n+1)), ascending."""
    with ctx.active():
        pi = gmpy2.const_pi()
        vals = [2 - 2 * gmpy2.sqrt(gmpy2.mpfr(2)) * gmpy2.cos(j * pi / (n + 1)) for j in range(1, n + 1)]
    return sorted(vals)


# -- acceptance report -------------------------------------------------------

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record ``(number, measured)`` for the one-line acceptance report."""
    def record(number, measured):
        _CRITERIA[request.node.nodeid] = (number, measured)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    status = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when == "call" or key != "passed":
                status[rep.nodeid] = "PASS" if key == "passed" else "FAIL"
    terminalreporter.section("acceptance criteria")
    for nodeid, (number, measured) in sorted(_CRITERIA.items(), key=lambda kv: str(kv[1][0])):
        terminalreporter.write_line(f"criterion {number}: {status.get(nodeid, 'FAIL')}  {measured}")
