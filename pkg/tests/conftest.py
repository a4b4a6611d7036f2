import pytest
from hypothesis import HealthCheck, settings

from dekpoly.christoffel import ChristoffelData
from dekpoly.dekcore import chebyshev_family, hermite_family

settings.register_profile("dekpoly", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("dekpoly")


@pytest.fixture(scope="session")
def cheb():
    return chebyshev_family()


@pytest.fixture(scope="session")
def dek():
    """Hermite source with the closed-form coefficients (exact)."""
    return hermite_family()


@pytest.fixture(scope="session")
def dek_num():
    return hermite_family("numeric", 256)


@pytest.fixture(scope="session")
def cheb_cd(cheb):
    return ChristoffelData(cheb)


@pytest.fixture(scope="session")
def dek_cd(dek):
    return ChristoffelData(dek)


@pytest.fixture(scope="session")
def dek_num_cd(dek_num):
    return ChristoffelData(dek_num)


# -- acceptance summary: one line per criterion -------------------------------
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    mark = getattr(report, "criterion", None)
    if mark is None or (report.when != "call" and report.passed):
        return
    ok, secs = _CRITERIA.get(mark, (True, 0.0))
    _CRITERIA[mark] = (ok and report.passed, secs + report.duration)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, secs = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({secs:.2f} s)")
