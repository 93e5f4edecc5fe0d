import pytest

from gravphase.gravity import GravityEnvironment
from gravphase.species import AtomSpecies

# rounded cesium values; hyperfine splitting in Hz
CS_MASS = 2.207e-25
CS_HFS = 9.1926e9
KAPPA = 1.4748e7

_criteria = {}


@pytest.fixture
def cesium():
    return AtomSpecies("cesium", CS_MASS, hyperfine=CS_HFS, optical_wavelength=852.34727582e-9)


@pytest.fixture
def earth():
    return GravityEnvironment.uniform(9.8)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _criteria.setdefault(number, []).append((title, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _criteria[number]
        title = results[0][0]
        ok = all(passed for _, passed in results)
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}")
