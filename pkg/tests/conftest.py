from __future__ import annotations

import pytest

from fiducial_landing.config import load_config
from fiducial_landing.runner import run_scenario
from fiducial_landing.suite import case_study, nominal_suite

CRITERIA = {
    1: "geometry oracle equivalence",
    2: "transition threshold fidelity",
    3: "nominal landing suite",
    4: "obscuration case study",
    5: "invariant sweeps",
    6: "determinism",
    7: "batch statistics",
}

_results: dict[int, tuple[bool, str]] = {}
_details: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    n = marker.args[0]
    ok = rep.passed
    prev_ok = _results.get(n, (True, ""))[0]
    if rep.when == "setup" and ok:
        return
    _results[n] = (prev_ok and ok, _details.get(n, ""))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n not in _results:
            continue
        ok, _ = _results[n]
        detail = _details.get(n, "")
        terminalreporter.write_line(
            f"criterion {n} ({CRITERIA[n]}): {'PASS' if ok else 'FAIL'}" + (f" - {detail}" if detail else ""))


@pytest.fixture
def detail():
    """Attach a one-line measurement to an acceptance criterion's summary line."""
    def _set(n: int, text: str):
        _details[n] = text if n not in _details else _details[n] + "; " + text
    return _set


@pytest.fixture(scope="session")
def sim_config():
    return load_config()


@pytest.fixture(scope="session")
def nominal_runs(sim_config):
    import time
    t0 = time.perf_counter()
    records = [run_scenario(s, sim_config) for s in nominal_suite()]
    return records, time.perf_counter() - t0


@pytest.fixture(scope="session")
def case_study_run(sim_config):
    return run_scenario(case_study(), sim_config)
