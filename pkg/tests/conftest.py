import pytest

from gkstab.ktheory import get_block

CORE_TYPES = ["A1", "A2", "A3", "B2", "G2"]

CRITERIA = {
    1: "A2 GK table",
    2: "A2 charges and Taylor components",
    3: "oracle equality",
    4: "Weyl vanishing identity",
    5: "W-equivariance",
    6: "harmonicity and mean value",
    7: "two-step filtration",
    8: "K0 shift shadows",
    9: "axiom-1 positivity",
    10: "stability scan",
    11: "KL self-consistency",
    12: "end-to-end verify",
}

_outcomes: dict[int, list[str]] = {}


@pytest.fixture(scope="session")
def block():
    return get_block


@pytest.fixture(scope="session")
def a2():
    return get_block("A2")


@pytest.fixture(scope="session")
def a1():
    return get_block("A1")


@pytest.fixture(scope="session")
def a3():
    return get_block("A3")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(crit, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        results = _outcomes.get(n)
        if not results:
            continue
        if all(r == "passed" for r in results):
            verdict = "PASS"
        elif any(r == "failed" for r in results):
            verdict = "FAIL"
        else:
            verdict = "SKIP"
        terminalreporter.write_line(f"criterion {n:2d} [PRIMARY] {CRITERIA[n]}: {verdict}")
