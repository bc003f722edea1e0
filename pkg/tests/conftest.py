import pytest

_criteria = {}
_published = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "_criterion", None)
    if marker is None:
        return
    number, title = marker
    ok = report.passed if report.when == "call" else not report.failed
    prev = _criteria.get(number, (title, True))
    _criteria[number] = (title, prev[1] and ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        rep._criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if _published:
        terminalreporter.section("recorded values")
        for key, value in _published.items():
            terminalreporter.write_line(f"{key} = {value}")
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def publish(record_property):
    """Record a measured value in the junit properties and the terminal summary."""
    def _publish(key, value):
        _published[key] = value
        record_property(key, value)
    return _publish


@pytest.fixture(scope="session")
def sieve_2000():
    from fareygap.sieve import build_sieve
    return build_sieve(2000)


@pytest.fixture(scope="session")
def tables_2000(sieve_2000):
    from fareygap.spacing import build_prefix_tables
    return build_prefix_tables(2000, sieve_2000)


@pytest.fixture(scope="session")
def s2_table(tables_2000):
    """Exact S2(Q) for 2 <= Q <= 2000 (Moebius route)."""
    from fareygap.spacing import s2_moebius
    return {Q: s2_moebius(Q, tables=tables_2000) for Q in range(2, 2001)}
