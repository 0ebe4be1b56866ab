import pytest

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion")


@pytest.fixture
def detail(request):
    """Free-text detail shown next to an acceptance criterion in the summary."""
    lines = []
    request.node.acceptance_detail = lines
    return lines.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        label = marker.args[0]
        info = "; ".join(getattr(item, "acceptance_detail", []))
        _ACCEPTANCE[label] = ("PASS" if rep.passed else "FAIL", info)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0][2:])):
        status, info = _ACCEPTANCE[label]
        line = f"{status}  {label}"
        if info:
            line += f"  [{info}]"
        terminalreporter.write_line(line)
