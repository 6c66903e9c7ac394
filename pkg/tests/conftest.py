import pytest

_ACCEPTANCE = {}


class _Recorder:
    def __init__(self, key):
        self.key = key
        self.lines = []
        self.ok = True

    def check(self, label, ok, detail=""):
        self.ok = self.ok and bool(ok)
        self.lines.append(f"    {'ok  ' if ok else 'FAIL'} {label}: {detail}")
        return bool(ok)


@pytest.fixture
def criterion(request):
    """Collects sub-checks of one acceptance criterion for the summary printed at the end."""
    rec = _Recorder(request.node.name)
    yield rec
    failed = getattr(request.node, "rep_call", None)
    passed = rec.ok and failed is not None and failed.passed
    _ACCEPTANCE[rec.key] = (passed, rec.lines)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        passed, lines = _ACCEPTANCE[key]
        tr.write_line(f"{'PASS' if passed else 'FAIL'}  {key}")
        for line in lines:
            tr.write_line(line)
