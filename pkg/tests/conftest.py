import pytest

from foldbase.lattice_core import reduce_slope

ACCEPTANCE_LINES = []


def S(token):
    """Slope from a short token: 'inf', '3', '-1/2'."""
    if token == "inf":
        return reduce_slope(1, 0)
    if "/" in token:
        p, q = token.split("/")
        return reduce_slope(int(p), int(q))
    return reduce_slope(int(token), 1)


def L(text):
    return [S(t) for t in text.split()]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    def record(number, ok, detail):
        line = "%s criterion %2d: %s" % ("PASS" if ok else "FAIL", number, detail)
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record
