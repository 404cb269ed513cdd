import pytest

from aptc_timed import terms as T


@pytest.fixture
def cfg():
    """drt, alphabet {a, b, c, i}, γ(a, b) = c."""
    return T.AlgebraConfig.make("abci", {("a", "b"): "c"})


@pytest.fixture
def dat_cfg():
    return T.AlgebraConfig.make("abci", {("a", "b"): "c"}, mode=T.DAT)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
