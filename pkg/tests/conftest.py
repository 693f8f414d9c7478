import pytest

from oracles import slice_rank_table


@pytest.fixture(scope="session")
def sr_table():
    """Reference slice ranks of every 2x2x2 tensor over F_2 and F_3, by code."""
    return {p: slice_rank_table((2, 2, 2), p) for p in (2, 3)}


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
