import pytest

from clusterdialogue.cluster import build_family


@pytest.fixture(scope="session")
def family5():
    return build_family(5)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
