import os

import pytest


def pytest_addoption(parser):
    parser.addoption("--long-run", action="store_true", default=False,
                     help="include long-running reproduction items")


@pytest.fixture(scope="session")
def long_run(request) -> bool:
    env = os.environ.get("TEMPORAL_ECA_LONG_RUN", "")
    return request.config.getoption("--long-run") or env not in ("", "0")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULT_LINES

    if RESULT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULT_LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
