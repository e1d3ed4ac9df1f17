import sys

import pytest

from tibell.digraph import complete_graph
from tibell.vertex_enum import error_set_table


@pytest.fixture(scope="session")
def k4_table(tmp_path_factory):
    """All error sets of K4, built once per session into a private cache."""
    cache = tmp_path_factory.mktemp("errsets")
    return error_set_table(complete_graph(4), cache_dir=str(cache))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
