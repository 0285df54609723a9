import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from shadowreduce.graph import parse_graph

sys.path.insert(0, os.path.dirname(__file__))

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def G(text: str):
    """Parse a graph written with '/' or newlines between directives."""
    return parse_graph(text.replace(" / ", "\n").replace("/", "\n"))


@pytest.fixture(scope="session")
def example8():
    return parse_graph((DATA / "example8.graph").read_text())


@pytest.fixture(scope="session")
def example8_path():
    return DATA / "example8.graph"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.LINES):
        terminalreporter.write_line(mod.LINES[num])
