import sys
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@lru_cache(maxsize=None)
def polymorphisms(n):
    from lopoly.polymorph import enumerate_polymorphisms

    return tuple(enumerate_polymorphisms(n))


@pytest.fixture(scope="session")
def all_polys():
    """Every (LO2, LO3) polymorphism of arity 1..4, keyed by arity."""
    return {n: polymorphisms(n) for n in range(1, 5)}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
