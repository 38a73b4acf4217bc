import random
from functools import lru_cache

import pytest

from rochehecke.cosets import CosetEnumerator, auto_truncation
from rochehecke.group import build_context


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@lru_cache(maxsize=None)
def context(q, N=2, profile=2, c=None):
    return build_context(q, N, profile, c, allow_nonregular=True)


@lru_cache(maxsize=None)
def enumerator(q, N=2, profile=2, box=1, extra=0):
    ctx = context(q, N, profile)
    return CosetEnumerator(ctx, auto_truncation(ctx, box) + extra)


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def ctx32():
    """GL_2, q=3, both conductors 2: the running example."""
    return context(3)


@pytest.fixture(scope="session")
def enum32():
    return enumerator(3)
