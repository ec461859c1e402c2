import functools

import pytest

from cxgmdl import builders as b
from cxgmdl.lexicalize import lexicalize


@functools.lru_cache(maxsize=None)
def number_pair(base, ascending=False):
    return (b.build_number_construction(base, ascending),
            b.build_number_lexicalized(base, ascending))


@functools.lru_cache(maxsize=None)
def lpp_pair():
    g = b.build_lpp_construction(b.fixture_lexicon())
    return g, lexicalize(g)


def to_int(tokens, base):
    # independent oracle: Python's own base conversion where it applies
    if base <= 36:
        return int("".join(tokens), base)
    n = 0
    for t in tokens:
        n = n * base + int(t)
    return n


@pytest.fixture
def spec():
    return b.fixture_lexicon()


@pytest.fixture
def lpp():
    return lpp_pair()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
