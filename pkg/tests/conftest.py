import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def brute_force_words(ifs, max_len):
    """Every word of length 1..max_len, by itertools.product."""
    n = len(ifs)
    for length in range(1, max_len + 1):
        yield from itertools.product(range(n), repeat=length)


def exact_lip(ifs, word):
    return Fraction(1) if not word else np.prod([Fraction(ifs.maps[i].ratio) for i in word])


@pytest.fixture
def golden_ifs():
    from inhomdim import dyadic_ifs
    return dyadic_ifs(1, [(1, 0), (2, 2)])


@pytest.fixture
def quadrant():
    from inhomdim.verify import quadrant_ifs
    return quadrant_ifs()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
