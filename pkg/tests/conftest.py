import random

import pytest
from hypothesis import settings, strategies as st

from fthreehalves.exactnum import SixAdic
from fthreehalves.words import Word, evaluate

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

letters = st.sampled_from("lrLR")


def words(max_size=10, min_size=0):
    return st.text(alphabet="lrLR", min_size=min_size, max_size=max_size).map(Word)


def elements(max_size=10):
    return words(max_size).map(evaluate)


def six_adics(max_exp=6):
    return st.builds(
        lambda n, a, b: SixAdic(n, 2**a * 3**b),
        st.integers(-500, 500),
        st.integers(0, max_exp),
        st.integers(0, max_exp),
    )


def unit_points(max_exp=5):
    """Points of Z[1/6] inside [0, 1]."""
    return st.builds(
        lambda a, b, f: SixAdic(round(f * 2**a * 3**b), 2**a * 3**b),
        st.integers(0, max_exp),
        st.integers(0, max_exp),
        st.floats(0, 1),
    )


@pytest.fixture
def rng():
    return random.Random(20261016)


# one line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
