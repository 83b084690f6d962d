import numpy as np
import pytest
from hypothesis import strategies as st

from noisestab import BooleanFunction

ACCEPTANCE_LINES: list[str] = []


def boolean_functions(min_n=1, max_n=6):
    """Hypothesis strategy for random truth tables."""

    @st.composite
    def build(draw):
        n = draw(st.integers(min_n, max_n))
        bits = draw(st.lists(st.booleans(), min_size=1 << n, max_size=1 << n))
        return BooleanFunction(n, np.array(bits))

    return build()


eps_values = st.floats(0.0, 0.5, allow_nan=False)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
