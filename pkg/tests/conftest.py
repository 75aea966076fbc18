import numpy as np
import pytest
from hypothesis import strategies as st

from metaloop.magma import FiniteBinarySystem
from metaloop.search import _random_square

ACCEPTANCE_LINES: list[str] = []


@st.composite
def loops(draw, min_order=1, max_order=6):
    """Random reduced loop tables (identity 0) built by randomized backtracking."""
    n = draw(st.integers(min_order, max_order))
    seed = draw(st.integers(0, 2**32 - 1))
    return FiniteBinarySystem(_random_square(n, np.random.default_rng(seed)))


@st.composite
def quasigroups(draw, min_order=1, max_order=6):
    """Loop tables with rows and columns shuffled: quasigroups, usually without identity."""
    L = draw(loops(min_order, max_order))
    n = L.order
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    r, c, s = rng.permutation(n), rng.permutation(n), rng.permutation(n)
    return FiniteBinarySystem(s[L.table[np.ix_(r, c)]], normalize=False)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def tmp_json(tmp_path):
    def make(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p
    return make
