import random

import numpy as np
import pytest
from hypothesis import strategies as st

from qsing.quiver import Quiver, QuiverSetting
from qsing.reduction import is_simple_setting

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def random_simple_setting(rng: random.Random, max_n=5, max_dim=3, max_mult=3) -> QuiverSetting:
    """Rejection-sample a simple setting with the given bounds."""
    while True:
        n = rng.randint(1, max_n)
        m = np.array([[rng.randint(0, max_mult) for _ in range(n)] for _ in range(n)], dtype=np.int64)
        s = QuiverSetting(Quiver(m), [rng.randint(1, max_dim) for _ in range(n)])
        if is_simple_setting(s):
            return s


@st.composite
def settings(draw, max_n=5, max_dim=3, max_mult=3):
    n = draw(st.integers(1, max_n))
    m = draw(st.lists(st.integers(0, max_mult), min_size=n * n, max_size=n * n))
    dims = draw(st.lists(st.integers(1, max_dim), min_size=n, max_size=n))
    return QuiverSetting(Quiver(np.array(m, dtype=np.int64).reshape(n, n)), dims)


@st.composite
def simple_settings(draw, max_n=5, max_dim=3, max_mult=3):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_simple_setting(random.Random(seed), max_n, max_dim, max_mult)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")
