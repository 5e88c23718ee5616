from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fpf.core import Ambient, PointSet

DATA = Path(__file__).parent / "data"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SMALL_PRIMES = (2, 3, 5, 7)

# PASS/FAIL lines from tests/test_acceptance.py, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


@st.composite
def ambients(draw, primes=SMALL_PRIMES, dims=(1, 2, 3)):
    p = draw(st.sampled_from(primes))
    d = draw(st.sampled_from(dims))
    return Ambient(p, d)


@st.composite
def point_sets(draw, ambient=None, primes=SMALL_PRIMES, dims=(1, 2, 3), nonempty=True, max_size=None):
    if ambient is None:
        ambient = draw(ambients(primes, dims))
    n = ambient.cells
    cap = n if max_size is None else min(n, max_size)
    cells = draw(st.sets(st.integers(0, n - 1), min_size=1 if nonempty else 0, max_size=cap))
    return PointSet(ambient, tuple(sorted(cells)))


@st.composite
def vectors(draw, ambient, nonzero=False):
    idx = draw(st.integers(1 if nonzero else 0, ambient.cells - 1))
    return ambient.vector_at(idx)


@pytest.fixture
def data_dir() -> Path:
    return DATA
