"""Pytest configuration and fixtures."""

import sys
from pathlib import Path

import pytest

# Add src to path
ROOT = Path(__file__).parent.parent.resolve()
if str(ROOT / 'src') not in sys.path:
    sys.path.insert(0, str(ROOT / 'src'))

from coldseq.core.context import LoadProfile  # noqa: E402
from coldseq.core.fleet import Compressor, Fleet, make_fleet  # noqa: E402

# (id, q_min, q_max, p_min, p_max) in kW
BUTTERBALL_ROWS = (
    ('C1', 220.0, 3000.0, 124.0, 262.0),
    ('C2', 239.0, 2126.0, 173.0, 427.0),
    ('C3', 165.0, 1760.0, 142.0, 356.0),
    ('C4', 284.0, 2351.0, 181.0, 494.0),
)


@pytest.fixture
def butterball() -> Fleet:
    """The four-machine plant fleet."""
    return make_fleet(BUTTERBALL_ROWS)


@pytest.fixture
def c1() -> Compressor:
    """The most efficient plant machine on its own."""
    return Compressor(*BUTTERBALL_ROWS[0])


@pytest.fixture
def c1_fleet(c1) -> Fleet:
    """Single-machine fleet of C1."""
    return Fleet((c1,))


@pytest.fixture
def small_fleet() -> Fleet:
    """Two machines with every value a multiple of 10 kW."""
    return make_fleet([
        ('A', 10.0, 30.0, 5.0, 8.0),
        ('B', 20.0, 40.0, 12.0, 20.0),
    ])


@pytest.fixture
def weekly_profile() -> LoadProfile:
    """Two days of hourly load: a weekday shift pattern, then a flat weekend day."""
    day = [2100.0] * 6 + [4300.0] * 12 + [2100.0] * 6
    weekend = [2360.0] * 24
    return LoadProfile(day + weekend, step_minutes=60.0)
