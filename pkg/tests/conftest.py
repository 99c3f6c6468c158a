import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qutrit_lgi.lgi import EvolutionConfig  # noqa: E402
from qutrit_lgi.presets import get_preset  # noqa: E402


@pytest.fixture
def set1():
    """Set-1 dynamics; theta2 is meant to be overridden."""
    return get_preset("fig2").config()


@pytest.fixture
def set2():
    return get_preset("fig3").config()


@pytest.fixture
def identity_cfg():
    return EvolutionConfig.from_angles([0.0] * 6)


def pi_angles(*xs):
    return [x * math.pi for x in xs]
