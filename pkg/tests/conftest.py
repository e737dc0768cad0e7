import math
from pathlib import Path

import numpy as np
import pytest

from src.polsqueezesim.gaussian.modes import make_coherent, make_squeezed
from src.polsqueezesim.gaussian.sources import FlatSqueezing
from src.polsqueezesim.gaussian.state import TwoModeState

TESTS_DIR = Path(__file__).parent
NETLISTS_DIR = TESTS_DIR / "netlists"
SCENARIOS_DIR = TESTS_DIR.parent / "scenarios"

HALF_PI = math.pi / 2.0


@pytest.fixture
def rng():
    return np.random.default_rng(20020101)


@pytest.fixture
def grid():
    return np.array([3e6, 5e6, 7e6, 10e6])


def squeezed_pair(quad: str, v_sq: float, power: float, frequencies, theta: float = HALF_PI) -> TwoModeState:
    """Two identical minimum-uncertainty squeezed beams of ``power`` photons each"""
    amplitude = math.sqrt(power)
    mode = make_squeezed(amplitude, quad, FlatSqueezing(v_sq), frequencies)
    return TwoModeState.uncorrelated(mode, mode, theta)


@pytest.fixture
def coherent_state(grid):
    mode = make_coherent(10.0, grid)
    return TwoModeState.uncorrelated(mode, mode, HALF_PI)


@pytest.fixture
def cigar_state():
    """Amplitude squeezed 3 dB pair with alpha_H = alpha_V = 1"""
    return squeezed_pair("amplitude", 0.5, 1.0, [5e6])


@pytest.fixture
def bright_cigar_state(grid):
    return squeezed_pair("amplitude", 0.5, 1e6, grid)


@pytest.fixture
def pancake_state(grid):
    return squeezed_pair("phase", 0.5, 1e6, grid)


def random_admissible_state(rng: np.random.Generator, frequencies=(5e6,), correlated: bool = True) -> TwoModeState:
    """
    Random bright state: squeezed modes, optionally mixed by a random passive
    element so the covariance picks up H-V correlations.
    """
    from src.polsqueezesim.gaussian.elements import apply_element, passive_element

    modes = []
    for _ in range(2):
        v_sq = rng.uniform(0.2, 1.0)
        excess = rng.uniform(1.0, 2.0)
        quad = "amplitude" if rng.random() < 0.5 else "phase"
        power = rng.uniform(1e4, 1e6)
        modes.append(make_squeezed(math.sqrt(power), quad, FlatSqueezing(v_sq, excess), frequencies))
    state = TwoModeState.uncorrelated(modes[0], modes[1], rng.uniform(0.0, 2.0 * math.pi))
    if not correlated:
        return state
    a, b, c = rng.uniform(0.0, 2.0 * math.pi, size=3)
    unitary = np.array(
        [[np.exp(1j * a) * math.cos(b), np.exp(1j * c) * math.sin(b)],
         [-np.exp(-1j * c) * math.sin(b), np.exp(-1j * a) * math.cos(b)]]
    )
    return apply_element(state, passive_element("mixer", unitary))
