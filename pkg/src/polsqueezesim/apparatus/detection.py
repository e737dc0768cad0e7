"""
Stokes detection setups

Each setup is a chain of wave plates, a polarizing beam splitter and two
photodetectors whose photocurrents are summed or subtracted. Detector
efficiency acts as one loss channel, equal in both arms, ahead of the PBS.
Electrical sum/difference have unit gain and no electronic noise floor.
"""
import enum
import logging
from dataclasses import dataclass, replace
from typing import Dict, Tuple

import numpy as np

from src.polsqueezesim.exceptions import DomainError
from src.polsqueezesim.apparatus.waveplates import WavePlate
from src.polsqueezesim.gaussian.elements import apply_element, loss_element
from src.polsqueezesim.gaussian.modes import BeamMode
from src.polsqueezesim.gaussian.state import TwoModeState

logger = logging.getLogger(__name__)


class Electrical(str, enum.Enum):
    SUM = "sum"
    DIFFERENCE = "difference"

    @property
    def sign(self) -> float:
        return 1.0 if self is Electrical.SUM else -1.0


@dataclass(frozen=True)
class DetectionSetup:
    name: str
    plates: Tuple[WavePlate, ...] = ()
    electrical: Electrical = Electrical.DIFFERENCE
    detector_efficiency: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.detector_efficiency <= 1.0:
            raise DomainError(f"detector efficiency must lie in (0, 1], got {self.detector_efficiency}")
        object.__setattr__(self, "plates", tuple(self.plates))

    def with_efficiency(self, efficiency: float) -> "DetectionSetup":
        return replace(self, detector_efficiency=efficiency)


@dataclass(frozen=True, eq=False)
class PhotocurrentStats:
    mean_current: float
    fluctuation_variance: np.ndarray
    frequencies: np.ndarray
    shot_noise: float

    def __post_init__(self):
        if np.any(np.asarray(self.fluctuation_variance) < 0.0):
            raise DomainError("photocurrent variance must be >= 0")

    @property
    def normalized(self) -> np.ndarray:
        return np.asarray(self.fluctuation_variance) / self.shot_noise


CANONICAL_SETUPS: Dict[str, DetectionSetup] = {
    "S0": DetectionSetup("S0", (), Electrical.SUM),
    "S1": DetectionSetup("S1", (), Electrical.DIFFERENCE),
    "S2": DetectionSetup("S2", (WavePlate.half(22.5),), Electrical.DIFFERENCE),
    "S3": DetectionSetup("S3", (WavePlate.half(22.5), WavePlate.quarter(-45.0)), Electrical.DIFFERENCE),
}


def canonical_setup(name: str, detector_efficiency: float = 1.0) -> DetectionSetup:
    try:
        setup = CANONICAL_SETUPS[name.upper()]
    except KeyError:
        raise DomainError(f"unknown setup '{name}', expected one of {', '.join(CANONICAL_SETUPS)}") from None
    return setup.with_efficiency(detector_efficiency)


def combine_on_pbs(beam_a: BeamMode, beam_b: BeamMode, theta: float) -> TwoModeState:
    """Overlap two beams with orthogonal polarization: beam_a -> H, beam_b -> V"""
    if not beam_a.same_grid(beam_b):
        raise DomainError("beams combined on a PBS must share one frequency grid")
    return TwoModeState.uncorrelated(beam_a, beam_b, theta)


def prepare_detected_state(setup: DetectionSetup, state: TwoModeState) -> TwoModeState:
    """State arriving at the PBS: after the plates and the detector loss"""
    for plate in setup.plates:
        state = apply_element(state, plate.element())
    if setup.detector_efficiency < 1.0:
        state = apply_element(state, loss_element(setup.detector_efficiency, "detector"))
    return state


def photocurrent_coefficients(state: TwoModeState, electrical: Electrical) -> np.ndarray:
    """Linear form of the summed/differenced photocurrent fluctuation"""
    return np.array([state.alpha_h, 0.0, electrical.sign * state.alpha_v, 0.0])


def measure(setup: DetectionSetup, state: TwoModeState) -> PhotocurrentStats:
    detected = prepare_detected_state(setup, state)
    electrical = Electrical(setup.electrical)
    coefficients = photocurrent_coefficients(detected, electrical)
    variance = np.einsum("i,fij,j->f", coefficients, detected.covariance, coefficients)
    mean = detected.alpha_h**2 + electrical.sign * detected.alpha_v**2
    logger.debug("Measured %s: mean %.6g", setup.name, mean)
    return PhotocurrentStats(float(mean), variance, state.frequencies, detected.photon_number)


def mix_toward_shot_noise(variance, shot_noise: float, efficiency: float):
    """Effect of a loss eta on a photocurrent variance measured ideally: eta^2 V + eta (1 - eta) <n>"""
    if not 0.0 < efficiency <= 1.0:
        raise DomainError(f"efficiency must lie in (0, 1], got {efficiency}")
    return efficiency**2 * np.asarray(variance, dtype=float) + efficiency * (1.0 - efficiency) * shot_noise
