"""
Wave plates and Stokes rotations

Jones convention (used by every setup and test in the package): a retarder
with fast axis at angle phi from horizontal and retardance delta is
    J = R(-phi) . diag(1, exp(i*delta)) . R(phi),   R(phi) = [[cos, sin], [-sin, cos]]
acting on the lab-frame fields (b_H, b_V), with
    S2 = 2 Re(b_H* b_V),   S3 = 2 Im(b_H* b_V)
so S3 > 0 is right-circular. A half-wave plate at 22.5 deg maps S2 onto S1;
the chain half-wave plate at 22.5 deg then quarter-wave plate at -45 deg maps
S3 onto S1, carrying a right-circular beam onto horizontal.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from src.polsqueezesim.gaussian.elements import SymplecticElement, apply_element, passive_element
from src.polsqueezesim.gaussian.state import TwoModeState


class WavePlateKind(str, enum.Enum):
    HALF = "half"
    QUARTER = "quarter"

    @property
    def retardance(self) -> float:
        return math.pi if self is WavePlateKind.HALF else math.pi / 2.0


def _axis_rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, s], [-s, c]])


@dataclass(frozen=True)
class WavePlate:
    kind: WavePlateKind
    axis_angle: float

    def jones(self) -> np.ndarray:
        retarder = np.diag([1.0, np.exp(1j * WavePlateKind(self.kind).retardance)])
        return _axis_rotation(-self.axis_angle) @ retarder @ _axis_rotation(self.axis_angle)

    def element(self) -> SymplecticElement:
        label = f"{WavePlateKind(self.kind).value}-wave@{math.degrees(self.axis_angle):g}deg"
        return passive_element(label, self.jones())

    @classmethod
    def half(cls, degrees: float) -> "WavePlate":
        return cls(WavePlateKind.HALF, math.radians(degrees))

    @classmethod
    def quarter(cls, degrees: float) -> "WavePlate":
        return cls(WavePlateKind.QUARTER, math.radians(degrees))


def stokes_rotation(state: TwoModeState, plate: WavePlate) -> TwoModeState:
    """Rotate the Stokes vector, and its noise ellipsoid, with one wave plate"""
    return apply_element(state, plate.element())
