"""
Noise ellipsoids on the Poincaré sphere
"""
import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.polsqueezesim.exceptions import DomainError
from src.polsqueezesim.stokes.engine import StokesStats
from src.polsqueezesim.ui.uiconfigfile import sim_config


class EllipsoidShape(str, enum.Enum):
    SPHERE = "Sphere"
    CIGAR = "Cigar"
    PANCAKE = "Pancake"
    OTHER = "Other"


@dataclass(frozen=True)
class NoiseEllipsoid:
    center: Tuple[float, float, float]
    semi_axes: Tuple[float, float, float]
    classification: EllipsoidShape
    frequency: float

    def to_record(self) -> dict:
        return {
            "center": [float(c) for c in self.center],
            "semi_axes": [float(a) for a in self.semi_axes],
            "classification": self.classification.value,
            "frequency_hz": float(self.frequency),
        }


def classify_axes(normalized: np.ndarray, tolerance: float) -> EllipsoidShape:
    below = int(np.sum(normalized < 1.0 - tolerance))
    above = int(np.sum(normalized > 1.0 + tolerance))
    if below == 0 and above == 0:
        return EllipsoidShape.SPHERE
    if below == 2:
        return EllipsoidShape.CIGAR
    if below == 1 and above == 2:
        return EllipsoidShape.PANCAKE
    return EllipsoidShape.OTHER


def classify_ellipsoid(stats: StokesStats, tolerance: float = None) -> NoiseEllipsoid:
    """Shape of the (S1, S2, S3) noise ellipsoid, semi-axes sqrt(V_i / <n>)"""
    tolerance = sim_config.get_ellipsoid_tolerance() if tolerance is None else tolerance
    normalized = stats.normalized[1:]
    if np.any(normalized <= 0.0):
        raise DomainError("ellipsoid semi-axes must be strictly positive")
    return NoiseEllipsoid(
        center=tuple(float(s) for s in stats.means[1:]),
        semi_axes=tuple(float(a) for a in np.sqrt(normalized)),
        classification=classify_axes(normalized, tolerance),
        frequency=stats.frequency,
    )
