"""
Single polarization modes of a linearized Gaussian beam

A mode is a real coherent amplitude alpha (photon-flux normalized, so alpha**2
is the mean photon number) plus the amplitude (X+) and phase (X-) quadrature
noise variances at each sideband frequency. Variances are normalized to one
for a coherent beam.
"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from src.polsqueezesim.exceptions import AdmissibilityError, DomainError
from src.polsqueezesim.guardrail.validation_service import validation_service

logger = logging.getLogger(__name__)


class Quadrature(str, enum.Enum):
    AMPLITUDE = "amplitude"
    PHASE = "phase"

    @property
    def offset(self) -> int:
        """Index of this quadrature inside a mode's (X+, X-) pair"""
        return 0 if self is Quadrature.AMPLITUDE else 1

    @property
    def symbol(self) -> str:
        return "+" if self is Quadrature.AMPLITUDE else "-"


# Covariance index order used everywhere in the package.
QUADRATURE_ORDER: Tuple[str, ...] = ("X_H+", "X_H-", "X_V+", "X_V-")


def as_grid(frequencies: Iterable[float]) -> np.ndarray:
    """Validate a sideband frequency grid: non-empty, finite, strictly increasing"""
    grid = np.atleast_1d(np.asarray(frequencies, dtype=float))
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("frequency grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(grid)):
        raise DomainError("frequency grid has non-finite entries")
    if np.any(grid < 0.0):
        raise DomainError("sideband frequencies must be non-negative")
    if grid.size > 1 and np.any(np.diff(grid) <= 0.0):
        raise DomainError("frequency grid must be strictly increasing")
    return grid


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class BeamMode:
    amplitude: float
    frequencies: np.ndarray
    v_plus: np.ndarray
    v_minus: np.ndarray

    def __post_init__(self):
        if not math.isfinite(self.amplitude) or self.amplitude < 0.0:
            raise DomainError(f"coherent amplitude must be a finite value >= 0, got {self.amplitude}")
        grid = as_grid(self.frequencies)
        v_plus = np.broadcast_to(np.asarray(self.v_plus, dtype=float), grid.shape)
        v_minus = np.broadcast_to(np.asarray(self.v_minus, dtype=float), grid.shape)
        is_valid, error_msg = validation_service.validate_admissibility(v_plus, v_minus)
        if not is_valid:
            raise AdmissibilityError(error_msg)
        object.__setattr__(self, "amplitude", float(self.amplitude))
        object.__setattr__(self, "frequencies", _frozen(grid))
        object.__setattr__(self, "v_plus", _frozen(v_plus))
        object.__setattr__(self, "v_minus", _frozen(v_minus))

    @property
    def power(self) -> float:
        """Mean photon number alpha**2 carried by the mode"""
        return self.amplitude**2

    @property
    def noise_spectrum(self) -> Dict[float, Tuple[float, float]]:
        return {
            float(f): (float(vp), float(vm))
            for f, vp, vm in zip(self.frequencies, self.v_plus, self.v_minus)
        }

    def variance(self, quadrature: Quadrature) -> np.ndarray:
        return self.v_plus if quadrature is Quadrature.AMPLITUDE else self.v_minus

    def is_coherent(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.v_plus, 1.0, atol=tol) and np.allclose(self.v_minus, 1.0, atol=tol))

    def same_grid(self, other: "BeamMode") -> bool:
        return self.frequencies.shape == other.frequencies.shape and bool(
            np.array_equal(self.frequencies, other.frequencies)
        )


def make_coherent(amplitude: float, frequencies: Iterable[float]) -> BeamMode:
    """Coherent (or, for amplitude 0, vacuum) mode with unit quadrature noise"""
    if amplitude < 0.0:
        raise DomainError(f"coherent amplitude must be >= 0, got {amplitude}")
    grid = as_grid(frequencies)
    ones = np.ones_like(grid)
    return BeamMode(amplitude, grid, ones, ones)


def make_squeezed(
    amplitude: float,
    squeezed_quadrature: Quadrature,
    spectrum_model,
    frequencies: Optional[Iterable[float]] = None,
) -> BeamMode:
    """
    Quadrature squeezed mode.

    The spectrum model supplies (V_sq, V_anti) per frequency; the squeezed
    quadrature carries V_sq and the orthogonal one V_anti. Models that carry
    their own grid (tabulated data) may be used without ``frequencies``.
    """
    if amplitude < 0.0:
        raise DomainError(f"coherent amplitude must be >= 0, got {amplitude}")
    if frequencies is None:
        frequencies = getattr(spectrum_model, "frequencies", None)
        if frequencies is None:
            raise DomainError("a frequency grid is required for this spectrum model")
    grid = as_grid(frequencies)
    v_sq, v_anti = spectrum_model.evaluate(grid)
    v_sq = np.broadcast_to(np.asarray(v_sq, dtype=float), grid.shape)
    v_anti = np.broadcast_to(np.asarray(v_anti, dtype=float), grid.shape)
    if np.any(v_sq <= 0.0) or np.any(v_sq > 1.0 + 1e-12):
        raise DomainError("squeezed variance must lie in (0, 1]")
    if np.any(v_sq * v_anti < 1.0 - validation_service.admissibility_tolerance):
        raise AdmissibilityError(
            f"spectrum model gives V_sq*V_anti = {float((v_sq * v_anti).min()):.6g} < 1"
        )
    if Quadrature(squeezed_quadrature) is Quadrature.AMPLITUDE:
        return BeamMode(amplitude, grid, v_sq, v_anti)
    return BeamMode(amplitude, grid, v_anti, v_sq)


def attenuate_mode(mode: BeamMode, efficiency: float) -> BeamMode:
    """Pass a single mode through a loss channel of transmission ``efficiency``"""
    if not 0.0 < efficiency <= 1.0:
        raise DomainError(f"efficiency must lie in (0, 1], got {efficiency}")
    return BeamMode(
        math.sqrt(efficiency) * mode.amplitude,
        mode.frequencies,
        efficiency * mode.v_plus + (1.0 - efficiency),
        efficiency * mode.v_minus + (1.0 - efficiency),
    )


def lossy_efficiency_chain(losses: Sequence[float]) -> float:
    """Overall transmission of independent loss sources, prod(1 - loss_i)"""
    efficiency = 1.0
    for loss in losses:
        if not 0.0 <= loss < 1.0:
            raise DomainError(f"each loss must lie in [0, 1), got {loss}")
        efficiency *= 1.0 - loss
    return efficiency


def detected_variance(source_variance, efficiency: float):
    """Variance seen after a loss channel: eta * V + (1 - eta)"""
    if not 0.0 < efficiency <= 1.0:
        raise DomainError(f"efficiency must lie in (0, 1], got {efficiency}")
    return efficiency * np.asarray(source_variance, dtype=float) + (1.0 - efficiency)
