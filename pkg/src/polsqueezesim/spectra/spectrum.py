"""
Noise spectra on a sideband frequency grid
"""
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from src.polsqueezesim.apparatus.calibration import ShotNoiseCalibration
from src.polsqueezesim.exceptions import DomainError
from src.polsqueezesim.gaussian.modes import _frozen, as_grid


@dataclass(frozen=True)
class SpectrumMeta:
    rbw_hz: Optional[float] = None
    vbw_hz: Optional[float] = None
    averages: int = 1
    darknoise_margin_db: Optional[float] = None
    calibration: Optional[ShotNoiseCalibration] = None
    label: str = ""


@dataclass(frozen=True, eq=False)
class NoiseSpectrum:
    """
    Variance per frequency. ``values`` are linear variances unless ``in_db``
    is set, in which case they are dB relative to ``reference``.
    """

    frequencies: np.ndarray
    values: np.ndarray
    reference: np.ndarray
    meta: SpectrumMeta = field(default_factory=SpectrumMeta)
    in_db: bool = False

    def __post_init__(self):
        grid = as_grid(self.frequencies)
        values = np.asarray(self.values, dtype=float)
        if values.shape != grid.shape:
            raise DomainError(f"spectrum needs one value per frequency ({grid.size}), got {values.shape}")
        reference = np.broadcast_to(np.asarray(self.reference, dtype=float), grid.shape)
        object.__setattr__(self, "frequencies", _frozen(grid))
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "reference", _frozen(reference))

    @property
    def resolution(self) -> float:
        """Grid spacing of a uniform grid"""
        if self.frequencies.size < 2:
            raise DomainError("a single-point spectrum has no grid spacing")
        steps = np.diff(self.frequencies)
        if not np.allclose(steps, steps[0], rtol=1e-6):
            raise DomainError("frequency grid is not uniform")
        return float(steps.mean())

    def same_grid(self, other: "NoiseSpectrum") -> bool:
        return self.frequencies.shape == other.frequencies.shape and bool(
            np.allclose(self.frequencies, other.frequencies, rtol=1e-12, atol=0.0)
        )

    def linear(self) -> np.ndarray:
        if self.in_db:
            return self.reference * 10.0 ** (self.values / 10.0)
        return np.array(self.values)

    def db(self) -> np.ndarray:
        if self.in_db:
            return np.array(self.values)
        if np.any(self.values <= 0.0) or np.any(self.reference <= 0.0):
            raise DomainError("dB conversion needs positive values and reference")
        return 10.0 * np.log10(self.values / self.reference)

    def normalized(self) -> np.ndarray:
        """Linear values divided by the shot-noise reference"""
        return self.linear() / self.reference

    def band(self, start_hz: float, stop_hz: float) -> "NoiseSpectrum":
        slack = 1e-9 * max(abs(start_hz), abs(stop_hz), 1.0)
        mask = (self.frequencies >= start_hz - slack) & (self.frequencies <= stop_hz + slack)
        if not np.any(mask):
            raise DomainError(f"no grid points between {start_hz:g} and {stop_hz:g} Hz")
        return replace(
            self,
            frequencies=self.frequencies[mask],
            values=self.values[mask],
            reference=self.reference[mask],
        )

    def with_values(self, values, **meta_changes) -> "NoiseSpectrum":
        meta = replace(self.meta, **meta_changes) if meta_changes else self.meta
        return replace(self, values=values, meta=meta)
