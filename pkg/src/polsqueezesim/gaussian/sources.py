"""
Output noise spectra of quadrature squeezed sources

Sources are black boxes described by their noise spectra. Built-in models
return (V_sq, V_anti) per frequency; tabulated data carries (V+, V-) columns
read from CSV with the header ``freq_hz,v_plus,v_minus``.
"""
import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Tuple, Union

import numpy as np

from src.polsqueezesim.exceptions import DomainError
from src.polsqueezesim.gaussian.modes import BeamMode, as_grid

logger = logging.getLogger(__name__)

TABLE_HEADER = ("freq_hz", "v_plus", "v_minus")


def db_to_ratio(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _anti_squeezing(v_sq: np.ndarray, excess: float) -> np.ndarray:
    if excess < 1.0:
        raise DomainError(f"excess-noise multiplier must be >= 1, got {excess}")
    return excess / v_sq


@dataclass(frozen=True)
class FlatSqueezing:
    """Frequency independent squeezing V_sq; V_anti = excess / V_sq"""

    v_sq: float
    excess: float = 1.0

    def evaluate(self, frequencies: Iterable[float]) -> Tuple[np.ndarray, np.ndarray]:
        grid = as_grid(frequencies)
        if not 0.0 < self.v_sq <= 1.0:
            raise DomainError(f"squeezed variance must lie in (0, 1], got {self.v_sq}")
        v_sq = np.full_like(grid, self.v_sq)
        return v_sq, _anti_squeezing(v_sq, self.excess)


@dataclass(frozen=True)
class LorentzianSqueezing:
    """
    Cavity-filtered squeezing, V_sq(f) = 1 - (1 - v0) / (1 + (f / corner_hz)**2).

    The anti-squeezed quadrature is minimum uncertainty (excess = 1) unless an
    excess-noise multiplier is given.
    """

    v0: float
    corner_hz: float
    excess: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.v0 <= 1.0:
            raise DomainError(f"minimum squeezed variance must lie in (0, 1], got {self.v0}")
        if not self.corner_hz > 0.0:
            raise DomainError(f"corner frequency must be positive, got {self.corner_hz}")

    def squeezed_variance(self, frequencies) -> np.ndarray:
        f = np.asarray(frequencies, dtype=float)
        return 1.0 - (1.0 - self.v0) / (1.0 + (f / self.corner_hz) ** 2)

    def evaluate(self, frequencies: Iterable[float]) -> Tuple[np.ndarray, np.ndarray]:
        grid = as_grid(frequencies)
        v_sq = self.squeezed_variance(grid)
        return v_sq, _anti_squeezing(v_sq, self.excess)


@dataclass(frozen=True, eq=False)
class TabulatedSpectrum:
    frequencies: np.ndarray
    v_plus: np.ndarray
    v_minus: np.ndarray

    def __post_init__(self):
        grid = as_grid(self.frequencies)
        v_plus = np.asarray(self.v_plus, dtype=float)
        v_minus = np.asarray(self.v_minus, dtype=float)
        if v_plus.shape != grid.shape or v_minus.shape != grid.shape:
            raise DomainError("tabulated columns must have one value per frequency")
        object.__setattr__(self, "frequencies", grid)
        object.__setattr__(self, "v_plus", v_plus)
        object.__setattr__(self, "v_minus", v_minus)

    def interpolate(self, frequencies: Iterable[float]) -> Tuple[np.ndarray, np.ndarray]:
        """Linear interpolation inside the tabulated range; extrapolation is refused"""
        grid = as_grid(frequencies)
        lo, hi = self.frequencies[0], self.frequencies[-1]
        if grid[0] < lo - 1e-9 * max(abs(lo), 1.0) or grid[-1] > hi + 1e-9 * max(abs(hi), 1.0):
            raise DomainError(
                f"requested frequencies [{grid[0]:g}, {grid[-1]:g}] Hz fall outside the table [{lo:g}, {hi:g}] Hz"
            )
        return (
            np.interp(grid, self.frequencies, self.v_plus),
            np.interp(grid, self.frequencies, self.v_minus),
        )

    def evaluate(self, frequencies: Iterable[float]) -> Tuple[np.ndarray, np.ndarray]:
        """(V_sq, V_anti) taking the quieter column as the squeezed quadrature"""
        v_plus, v_minus = self.interpolate(frequencies)
        return np.minimum(v_plus, v_minus), np.maximum(v_plus, v_minus)

    def to_mode(self, amplitude: float, frequencies: Iterable[float] = None) -> BeamMode:
        grid = self.frequencies if frequencies is None else as_grid(frequencies)
        v_plus, v_minus = self.interpolate(grid)
        return BeamMode(amplitude, grid, v_plus, v_minus)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "TabulatedSpectrum":
        path = Path(path)
        with path.open("r", newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != TABLE_HEADER:
                raise DomainError(f"{path}: expected header {','.join(TABLE_HEADER)}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row or not "".join(row).strip():
                    continue
                if len(row) != 3:
                    raise DomainError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
                try:
                    rows.append(tuple(float(value) for value in row))
                except ValueError as e:
                    raise DomainError(f"{path}:{lineno}: {e}") from e
        if not rows:
            raise DomainError(f"{path}: no data rows")
        data = np.array(rows)
        logger.debug("Loaded %d spectrum rows from %s", len(rows), path)
        return cls(data[:, 0], data[:, 1], data[:, 2])

    def to_csv(self, path: Union[str, Path]) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(TABLE_HEADER)
            for row in zip(self.frequencies, self.v_plus, self.v_minus):
                writer.writerow([repr(float(value)) for value in row])


def squeezing_model(v0: float, corner_hz: float = None, excess: float = 1.0):
    """Flat model when no corner frequency is given, Lorentzian otherwise"""
    if corner_hz is None or math.isinf(corner_hz):
        return FlatSqueezing(v0, excess)
    return LorentzianSqueezing(v0, corner_hz, excess)
