"""
Shot-noise calibration

The reference is a coherent beam of the same power, measured through the S2
setup, which then acts as a homodyne detector whose variance is the shot
noise <n>. The calibration beam power is only matched to within a relative
mismatch; both the band implied by that mismatch and the conservative band
quoted for the experiment are carried, neither replaces the other.
"""
import math
from dataclasses import dataclass

from src.polsqueezesim.exceptions import DomainError
from src.polsqueezesim.ui.uiconfigfile import sim_config


@dataclass(frozen=True)
class ShotNoiseCalibration:
    reference: float
    mismatch: float
    computed_band_db: float
    quoted_band_db: float

    @property
    def band_db(self) -> float:
        """Widest of the two bands, used when checking a 0 dB trace"""
        return max(self.computed_band_db, self.quoted_band_db)

    def bounds(self):
        """Reference variance range implied by the power mismatch"""
        return self.reference * (1.0 - self.mismatch), self.reference * (1.0 + self.mismatch)


def calibrate_shot_noise(power: float, mismatch: float = None, quoted_band_db: float = None) -> ShotNoiseCalibration:
    """Shot-noise reference variance (= <n>) for a beam of mean photon number ``power``"""
    if not power > 0.0 or not math.isfinite(power):
        raise DomainError(f"calibration power must be positive, got {power}")
    mismatch = sim_config.get_calibration_mismatch() if mismatch is None else mismatch
    if not 0.0 <= mismatch < 1.0:
        raise DomainError(f"power mismatch must lie in [0, 1), got {mismatch}")
    quoted = sim_config.get_quoted_calibration_band_db() if quoted_band_db is None else quoted_band_db
    return ShotNoiseCalibration(
        reference=float(power),
        mismatch=mismatch,
        computed_band_db=10.0 * math.log10(1.0 + mismatch),
        quoted_band_db=quoted,
    )
