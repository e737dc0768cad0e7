"""
Synthetic photocurrent time series

A detection setup's analytic fluctuation spectrum V(f) is imposed on white
Gaussian noise by shaping its real FFT with sqrt(V(f)); between and beyond
the grid points V is interpolated and held at the edge values. With this
scaling a Welch periodogram multiplied by rate / 2 converges to V(f).
An optional white electronic floor (darknoise) is added independently and a
matching dark trace, with the beam blocked, can be drawn from its own stream.
"""
import logging
import math
import warnings
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from src.polsqueezesim.apparatus.detection import DetectionSetup, measure
from src.polsqueezesim.exceptions import DomainError, PeriodogramAccuracyWarning
from src.polsqueezesim.gaussian.state import TwoModeState
from src.polsqueezesim.oracle.streams import spawn_generators
from src.polsqueezesim.spectra.analyzer import MIN_PERIODOGRAM_SEGMENTS, periodogram_segments
from src.polsqueezesim.ui.uiconfigfile import sim_config

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PhotocurrentSeries:
    samples: np.ndarray
    sample_rate: float
    mean_current: float
    shot_noise: float
    darknoise: float = 0.0

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


def _sample_count(duration: float, sample_rate: float) -> int:
    if not sample_rate > 0.0 or not math.isfinite(sample_rate):
        raise DomainError(f"sample rate must be positive, got {sample_rate}")
    if not duration > 0.0 or not math.isfinite(duration):
        raise DomainError(f"duration must be positive, got {duration}")
    count = int(round(duration * sample_rate))
    if count < 2:
        raise DomainError(f"{duration:g} s at {sample_rate:g} Hz gives fewer than two samples")
    return count


def _check_segments(count: int, sample_rate: float, resolution: float) -> None:
    nperseg = int(round(sample_rate / resolution))
    segments = periodogram_segments(count, nperseg)
    if segments < MIN_PERIODOGRAM_SEGMENTS:
        warnings.warn(
            f"{count} samples give only {segments} periodogram segments at {resolution:g} Hz resolution",
            PeriodogramAccuracyWarning,
            stacklevel=3,
        )


def shaped_noise(generator: np.random.Generator, count: int, sample_rate: float, frequencies, variances) -> np.ndarray:
    white = generator.standard_normal(count)
    spectrum = np.fft.rfft(white)
    bins = np.fft.rfftfreq(count, d=1.0 / sample_rate)
    gain = np.sqrt(np.interp(bins, frequencies, variances))
    return np.fft.irfft(spectrum * gain, n=count)


def sample_photocurrent_timeseries(
    state: TwoModeState,
    setup: DetectionSetup,
    duration: float,
    sample_rate: float,
    seed: int,
    darknoise: float = 0.0,
    resolution: float = None,
) -> PhotocurrentSeries:
    """
    Photocurrent fluctuations of ``setup`` looking at ``state``.

    ``darknoise`` is the variance of the white electronic floor, in the same
    units as the photocurrent variance. ``resolution`` is the periodogram bin
    width the series is meant for (the band step by default); a series too
    short for 100 segments at that width triggers a PeriodogramAccuracyWarning.
    """
    count = _sample_count(duration, sample_rate)
    resolution = sim_config.get_band()[2] if resolution is None else resolution
    if not resolution > 0.0:
        raise DomainError(f"resolution must be positive, got {resolution}")
    if sample_rate <= 2.0 * float(state.frequencies[-1]):
        raise DomainError(
            f"sample rate {sample_rate:g} Hz must exceed twice the highest frequency {state.frequencies[-1]:g} Hz"
        )
    if darknoise < 0.0:
        raise DomainError(f"darknoise variance must be >= 0, got {darknoise}")
    _check_segments(count, sample_rate, resolution)

    stats = measure(setup, state)
    signal_stream, dark_stream = spawn_generators(seed, 2)
    samples = shaped_noise(signal_stream, count, sample_rate, state.frequencies, stats.fluctuation_variance)
    if darknoise > 0.0:
        samples = samples + math.sqrt(darknoise) * dark_stream.standard_normal(count)
    logger.debug("Synthesized %d samples of %s at %g Hz", count, setup.name, sample_rate)
    return PhotocurrentSeries(samples, sample_rate, stats.mean_current, stats.shot_noise, darknoise)


def sample_dark_timeseries(duration: float, sample_rate: float, darknoise: float, seed: int) -> PhotocurrentSeries:
    """Electronic floor alone, as recorded with the beam blocked"""
    count = _sample_count(duration, sample_rate)
    if not darknoise > 0.0:
        raise DomainError("a dark trace needs a positive darknoise variance")
    (stream,) = spawn_generators(seed, 1)
    return PhotocurrentSeries(math.sqrt(darknoise) * stream.standard_normal(count), sample_rate, 0.0, 0.0, darknoise)


def sample_trace_set(
    state: TwoModeState,
    setup: DetectionSetup,
    duration: float,
    sample_rate: float,
    seed: int,
    traces: int = 3,
    darknoise: float = 0.0,
    resolution: float = None,
) -> tuple:
    """
    Independent repeated recordings plus one dark recording.

    Returns (list of signal series, dark series or None); each recording
    has its own sub-stream of ``seed``.
    """
    if traces < 1:
        raise DomainError("at least one trace is needed")
    seeds = [int(s.generate_state(1, dtype=np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(traces + 1)]
    signals: List[PhotocurrentSeries] = [
        sample_photocurrent_timeseries(state, setup, duration, sample_rate, s, darknoise, resolution)
        for s in seeds[:traces]
    ]
    dark: Optional[PhotocurrentSeries] = None
    if darknoise > 0.0:
        dark = sample_dark_timeseries(duration, sample_rate, darknoise, seeds[-1])
    return signals, dark
