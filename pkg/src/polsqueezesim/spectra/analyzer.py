"""
Spectrum-analyzer emulation

Processing chain applied to photocurrent noise spectra:
    periodogram -> RBW smoothing -> trace averaging -> darknoise subtraction
    -> normalization to shot noise (dB)
All steps before normalization are linear in power. The video bandwidth is
carried as metadata only; trace averaging stands in for the video filter.
"""
import logging
import math
import warnings
from dataclasses import dataclass, replace
from typing import Iterable, Sequence, Union

import numpy as np
from scipy import signal
from scipy.optimize import curve_fit

from src.polsqueezesim.apparatus.calibration import calibrate_shot_noise
from src.polsqueezesim.exceptions import (
    CorrectionError,
    DarknoiseMarginWarning,
    DomainError,
    PeriodogramAccuracyWarning,
)
from src.polsqueezesim.gaussian.sources import LorentzianSqueezing
from src.polsqueezesim.spectra.spectrum import NoiseSpectrum, SpectrumMeta
from src.polsqueezesim.ui.uiconfigfile import sim_config

logger = logging.getLogger(__name__)

MIN_PERIODOGRAM_SEGMENTS = 100
PICKUP_LINES_HZ = (4e6, 5e6, 6e6, 7e6, 8e6, 9e6)


@dataclass(frozen=True)
class TraceBundle:
    traces: Sequence[NoiseSpectrum]
    darknoise: NoiseSpectrum

    def __post_init__(self):
        traces = tuple(self.traces)
        if not traces:
            raise DomainError("a trace bundle needs at least one trace")
        first = traces[0]
        for trace in traces[1:] + (self.darknoise,):
            if not first.same_grid(trace):
                raise DomainError("all traces and the darknoise must share one frequency grid")
        for trace in traces[1:]:
            if trace.meta.rbw_hz != first.meta.rbw_hz or trace.meta.vbw_hz != first.meta.vbw_hz:
                raise DomainError("all traces must share analyzer settings")
        if any(t.in_db for t in traces) or self.darknoise.in_db:
            raise DomainError("traces must be linear power spectra")
        object.__setattr__(self, "traces", traces)


def rbw_window_length(rbw: float, resolution: float) -> int:
    """Odd number of grid points spanned by the resolution bandwidth"""
    length = int(round(rbw / resolution))
    if length % 2 == 0:
        length += 1
    return length


def smooth_rbw(spectrum: NoiseSpectrum, rbw: float = None) -> NoiseSpectrum:
    """Centered moving average over ``rbw`` in linear power; windows are truncated at the edges"""
    rbw = sim_config.get_rbw_hz() if rbw is None else rbw
    if spectrum.in_db:
        raise DomainError("smoothing operates on linear power spectra")
    resolution = spectrum.resolution
    if not rbw > 0.0 or rbw < resolution * (1.0 - 1e-9):
        raise DomainError(f"rbw {rbw:g} Hz must be positive and at least the grid spacing {resolution:g} Hz")
    length = rbw_window_length(rbw, resolution)
    kernel = np.ones(length)
    # output keeps the spectrum length even when the window is wider than the grid
    totals = signal.convolve(spectrum.values, kernel, mode="same", method="direct")
    counts = signal.convolve(np.ones_like(spectrum.values), kernel, mode="same", method="direct")
    logger.debug("RBW smoothing over %d points (%g Hz)", length, rbw)
    return spectrum.with_values(totals / counts, rbw_hz=rbw)


def average_traces(traces: Sequence[NoiseSpectrum]) -> NoiseSpectrum:
    first = traces[0]
    mean = np.mean([t.values for t in traces], axis=0)
    return first.with_values(mean, averages=len(traces))


def average_and_correct(bundle: TraceBundle, min_margin_db: float = None) -> NoiseSpectrum:
    """Pointwise mean of the traces minus the darknoise, all in linear power"""
    min_margin_db = sim_config.get_darknoise_margin_db() if min_margin_db is None else min_margin_db
    averaged = average_traces(bundle.traces)
    raw = averaged.values
    dark = bundle.darknoise.values

    offending = averaged.frequencies[dark >= raw]
    if offending.size:
        listed = ", ".join(f"{f:g}" for f in offending[:10])
        raise CorrectionError(
            f"darknoise reaches the measured trace at {offending.size} frequencies (Hz): {listed}",
            offending.tolist(),
        )

    positive = dark > 0.0
    margin = float(np.min(10.0 * np.log10(raw[positive] / dark[positive]))) if np.any(positive) else math.inf
    if margin < min_margin_db - 1e-9:
        warnings.warn(
            f"darknoise is only {margin:.2f} dB below the trace (wanted {min_margin_db:g} dB)",
            DarknoiseMarginWarning,
            stacklevel=2,
        )
    return averaged.with_values(raw - dark, darknoise_margin_db=margin)


def normalize_to_shot(spectrum: NoiseSpectrum, reference: Union[float, np.ndarray, NoiseSpectrum]) -> NoiseSpectrum:
    """10 log10(value / reference) per point, with the calibration band attached"""
    if isinstance(reference, NoiseSpectrum):
        if not spectrum.same_grid(reference):
            raise DomainError("reference spectrum must share the frequency grid")
        reference = reference.linear()
    reference = np.broadcast_to(np.asarray(reference, dtype=float), spectrum.frequencies.shape)
    values = spectrum.linear()
    if np.any(reference <= 0.0):
        raise DomainError("shot-noise reference must be positive on the whole grid")
    if np.any(values <= 0.0):
        raise DomainError("spectrum values must be positive to express them in dB")
    calibration = calibrate_shot_noise(float(np.mean(reference)))
    return replace(
        spectrum,
        values=10.0 * np.log10(values / reference),
        reference=reference,
        meta=replace(spectrum.meta, calibration=calibration),
        in_db=True,
    )


def denormalize(spectrum: NoiseSpectrum) -> NoiseSpectrum:
    if not spectrum.in_db:
        return spectrum
    return replace(spectrum, values=spectrum.linear(), in_db=False)


def analyzer_meta(label: str = "", averages: int = None) -> SpectrumMeta:
    return SpectrumMeta(
        rbw_hz=sim_config.get_rbw_hz(),
        vbw_hz=sim_config.get_vbw_hz(),
        averages=sim_config.get_trace_averages() if averages is None else averages,
        label=label,
    )


def periodogram_segments(samples: int, nperseg: int) -> int:
    step = nperseg - nperseg // 2
    return 0 if samples < nperseg else 1 + (samples - nperseg) // step


def periodogram_spectrum(
    series: np.ndarray,
    sample_rate: float,
    resolution: float = None,
    reference: float = 1.0,
    band: Iterable[float] = None,
    label: str = "",
) -> NoiseSpectrum:
    """
    Welch periodogram of a photocurrent series, in the variance units of the
    generator (white noise of unit variance maps to 1 at every frequency).
    """
    resolution = sim_config.get_band()[2] if resolution is None else resolution
    series = np.asarray(series, dtype=float)
    nperseg = int(round(sample_rate / resolution))
    if nperseg < 2 or nperseg > series.size:
        raise DomainError(f"resolution {resolution:g} Hz needs {nperseg} samples per segment; series has {series.size}")
    segments = periodogram_segments(series.size, nperseg)
    if segments < MIN_PERIODOGRAM_SEGMENTS:
        warnings.warn(
            f"only {segments} periodogram segments; spectra will be noisy",
            PeriodogramAccuracyWarning,
            stacklevel=2,
        )
    frequencies, psd = signal.welch(
        series,
        fs=sample_rate,
        window="hann",
        nperseg=nperseg,
        noverlap=nperseg // 2,
        detrend=False,
        scaling="density",
        return_onesided=True,
    )
    values = psd * sample_rate / 2.0
    if band is not None:
        start, stop = band
        slack = 1e-9 * max(abs(start), abs(stop), 1.0)
        mask = (frequencies >= start - slack) & (frequencies <= stop + slack)
    else:
        mask = frequencies > 0.0
    logger.debug("Periodogram: %d segments of %d samples", segments, nperseg)
    return NoiseSpectrum(frequencies[mask], values[mask], reference, SpectrumMeta(label=label))


def electrical_pickup(frequencies, height: float, width_hz: float = 50e3, lines_hz: Sequence[float] = PICKUP_LINES_HZ) -> np.ndarray:
    """Additive narrow interference lines (Gaussian profiles) at the given frequencies"""
    f = np.asarray(frequencies, dtype=float)
    pickup = np.zeros_like(f)
    for line in lines_hz:
        pickup += height * np.exp(-0.5 * ((f - line) / width_hz) ** 2)
    return pickup


def with_pickup(spectrum: NoiseSpectrum, height: float, width_hz: float = 50e3) -> NoiseSpectrum:
    return spectrum.with_values(spectrum.linear() + electrical_pickup(spectrum.frequencies, height, width_hz))


def fit_lorentzian_squeezing(spectrum: NoiseSpectrum) -> LorentzianSqueezing:
    """Least-squares fit of V(f)/<n> = 1 - (1 - v0) / (1 + (f / corner)^2)"""
    f = spectrum.frequencies
    y = spectrum.normalized()

    def model(freq, v0, corner):
        return 1.0 - (1.0 - v0) / (1.0 + (freq / corner) ** 2)

    guess_corner = float(f[np.argmin(np.abs(y - 0.5 * (1.0 + y.min())))]) or float(f.mean())
    params, _ = curve_fit(
        model,
        f,
        y,
        p0=(float(max(y.min(), 1e-3)), max(guess_corner, f[-1] * 1e-3)),
        bounds=([1e-6, f[-1] * 1e-6], [1.0, f[-1] * 1e3]),
    )
    v0, corner = params
    logger.info("Lorentzian fit: v0=%.4f corner=%.4g Hz", v0, corner)
    return LorentzianSqueezing(float(v0), float(corner))


def analyze_photocurrents(
    signals: Sequence,
    dark=None,
    reference: float = 1.0,
    resolution: float = None,
    rbw: float = None,
    band: Iterable[float] = None,
    label: str = "",
) -> NoiseSpectrum:
    """
    Full analyzer chain on recorded photocurrents: periodogram and RBW
    smoothing per trace, averaging, darknoise subtraction, then dB relative
    to ``reference`` over ``band``.
    """
    start, stop, step = sim_config.get_band()
    resolution = step if resolution is None else resolution
    band = (start, stop) if band is None else tuple(band)

    def trace(series) -> NoiseSpectrum:
        spectrum = periodogram_spectrum(series.samples, series.sample_rate, resolution, reference, label=label)
        return smooth_rbw(spectrum, rbw).band(*band)

    traces = [trace(s) for s in signals]
    if dark is not None:
        darknoise = trace(dark)
    else:
        darknoise = traces[0].with_values(np.zeros_like(traces[0].values))
    corrected = average_and_correct(TraceBundle(traces, darknoise))
    corrected = replace(corrected, meta=replace(corrected.meta, vbw_hz=sim_config.get_vbw_hz()))
    return normalize_to_shot(corrected, reference)
