import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.polsqueezesim.apparatus.detection import canonical_setup
from src.polsqueezesim.exceptions import (
    CorrectionError,
    DarknoiseMarginWarning,
    DomainError,
    PeriodogramAccuracyWarning,
)
from src.polsqueezesim.gaussian.sources import LorentzianSqueezing
from src.polsqueezesim.oracle.timeseries import sample_trace_set
from src.polsqueezesim.spectra.analyzer import (
    TraceBundle,
    analyze_photocurrents,
    average_and_correct,
    average_traces,
    denormalize,
    electrical_pickup,
    fit_lorentzian_squeezing,
    normalize_to_shot,
    periodogram_segments,
    periodogram_spectrum,
    rbw_window_length,
    smooth_rbw,
    with_pickup,
)
from src.polsqueezesim.spectra.spectrum import NoiseSpectrum, SpectrumMeta

SAMPLE_RATE = 25e6
RESOLUTION = 10e3
# 300 half-overlapping segments of 2500 samples
DURATION = (2500 * 151) / SAMPLE_RATE


def spectrum(values, step=10e3, start=3e6, **meta):
    values = np.asarray(values, dtype=float)
    frequencies = start + step * np.arange(values.size)
    return NoiseSpectrum(frequencies, values, 1.0, SpectrumMeta(**meta))


def test_window_length_is_odd():
    assert rbw_window_length(300e3, 10e3) == 31
    assert rbw_window_length(200e3, 10e3) == 21
    assert rbw_window_length(10e3, 10e3) == 1


def test_smoothing_fixes_flat_spectra():
    smoothed = smooth_rbw(spectrum(np.full(101, 0.7)), 300e3)
    np.testing.assert_allclose(smoothed.values, 0.7)
    assert smoothed.meta.rbw_hz == 300e3


def test_smoothing_spreads_a_spike_over_the_window():
    values = np.zeros(101)
    values[50] = 31.0
    smoothed = smooth_rbw(spectrum(values), 300e3).values
    np.testing.assert_allclose(smoothed[35:66], 1.0)
    assert np.all(smoothed[:35] == 0.0) and np.all(smoothed[66:] == 0.0)
    assert smoothed.sum() == pytest.approx(31.0)


def test_smoothing_truncates_windows_at_the_edges():
    values = np.arange(101, dtype=float)
    smoothed = smooth_rbw(spectrum(values), 30e3).values
    assert smoothed[0] == pytest.approx(0.5)
    assert smoothed[50] == pytest.approx(50.0)


@given(
    seed=st.integers(0, 2**32 - 1),
    count=st.integers(1, 5),
    points=st.integers(2, 150),
    window=st.integers(1, 60),
)
@settings(max_examples=200, deadline=None)
def test_smoothing_commutes_with_averaging(seed, count, points, window):
    generator = np.random.default_rng(seed)
    traces = [spectrum(generator.uniform(0.1, 10.0, points)) for _ in range(count)]
    rbw = window * 10e3
    smoothed_first = average_traces([smooth_rbw(t, rbw) for t in traces])
    averaged_first = smooth_rbw(average_traces(traces), rbw)
    assert averaged_first.values.shape == (points,)
    np.testing.assert_allclose(smoothed_first.values, averaged_first.values, rtol=1e-12)


def test_window_wider_than_the_grid_averages_everything():
    values = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    smoothed = smooth_rbw(spectrum(values), 300e3).values
    np.testing.assert_allclose(smoothed, 3.0)


def test_rbw_below_grid_spacing_rejected():
    with pytest.raises(DomainError):
        smooth_rbw(spectrum(np.ones(11)), 5e3)


def test_smoothing_rejects_db_spectra():
    normalized = normalize_to_shot(spectrum(np.full(11, 0.5)), 1.0)
    with pytest.raises(DomainError):
        smooth_rbw(normalized, 30e3)


def test_average_and_correct():
    traces = [spectrum(np.full(5, 2.0)) for _ in range(3)]
    corrected = average_and_correct(TraceBundle(traces, spectrum(np.full(5, 0.5))))
    np.testing.assert_allclose(corrected.values, 1.5)
    assert corrected.meta.averages == 3
    assert corrected.meta.darknoise_margin_db == pytest.approx(10.0 * np.log10(4.0))


def test_average_is_independent_of_trace_order(rng):
    traces = [spectrum(rng.uniform(1.0, 2.0, 21)) for _ in range(4)]
    dark = spectrum(np.full(21, 0.1))
    forward = average_and_correct(TraceBundle(traces, dark))
    backward = average_and_correct(TraceBundle(traces[::-1], dark))
    np.testing.assert_allclose(forward.values, backward.values, rtol=1e-15)


def test_thin_darknoise_margin_warns():
    traces = [spectrum(np.full(5, 2.0))]
    with pytest.warns(DarknoiseMarginWarning):
        average_and_correct(TraceBundle(traces, spectrum(np.full(5, 0.9))), min_margin_db=4.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        average_and_correct(TraceBundle(traces, spectrum(np.full(5, 0.5))), min_margin_db=4.0)


def test_darknoise_at_the_trace_is_an_error():
    dark = np.full(5, 0.5)
    dark[[1, 3]] = 2.5
    with pytest.raises(CorrectionError) as excinfo:
        average_and_correct(TraceBundle([spectrum(np.full(5, 2.0))], spectrum(dark)))
    assert excinfo.value.frequencies == pytest.approx([3.01e6, 3.03e6])


def test_bundle_checks_grids_and_settings():
    with pytest.raises(DomainError):
        TraceBundle([spectrum(np.ones(5))], spectrum(np.ones(6)))
    with pytest.raises(DomainError):
        TraceBundle([spectrum(np.ones(5), rbw_hz=1e5), spectrum(np.ones(5), rbw_hz=3e5)], spectrum(np.zeros(5)))
    with pytest.raises(DomainError):
        TraceBundle([], spectrum(np.zeros(5)))


def test_normalize_and_denormalize():
    normalized = normalize_to_shot(spectrum(np.full(11, 0.5)), 1.0)
    assert normalized.in_db
    np.testing.assert_allclose(normalized.values, -3.0103, atol=1e-4)
    assert normalized.meta.calibration is not None
    np.testing.assert_allclose(denormalize(normalized).values, 0.5, rtol=1e-12)


def test_normalize_against_reference_spectrum():
    reference = spectrum(np.full(11, 4.0))
    np.testing.assert_allclose(normalize_to_shot(spectrum(np.full(11, 2.0)), reference).values, -3.0103, atol=1e-4)
    with pytest.raises(DomainError):
        normalize_to_shot(spectrum(np.full(11, 2.0)), spectrum(np.full(12, 4.0)))
    with pytest.raises(DomainError):
        normalize_to_shot(spectrum(np.full(11, 2.0)), 0.0)


def test_periodogram_of_white_noise(rng):
    series = rng.standard_normal(int(round(DURATION * SAMPLE_RATE)))
    result = periodogram_spectrum(series, SAMPLE_RATE, RESOLUTION, band=(3e6, 10e6))
    assert result.frequencies[0] == pytest.approx(3e6)
    assert result.frequencies[-1] == pytest.approx(10e6)
    assert result.resolution == pytest.approx(RESOLUTION)
    assert np.mean(result.values) == pytest.approx(1.0, abs=0.01)


def test_periodogram_warns_on_few_segments(rng):
    assert periodogram_segments(2500 * 11, 2500) == 21
    with pytest.warns(PeriodogramAccuracyWarning):
        periodogram_spectrum(rng.standard_normal(2500 * 11), SAMPLE_RATE, RESOLUTION)


def test_periodogram_needs_enough_samples(rng):
    with pytest.raises(DomainError):
        periodogram_spectrum(rng.standard_normal(1000), SAMPLE_RATE, RESOLUTION)


def test_analyzer_chain_recovers_detected_squeezing(bright_cigar_state):
    darknoise = 0.05 * bright_cigar_state.photon_number
    signals, dark = sample_trace_set(
        bright_cigar_state, canonical_setup("S1"), DURATION, SAMPLE_RATE, seed=7, traces=3, darknoise=darknoise
    )
    result = analyze_photocurrents(
        signals, dark, reference=bright_cigar_state.photon_number,
        resolution=RESOLUTION, rbw=300e3, band=(3e6, 10e6), label="S1",
    )
    expected = 10.0 * np.log10(0.5)
    assert result.in_db
    assert np.sqrt(np.mean((result.values - expected) ** 2)) < 0.2
    assert result.meta.averages == 3
    assert result.meta.darknoise_margin_db > 4.0


def test_analyzer_chain_reads_shot_noise_for_coherent_light(coherent_state):
    signals, _ = sample_trace_set(
        coherent_state, canonical_setup("S2"), 4 * DURATION, SAMPLE_RATE, seed=11, traces=8, resolution=RESOLUTION
    )
    result = analyze_photocurrents(
        signals, reference=coherent_state.photon_number, resolution=RESOLUTION, rbw=300e3, band=(3e6, 10e6)
    )
    assert abs(float(np.mean(result.values))) < 0.01
    assert np.max(np.abs(result.values)) < 0.05


def test_pickup_lines():
    frequencies = np.array([4e6, 4.5e6])
    pickup = electrical_pickup(frequencies, 2.0)
    assert pickup[0] == pytest.approx(2.0)
    assert pickup[1] < 1e-6
    np.testing.assert_allclose(with_pickup(spectrum([1.0], start=4e6), 2.0).values, 3.0)


def test_lorentzian_fit_recovers_the_corner():
    truth = LorentzianSqueezing(0.3, 4e6)
    frequencies = np.linspace(0.5e6, 20e6, 196)
    v_sq, _ = truth.evaluate(frequencies)
    fitted = fit_lorentzian_squeezing(NoiseSpectrum(frequencies, v_sq, 1.0))
    assert fitted.corner_hz == pytest.approx(4e6, rel=0.1)
    assert fitted.v0 == pytest.approx(0.3, rel=0.05)
