import numpy as np
import pytest

from src.polsqueezesim.exceptions import DomainError
from src.polsqueezesim.spectra.spectrum import NoiseSpectrum, SpectrumMeta


def flat(value=0.5, reference=1.0, points=11):
    return NoiseSpectrum(np.linspace(3e6, 4e6, points), np.full(points, value), reference, SpectrumMeta(label="S1"))


def test_resolution():
    assert flat().resolution == pytest.approx(1e5)


def test_resolution_needs_a_uniform_grid():
    spectrum = NoiseSpectrum(np.array([1e6, 2e6, 4e6]), np.ones(3), 1.0)
    with pytest.raises(DomainError, match="uniform"):
        spectrum.resolution
    with pytest.raises(DomainError):
        NoiseSpectrum(np.array([1e6]), np.ones(1), 1.0).resolution


def test_values_must_match_grid():
    with pytest.raises(DomainError):
        NoiseSpectrum(np.array([1e6, 2e6]), np.ones(3), 1.0)


def test_db_and_normalized():
    spectrum = flat(1.0, 2.0)
    np.testing.assert_allclose(spectrum.normalized(), 0.5)
    np.testing.assert_allclose(spectrum.db(), -3.0103, atol=1e-4)


def test_db_needs_positive_values():
    with pytest.raises(DomainError):
        flat(0.0).db()


def test_band_is_inclusive():
    band = flat().band(3.2e6, 3.5e6)
    assert band.frequencies.tolist() == pytest.approx([3.2e6, 3.3e6, 3.4e6, 3.5e6])
    assert band.reference.shape == (4,)
    with pytest.raises(DomainError):
        flat().band(5e6, 6e6)


def test_with_values_updates_meta():
    spectrum = flat().with_values(np.ones(11), rbw_hz=3e5)
    assert spectrum.meta.rbw_hz == 3e5
    assert spectrum.meta.label == "S1"


def test_same_grid():
    assert flat().same_grid(flat(2.0))
    assert not flat().same_grid(flat(points=12))
