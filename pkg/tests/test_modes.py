import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.polsqueezesim.exceptions import AdmissibilityError, DomainError
from src.polsqueezesim.gaussian.modes import (
    QUADRATURE_ORDER,
    BeamMode,
    Quadrature,
    as_grid,
    attenuate_mode,
    detected_variance,
    lossy_efficiency_chain,
    make_coherent,
    make_squeezed,
)
from src.polsqueezesim.gaussian.sources import FlatSqueezing, LorentzianSqueezing


def test_quadrature_order_is_fixed():
    assert QUADRATURE_ORDER == ("X_H+", "X_H-", "X_V+", "X_V-")
    assert [q.offset for q in Quadrature] == [0, 1]


def test_make_coherent_has_unit_noise():
    mode = make_coherent(10.0, [1e6])
    assert mode.amplitude == 10.0
    assert mode.is_coherent()
    assert mode.noise_spectrum == {1e6: (1.0, 1.0)}


def test_vacuum_is_coherent():
    mode = make_coherent(0.0, [1e6])
    assert mode.power == 0.0
    assert mode.is_coherent()


def test_coherent_power():
    mode = make_coherent(math.sqrt(50.0), [1e6, 2e6])
    assert mode.power == pytest.approx(50.0)


def test_negative_amplitude_rejected():
    with pytest.raises(DomainError):
        make_coherent(-1.0, [1e6])


@pytest.mark.parametrize("grid", [[], [2e6, 1e6], [1e6, 1e6], [float("nan")], [-1.0]])
def test_bad_grids_rejected(grid):
    with pytest.raises(DomainError):
        as_grid(grid)


def test_flat_minimum_uncertainty_squeezing():
    mode = make_squeezed(1.0, "amplitude", FlatSqueezing(0.5), [1e6])
    assert mode.v_plus[0] == pytest.approx(0.5)
    assert mode.v_minus[0] == pytest.approx(2.0)


def test_phase_squeezing_swaps_quadratures():
    mode = make_squeezed(1.0, Quadrature.PHASE, FlatSqueezing(0.25), [1e6])
    assert mode.v_minus[0] == pytest.approx(0.25)
    assert mode.v_plus[0] == pytest.approx(4.0)


def test_unit_squeezing_is_coherent():
    assert make_squeezed(3.0, "amplitude", FlatSqueezing(1.0), [1e6, 2e6]).is_coherent()


def test_lorentzian_at_corner():
    model = LorentzianSqueezing(0.25, 5e6)
    mode = make_squeezed(1.0, "amplitude", model, [5e6])
    assert mode.v_plus[0] == pytest.approx(0.625)
    assert mode.v_minus[0] == pytest.approx(1.0 / 0.625)


def test_inadmissible_mode_rejected():
    with pytest.raises(AdmissibilityError):
        BeamMode(1.0, [1e6], 0.5, 1.5)


def test_non_positive_variance_rejected():
    with pytest.raises(AdmissibilityError):
        BeamMode(1.0, [1e6], 0.0, 5.0)


def test_modes_are_immutable():
    mode = make_coherent(1.0, [1e6])
    with pytest.raises(ValueError):
        mode.v_plus[0] = 0.1


def test_efficiency_chain_from_loss_budget():
    assert lossy_efficiency_chain([0.14, 0.07, 0.05, 0.04]) == pytest.approx(0.86 * 0.93 * 0.95 * 0.96)
    assert lossy_efficiency_chain([0.14, 0.07, 0.05, 0.04]) == pytest.approx(0.73, abs=0.001)
    assert lossy_efficiency_chain([]) == 1.0
    assert lossy_efficiency_chain([0.5, 0.5]) == pytest.approx(0.25)


def test_efficiency_chain_rejects_total_loss():
    with pytest.raises(DomainError):
        lossy_efficiency_chain([0.1, 1.0])


def test_detected_variance():
    assert detected_variance(0.25, 0.73) == pytest.approx(0.4525)
    eta = lossy_efficiency_chain([0.14, 0.07, 0.05, 0.04])
    detected_db = 10.0 * math.log10(detected_variance(10 ** -0.65, eta))
    assert -4.5 < detected_db < -3.0


@given(
    eta=st.floats(min_value=1e-3, max_value=1.0),
    v_sq=st.floats(min_value=0.05, max_value=1.0),
)
@settings(max_examples=200)
def test_attenuation_keeps_admissibility(eta, v_sq):
    mode = attenuate_mode(make_squeezed(2.0, "amplitude", FlatSqueezing(v_sq), [1e6]), eta)
    assert mode.v_plus[0] * mode.v_minus[0] >= 1.0 - 1e-9
    assert mode.power == pytest.approx(4.0 * eta)


@given(eta=st.floats(min_value=1e-3, max_value=1.0))
def test_attenuated_coherent_mode_stays_coherent(eta):
    mode = attenuate_mode(make_coherent(5.0, np.linspace(1e6, 1e7, 5)), eta)
    assert mode.is_coherent()
