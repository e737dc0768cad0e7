import math

import numpy as np
import pytest

from src.polsqueezesim.exceptions import DomainError, NumericError
from src.polsqueezesim.gaussian.elements import (
    SymplecticElement,
    add_correlated_classical_noise,
    apply_element,
    attenuate_state,
    compose,
    identity_element,
    is_symplectic,
    jones_to_symplectic,
    loss_element,
    passive_element,
    phase_shift,
    single_mode_squeezer,
)
from src.polsqueezesim.gaussian.modes import make_coherent
from src.polsqueezesim.gaussian.state import TwoModeState
from src.polsqueezesim.guardrail.validation_service import validation_service
from tests.conftest import random_admissible_state, squeezed_pair


def random_unitary(rng):
    a, b, c = rng.uniform(0.0, 2.0 * math.pi, size=3)
    return np.array(
        [[np.exp(1j * a) * math.cos(b), np.exp(1j * c) * math.sin(b)],
         [-np.exp(-1j * c) * math.sin(b), np.exp(-1j * a) * math.cos(b)]]
    )


def random_pure_element(rng):
    passive = passive_element("mix", random_unitary(rng))
    squeezer = single_mode_squeezer(rng.uniform(0.0, 0.8), rng.choice(["H", "V"]), rng.uniform(0.0, math.pi))
    return compose(passive, squeezer)


def test_identity_leaves_state_unchanged(bright_cigar_state):
    assert apply_element(bright_cigar_state, identity_element()).allclose(bright_cigar_state)


def test_loss_fixes_coherent_state(coherent_state):
    for eta in (0.01, 0.3, 0.73, 1.0):
        out = attenuate_state(coherent_state, eta)
        np.testing.assert_allclose(out.covariance, np.broadcast_to(np.eye(4), out.covariance.shape), atol=1e-12)
        assert out.photon_number == pytest.approx(eta * coherent_state.photon_number)


def test_loss_on_squeezed_quadrature():
    state = squeezed_pair("amplitude", 0.25, 1e4, [1e6], theta=0.0)
    out = attenuate_state(state, 0.73)
    assert out.covariance[0, 0, 0] == pytest.approx(0.4525)
    assert out.covariance[0, 2, 2] == pytest.approx(0.4525)


def test_jones_lift_is_symplectic_and_orthogonal(rng):
    for _ in range(20):
        matrix = jones_to_symplectic(random_unitary(rng))
        assert is_symplectic(matrix)
        np.testing.assert_allclose(matrix @ matrix.T, np.eye(4), atol=1e-12)


def test_non_unitary_jones_rejected():
    with pytest.raises(DomainError):
        passive_element("bad", np.array([[1.0, 0.0], [0.0, 0.5]]))


def test_non_symplectic_matrix_rejected():
    with pytest.raises(DomainError):
        SymplecticElement("bad", np.diag([2.0, 2.0, 1.0, 1.0]))


def test_non_finite_matrix_rejected():
    matrix = np.eye(4)
    matrix[0, 0] = np.nan
    with pytest.raises(NumericError):
        SymplecticElement("bad", matrix)


def test_loss_parameter_range():
    with pytest.raises(DomainError):
        loss_element(0.0)
    with pytest.raises(DomainError):
        loss_element(1.5)


def test_phase_shift_advances_theta():
    h = make_coherent(3.0, [1e6])
    state = TwoModeState.uncorrelated(h, h, 0.2)
    out = apply_element(state, phase_shift(0.5))
    assert out.theta == pytest.approx(0.7)


def test_pure_elements_preserve_admissibility(rng):
    for _ in range(1000):
        state = random_admissible_state(rng)
        out = apply_element(state, random_pure_element(rng))
        assert np.linalg.eigvalsh(out.covariance[0]).min() >= -1e-10 * np.trace(out.covariance[0])
        is_physical, _ = validation_service.validate_physical(out.covariance)
        assert is_physical
        for mode in (out.mode_h, out.mode_v):
            assert mode.v_plus[0] * mode.v_minus[0] >= 1.0 - 1e-9


def test_composition_matches_sequential_application(rng):
    for _ in range(50):
        state = random_admissible_state(rng)
        first = random_pure_element(rng)
        second = passive_element("second", random_unitary(rng))
        sequential = apply_element(apply_element(state, first), second)
        folded = apply_element(state, compose(first, second))
        assert folded.allclose(sequential, rtol=1e-10, atol=1e-9)


def test_lossy_element_folds_only_into_passive(rng):
    squeezer = single_mode_squeezer(0.3)
    with pytest.raises(DomainError):
        compose(loss_element(0.5), squeezer)
    folded = compose(loss_element(0.5), phase_shift(0.1))
    assert folded.efficiency == 0.5


def test_transform_is_frequency_independent(rng, grid):
    state = random_admissible_state(rng, frequencies=grid)
    element = random_pure_element(rng)
    whole = apply_element(state, element)
    for index in range(grid.size):
        single = apply_element(state.slice(index), element)
        assert single.allclose(whole.slice(index), rtol=1e-12, atol=1e-9)


def test_zero_excess_noise_is_a_no_op(bright_cigar_state):
    out = add_correlated_classical_noise(bright_cigar_state, "amplitude", 0.0, 1)
    assert out.allclose(bright_cigar_state)


def test_correlated_noise_enters_cross_covariance(bright_cigar_state):
    out = add_correlated_classical_noise(bright_cigar_state, "amplitude", 0.3, -1)
    assert out.covariance[0, 0, 2] == pytest.approx(-0.3)
    assert out.covariance[0, 0, 0] == pytest.approx(0.8)
    assert out.covariance[0, 1, 3] == 0.0


def test_correlation_sign_checked(bright_cigar_state):
    with pytest.raises(DomainError):
        add_correlated_classical_noise(bright_cigar_state, "amplitude", 0.3, 0)
