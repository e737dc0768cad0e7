"""
Optical elements as affine maps on means and covariances

An element is a real 4x4 symplectic matrix S acting on lab-frame quadratures
followed by an optional loss channel of transmission eta:
    mean        m -> sqrt(eta) * S m
    covariance  C -> eta * S C S^T + (1 - eta) * I
Passive elements (wave plates, phase shifts) are lifted from 2x2 Jones
matrices acting on (b_H, b_V).
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from src.polsqueezesim.exceptions import DomainError, NumericError
from src.polsqueezesim.gaussian.modes import Quadrature, _frozen
from src.polsqueezesim.gaussian.state import TwoModeState, frame_rotation, rotation
from src.polsqueezesim.guardrail.validation_service import SYMPLECTIC_FORM, validation_service

logger = logging.getLogger(__name__)

# Below this amplitude a mode has no usable phase reference.
_AMPLITUDE_FLOOR = 1e-12


def is_symplectic(matrix: np.ndarray, atol: float = 1e-9) -> bool:
    return bool(np.allclose(matrix @ SYMPLECTIC_FORM @ matrix.T, SYMPLECTIC_FORM, atol=atol))


def is_orthogonal(matrix: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.allclose(matrix @ matrix.T, np.eye(matrix.shape[0]), atol=atol))


@dataclass(frozen=True, eq=False)
class SymplecticElement:
    name: str
    matrix: np.ndarray
    vacuum_mix: Optional[float] = None

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        if matrix.shape != (4, 4):
            raise DomainError(f"element '{self.name}' needs a 4x4 matrix, got {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise NumericError(f"element '{self.name}' has non-finite matrix entries")
        if not is_symplectic(matrix):
            raise DomainError(f"element '{self.name}' matrix is not symplectic")
        if self.vacuum_mix is not None and not 0.0 < self.vacuum_mix <= 1.0:
            raise DomainError(f"element '{self.name}' loss parameter must lie in (0, 1], got {self.vacuum_mix}")
        object.__setattr__(self, "matrix", _frozen(matrix))

    @property
    def efficiency(self) -> float:
        return 1.0 if self.vacuum_mix is None else self.vacuum_mix

    @property
    def is_pure(self) -> bool:
        return self.efficiency == 1.0

    @property
    def is_passive(self) -> bool:
        return is_orthogonal(self.matrix)


def jones_to_symplectic(jones: np.ndarray) -> np.ndarray:
    """Real 4x4 representation of a 2x2 complex matrix acting on (b_H, b_V)"""
    jones = np.asarray(jones, dtype=complex)
    if jones.shape != (2, 2):
        raise DomainError(f"Jones matrix must be 2x2, got {jones.shape}")
    re, im = jones.real, jones.imag
    matrix = np.zeros((4, 4))
    for j in range(2):
        for k in range(2):
            matrix[2 * j, 2 * k] = re[j, k]
            matrix[2 * j, 2 * k + 1] = -im[j, k]
            matrix[2 * j + 1, 2 * k] = im[j, k]
            matrix[2 * j + 1, 2 * k + 1] = re[j, k]
    return matrix


def passive_element(name: str, jones: np.ndarray) -> SymplecticElement:
    jones = np.asarray(jones, dtype=complex)
    if not np.allclose(jones.conj().T @ jones, np.eye(2), atol=1e-12):
        raise DomainError(f"element '{name}' Jones matrix is not unitary")
    return SymplecticElement(name, jones_to_symplectic(jones))


def identity_element(name: str = "identity") -> SymplecticElement:
    return SymplecticElement(name, np.eye(4))


def loss_element(efficiency: float, name: str = "loss") -> SymplecticElement:
    return SymplecticElement(name, np.eye(4), efficiency)


def phase_shift(phi: float, name: str = "phase") -> SymplecticElement:
    """Delay the V mode by phi relative to H, theta -> theta + phi"""
    return passive_element(name, np.diag([1.0, np.exp(1j * phi)]))


def single_mode_squeezer(r: float, mode: str = "H", angle: float = 0.0, name: str = "squeezer") -> SymplecticElement:
    """
    Ideal degenerate squeezer on one lab-frame mode: the quadrature at
    ``angle`` is scaled by exp(-r) and its conjugate by exp(r).
    """
    block = rotation(angle) @ np.diag([math.exp(-r), math.exp(r)]) @ rotation(-angle)
    matrix = np.eye(4)
    offset = {"H": 0, "V": 2}.get(mode.upper())
    if offset is None:
        raise DomainError(f"mode must be 'H' or 'V', got {mode!r}")
    matrix[offset:offset + 2, offset:offset + 2] = block
    return SymplecticElement(name, matrix)


def compose(first: SymplecticElement, second: SymplecticElement, name: Optional[str] = None) -> SymplecticElement:
    """
    Single element equal to applying ``first`` then ``second``.

    A lossy first element can only be folded into a passive second element;
    otherwise the vacuum admixture is not of the form (1 - eta) * I.
    """
    if not first.is_pure and not second.is_passive:
        raise DomainError("cannot fold a lossy element into a non-passive one")
    efficiency = first.efficiency * second.efficiency
    return SymplecticElement(
        name or f"{first.name}>{second.name}",
        second.matrix @ first.matrix,
        None if efficiency == 1.0 else efficiency,
    )


def _phase(x: float, p: float, fallback: float) -> float:
    if math.hypot(x, p) <= _AMPLITUDE_FLOOR:
        return fallback
    return math.atan2(p, x)


def from_lab_frame(mean: np.ndarray, covariance: np.ndarray, frequencies: np.ndarray, previous_phase: float) -> TwoModeState:
    """Re-reference lab-frame moments to the local frames of the two modes"""
    alpha_h = 0.5 * math.hypot(mean[0], mean[1])
    alpha_v = 0.5 * math.hypot(mean[2], mean[3])
    if alpha_h > _AMPLITUDE_FLOOR:
        phi_h = math.atan2(mean[1], mean[0])
        phi_v = _phase(mean[2], mean[3], phi_h)
    else:
        phi_v = _phase(mean[2], mean[3], previous_phase)
        phi_h = phi_v
    rot = frame_rotation(phi_h, phi_v)
    local = rot.T @ covariance @ rot
    theta = math.remainder(phi_v - phi_h, 2.0 * math.pi)
    return TwoModeState.from_covariance(alpha_h, alpha_v, theta, frequencies, local, phi_h)


def apply_element(state: TwoModeState, element: SymplecticElement) -> TwoModeState:
    matrix = element.matrix
    eta = element.efficiency
    mean = math.sqrt(eta) * (matrix @ state.lab_mean())
    covariance = eta * (matrix @ state.lab_covariance() @ matrix.T) + (1.0 - eta) * np.eye(4)
    if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(covariance))):
        raise NumericError(f"element '{element.name}' produced non-finite moments")
    logger.debug("Applied element %s (eta=%g)", element.name, eta)
    return from_lab_frame(mean, covariance, state.frequencies, state.reference_phase)


def add_correlated_classical_noise(
    state: TwoModeState,
    quadrature: Union[Quadrature, str],
    variance_excess,
    correlation: int,
) -> TwoModeState:
    """
    Add classical noise that is common to both modes.

    ``variance_excess`` (scalar or one value per frequency) is added to the
    chosen quadrature of each mode and ``correlation * variance_excess`` to the
    H-V cross covariance of that quadrature.
    """
    if correlation not in (1, -1):
        raise DomainError(f"correlation must be +1 or -1, got {correlation}")
    quadrature = Quadrature(quadrature)
    excess = np.broadcast_to(np.asarray(variance_excess, dtype=float), state.frequencies.shape)
    if np.any(excess < 0.0) or not np.all(np.isfinite(excess)):
        raise DomainError("excess variance must be finite and >= 0")

    k = quadrature.offset
    cov = np.array(state.covariance)
    cov[:, k, k] += excess
    cov[:, k + 2, k + 2] += excess
    cov[:, k, k + 2] += correlation * excess
    cov[:, k + 2, k] += correlation * excess

    is_valid, _, error_msg = validation_service.validate_covariance(cov)
    assert is_valid, error_msg
    return TwoModeState.from_covariance(
        state.alpha_h, state.alpha_v, state.theta, state.frequencies, cov, state.reference_phase
    )


def attenuate_state(state: TwoModeState, efficiency: float) -> TwoModeState:
    """Equal loss on both polarizations"""
    return apply_element(state, loss_element(efficiency))
