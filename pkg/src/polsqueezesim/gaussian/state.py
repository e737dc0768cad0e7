"""
Two-mode (H, V) linearized Gaussian beam

Fields in the lab frame are
    b_H = exp(i*phi)         * (alpha_H + (dX_H+ + i dX_H-) / 2)
    b_V = exp(i*(phi+theta)) * (alpha_V + (dX_V+ + i dX_V-) / 2)
with phi the reference phase of the H mode. Quadratures are stored in the
local frame of each mode, index order (X_H+, X_H-, X_V+, X_V-), as one dense
symmetric 4x4 covariance per sideband frequency. Stokes parameters do not
depend on phi; it is kept so that composed transforms stay exact.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.polsqueezesim.exceptions import AdmissibilityError, DomainError, NumericError
from src.polsqueezesim.gaussian.modes import BeamMode, _frozen
from src.polsqueezesim.guardrail.validation_service import validation_service

logger = logging.getLogger(__name__)


def mode_covariance(mode_h: BeamMode, mode_v: BeamMode) -> np.ndarray:
    """Block-diagonal covariance of two uncorrelated modes, shape (F, 4, 4)"""
    n = mode_h.frequencies.size
    cov = np.zeros((n, 4, 4))
    cov[:, 0, 0] = mode_h.v_plus
    cov[:, 1, 1] = mode_h.v_minus
    cov[:, 2, 2] = mode_v.v_plus
    cov[:, 3, 3] = mode_v.v_minus
    return cov


def rotation(phi: float) -> np.ndarray:
    """Quadrature rotation produced by multiplying a mode by exp(i*phi)"""
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


def frame_rotation(phi_h: float, phi_v: float) -> np.ndarray:
    rot = np.zeros((4, 4))
    rot[:2, :2] = rotation(phi_h)
    rot[2:, 2:] = rotation(phi_v)
    return rot


@dataclass(frozen=True, eq=False)
class TwoModeState:
    mode_h: BeamMode
    mode_v: BeamMode
    theta: float
    covariance: np.ndarray
    reference_phase: float = 0.0

    def __post_init__(self):
        if not self.mode_h.same_grid(self.mode_v):
            raise DomainError("H and V modes must share one frequency grid")
        if not (math.isfinite(self.theta) and math.isfinite(self.reference_phase)):
            raise NumericError("phases must be finite")
        cov = np.asarray(self.covariance, dtype=float)
        expected = (self.mode_h.frequencies.size, 4, 4)
        if cov.shape != expected:
            raise DomainError(f"covariance must have shape {expected}, got {cov.shape}")

        is_valid, cov, error_msg = validation_service.validate_covariance(cov)
        if not is_valid:
            raise NumericError(error_msg)

        diagonal = np.stack(
            [self.mode_h.v_plus, self.mode_h.v_minus, self.mode_v.v_plus, self.mode_v.v_minus], axis=-1
        )
        stored = np.diagonal(cov, axis1=-2, axis2=-1)
        if not np.allclose(stored, diagonal, rtol=1e-9, atol=1e-12):
            raise DomainError("covariance diagonal disagrees with the mode noise spectra")

        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "reference_phase", float(self.reference_phase))
        object.__setattr__(self, "covariance", _frozen(cov))

    @classmethod
    def uncorrelated(cls, mode_h: BeamMode, mode_v: BeamMode, theta: float = 0.0) -> "TwoModeState":
        if not mode_h.same_grid(mode_v):
            raise DomainError("H and V modes must share one frequency grid")
        return cls(mode_h, mode_v, theta, mode_covariance(mode_h, mode_v))

    @classmethod
    def from_covariance(
        cls,
        alpha_h: float,
        alpha_v: float,
        theta: float,
        frequencies: np.ndarray,
        covariance: np.ndarray,
        reference_phase: float = 0.0,
    ) -> "TwoModeState":
        """Build a state whose mode spectra are read off the covariance diagonal"""
        cov = np.asarray(covariance, dtype=float)
        diag = np.diagonal(cov, axis1=-2, axis2=-1)
        try:
            mode_h = BeamMode(alpha_h, frequencies, diag[:, 0], diag[:, 1])
            mode_v = BeamMode(alpha_v, frequencies, diag[:, 2], diag[:, 3])
        except AdmissibilityError as e:
            raise AdmissibilityError(f"transformed state is not admissible: {e}") from e
        return cls(mode_h, mode_v, theta, cov, reference_phase)

    @property
    def frequencies(self) -> np.ndarray:
        return self.mode_h.frequencies

    @property
    def alpha_h(self) -> float:
        return self.mode_h.amplitude

    @property
    def alpha_v(self) -> float:
        return self.mode_v.amplitude

    @property
    def photon_number(self) -> float:
        """<n> = alpha_H**2 + alpha_V**2, the shot-noise level of the beam"""
        return self.mode_h.power + self.mode_v.power

    @property
    def local_mean(self) -> np.ndarray:
        return np.array([2.0 * self.alpha_h, 0.0, 2.0 * self.alpha_v, 0.0])

    def lab_frame(self) -> np.ndarray:
        return frame_rotation(self.reference_phase, self.reference_phase + self.theta)

    def lab_mean(self) -> np.ndarray:
        """Mean quadrature vector of (b_H, b_V) in the lab frame"""
        return self.lab_frame() @ self.local_mean

    def lab_covariance(self) -> np.ndarray:
        rot = self.lab_frame()
        return rot @ self.covariance @ rot.T

    def slice(self, index: int) -> "TwoModeState":
        """Single-frequency state at grid position ``index``"""
        sel = slice(index, index + 1) if index != -1 else slice(-1, None)
        return TwoModeState.from_covariance(
            self.alpha_h,
            self.alpha_v,
            self.theta,
            self.frequencies[sel],
            self.covariance[sel],
            self.reference_phase,
        )

    def index_of(self, frequency: float, rtol: float = 1e-9) -> Optional[int]:
        hits = np.flatnonzero(np.isclose(self.frequencies, frequency, rtol=rtol, atol=0.0))
        return int(hits[0]) if hits.size else None

    def with_theta(self, theta: float) -> "TwoModeState":
        return TwoModeState(self.mode_h, self.mode_v, theta, self.covariance, self.reference_phase)

    def swapped(self) -> "TwoModeState":
        """Relabel H <-> V; the relative phase changes sign"""
        perm = [2, 3, 0, 1]
        cov = self.covariance[:, perm][:, :, perm]
        return TwoModeState(
            self.mode_v, self.mode_h, -self.theta, cov, self.reference_phase + self.theta
        )

    def allclose(self, other: "TwoModeState", rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        """Physical equality: same lab-frame means and covariances"""
        return bool(
            np.array_equal(self.frequencies, other.frequencies)
            and np.allclose(self.lab_mean(), other.lab_mean(), rtol=rtol, atol=atol)
            and np.allclose(self.lab_covariance(), other.lab_covariance(), rtol=rtol, atol=atol)
        )
