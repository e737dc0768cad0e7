"""
Linearized Stokes statistics of a two-mode state

To first order in the quadrature noise the Stokes fluctuations are linear
forms c_j . dX in the local quadratures (X_H+, X_H-, X_V+, X_V-):
    dS0 = alpha_H dX_H+ + alpha_V dX_V+
    dS1 = alpha_H dX_H+ - alpha_V dX_V+
    dS2 = alpha_V (cos t dX_H+ + sin t dX_H-) + alpha_H (cos t dX_V+ - sin t dX_V-)
    dS3 = alpha_V (sin t dX_H+ - cos t dX_H-) + alpha_H (sin t dX_V+ + cos t dX_V-)
so V_j = c_j^T C c_j for any covariance C, correlated or not.
"""
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from src.polsqueezesim.exceptions import DomainError, LinearizationWarning
from src.polsqueezesim.gaussian.state import TwoModeState
from src.polsqueezesim.spectra.spectrum import NoiseSpectrum, SpectrumMeta
from src.polsqueezesim.ui.uiconfigfile import sim_config

logger = logging.getLogger(__name__)

STOKES_LABELS: Tuple[str, ...] = ("S0", "S1", "S2", "S3")


@dataclass(frozen=True, eq=False)
class StokesStats:
    means: np.ndarray
    variances: np.ndarray
    shot_noise: float
    frequency: float

    def __post_init__(self):
        means = np.asarray(self.means, dtype=float).reshape(4)
        variances = np.asarray(self.variances, dtype=float).reshape(4)
        if np.any(variances < 0.0):
            raise DomainError("Stokes variances must be >= 0")
        if self.shot_noise < 0.0:
            raise DomainError("shot noise must be >= 0")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "variances", variances)

    @property
    def normalized(self) -> np.ndarray:
        """Variances in units of the shot noise <n>"""
        if self.shot_noise <= 0.0:
            raise DomainError("normalization needs a beam with non-zero power")
        return self.variances / self.shot_noise

    @property
    def db(self) -> np.ndarray:
        return 10.0 * np.log10(self.normalized)

    @property
    def classical_radius(self) -> float:
        return float(np.linalg.norm(self.means[1:]))

    def degree_of_polarization(self) -> float:
        if self.means[0] <= 0.0:
            raise DomainError("degree of polarization is undefined for zero intensity")
        return self.classical_radius / float(self.means[0])

    def commutator_means(self) -> Dict[str, float]:
        """<[S_j, S_k]> / 2i for the cyclic pairs, equal to <S_l>"""
        return {"S1S2": float(self.means[3]), "S2S3": float(self.means[1]), "S3S1": float(self.means[2])}

    def squeezed(self, tolerance: float = 0.0) -> Tuple[bool, bool, bool, bool]:
        return tuple(bool(v < 1.0 - tolerance) for v in self.normalized)


@dataclass(frozen=True)
class UncertaintyProduct:
    pair: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs

    def holds(self, rel_tol: float = 1e-9) -> bool:
        return self.slack >= -rel_tol * max(abs(self.rhs), abs(self.lhs), 1.0)


def stokes_coefficients(alpha_h: float, alpha_v: float, theta: float) -> np.ndarray:
    """Rows c_0..c_3 of the linear forms dS_j = c_j . dX"""
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [alpha_h, 0.0, alpha_v, 0.0],
            [alpha_h, 0.0, -alpha_v, 0.0],
            [alpha_v * c, alpha_v * s, alpha_h * c, -alpha_h * s],
            [alpha_v * s, -alpha_v * c, alpha_h * s, alpha_h * c],
        ]
    )


def stokes_means(state: TwoModeState) -> np.ndarray:
    a_h, a_v, theta = state.alpha_h, state.alpha_v, state.theta
    return np.array(
        [
            a_h**2 + a_v**2,
            a_h**2 - a_v**2,
            2.0 * a_h * a_v * math.cos(theta),
            2.0 * a_h * a_v * math.sin(theta),
        ]
    )


def check_linearization(state: TwoModeState, threshold: float = None) -> bool:
    """Warn when the largest quadrature variance exceeds threshold * <n>"""
    threshold = sim_config.get_linearization_threshold() if threshold is None else threshold
    largest = float(np.diagonal(state.covariance, axis1=-2, axis2=-1).max())
    power = state.photon_number
    if power > 0.0 and largest > threshold * power:
        warnings.warn(
            f"quadrature variance {largest:.3g} exceeds {threshold:g} * <n> = {threshold * power:.3g}; "
            "linearized Stokes statistics carry second-order errors",
            LinearizationWarning,
            stacklevel=3,
        )
        return False
    return True


def stokes_variances(state: TwoModeState) -> np.ndarray:
    """(V0, V1, V2, V3) per frequency, shape (F, 4)"""
    check_linearization(state)
    coefficients = stokes_coefficients(state.alpha_h, state.alpha_v, state.theta)
    return np.einsum("ji,fik,jk->fj", coefficients, state.covariance, coefficients)


def stokes_stats(state: TwoModeState) -> List[StokesStats]:
    means = stokes_means(state)
    variances = stokes_variances(state)
    return [
        StokesStats(means, variances[i], state.photon_number, float(f))
        for i, f in enumerate(state.frequencies)
    ]


def stokes_stats_at(state: TwoModeState, frequency: float) -> StokesStats:
    index = state.index_of(frequency)
    if index is None:
        raise DomainError(f"{frequency:g} Hz is not on the state's frequency grid")
    return stokes_stats(state.slice(index))[0]


def stokes_spectra(state: TwoModeState) -> Dict[str, NoiseSpectrum]:
    """Variance spectra of S0..S3 referenced to the beam's shot noise"""
    variances = stokes_variances(state)
    return {
        label: NoiseSpectrum(state.frequencies, variances[:, j], state.photon_number, SpectrumMeta(label=label))
        for j, label in enumerate(STOKES_LABELS)
    }


def uncertainty_products(stats: StokesStats) -> Tuple[UncertaintyProduct, UncertaintyProduct, UncertaintyProduct]:
    """V1 V2 >= <S3>^2, V2 V3 >= <S1>^2, V3 V1 >= <S2>^2"""
    v, s = stats.variances, stats.means
    return (
        UncertaintyProduct("V1V2", float(v[1] * v[2]), float(s[3] ** 2)),
        UncertaintyProduct("V2V3", float(v[2] * v[3]), float(s[1] ** 2)),
        UncertaintyProduct("V3V1", float(v[3] * v[1]), float(s[2] ** 2)),
    )


def poincare_radius(stats: StokesStats) -> float:
    """
    Quantum radius <S0^2 + 2 S0>^(1/2) with <S0^2> = <S0>^2 + V0.

    V0 is the linearized variance, so a vacuum state gives 0 here rather than
    the exact operator value.
    """
    s0 = float(stats.means[0])
    return math.sqrt(s0**2 + float(stats.variances[0]) + 2.0 * s0)


def single_squeezed_bound_check(state: TwoModeState) -> np.ndarray:
    """
    min over i != j in {1, 2, 3} of (V_i + V_j) / <n>, per frequency.

    With at most one squeezed input this never drops below 1.
    """
    if state.photon_number <= 0.0:
        raise DomainError("the bound is normalized to <n> and needs a bright beam")
    v = stokes_variances(state)
    pairs = np.stack([v[:, 1] + v[:, 2], v[:, 2] + v[:, 3], v[:, 3] + v[:, 1]], axis=-1)
    return pairs.min(axis=-1) / state.photon_number
