"""
Monte-Carlo Stokes oracle

Quadrature fluctuations x ~ N(0, C) are drawn in the local frames of the two
modes and substituted into the complex amplitudes
    a_H = alpha_H + (x_H+ + i x_H-) / 2
    a_V = exp(i theta) * (alpha_V + (x_V+ + i x_V-) / 2)
Linearized mode keeps the first-order Stokes fluctuations; FullQuadratic
evaluates S0 = |a_H|^2 + |a_V|^2, S1 = |a_H|^2 - |a_V|^2,
S2 + i S3 = 2 conj(a_H) a_V on the samples. These are classical
(symmetric-ordered) moments: no operator-ordering corrections are added.
Both modes are computed from the same draws.
"""
import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from src.polsqueezesim.exceptions import DomainError, SamplingError
from src.polsqueezesim.gaussian.state import TwoModeState
from src.polsqueezesim.oracle.streams import BIT_GENERATOR, chunk_sizes, spawn_generators
from src.polsqueezesim.stokes.engine import STOKES_LABELS, stokes_coefficients, stokes_means
from src.polsqueezesim.ui.uiconfigfile import sim_config

logger = logging.getLogger(__name__)

MIN_SAMPLES = 10_000
MAX_SAMPLES = 100_000_000


class SampleMode(str, enum.Enum):
    LINEARIZED = "Linearized"
    FULL_QUADRATIC = "FullQuadratic"


@dataclass(frozen=True)
class SampleConfig:
    sample_count: int
    seed: int
    mode: SampleMode = SampleMode.LINEARIZED
    chunk_size: Optional[int] = None
    workers: Optional[int] = None

    def __post_init__(self):
        if not MIN_SAMPLES <= self.sample_count <= MAX_SAMPLES:
            raise DomainError(f"sample count must lie in [{MIN_SAMPLES}, {MAX_SAMPLES}], got {self.sample_count}")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        object.__setattr__(self, "mode", SampleMode(self.mode))
        if self.chunk_size is None:
            object.__setattr__(self, "chunk_size", sim_config.get_oracle_chunk())
        if self.workers is None:
            object.__setattr__(self, "workers", sim_config.get_oracle_workers())
        if self.chunk_size <= 0 or self.workers <= 0:
            raise DomainError("chunk size and worker count must be positive")

    @classmethod
    def default(cls, mode: SampleMode = SampleMode.LINEARIZED, seed: int = None) -> "SampleConfig":
        return cls(
            sim_config.get_oracle_samples(),
            sim_config.get_default_seed() if seed is None else seed,
            mode,
        )


@dataclass(frozen=True)
class _Moments:
    count: int
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def of(cls, values: np.ndarray) -> "_Moments":
        mean = values.mean(axis=0)
        return cls(values.shape[0], mean, ((values - mean) ** 2).sum(axis=0))

    def merge(self, other: "_Moments") -> "_Moments":
        """Pairwise update of count, mean and sum of squared deviations"""
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / count)
        m2 = self.m2 + other.m2 + delta**2 * (self.count * other.count / count)
        return _Moments(count, mean, m2)

    @property
    def variance(self) -> np.ndarray:
        return self.m2 / (self.count - 1)


@dataclass(frozen=True, eq=False)
class OracleEstimate:
    means: np.ndarray
    variances: np.ndarray
    mean_std_errors: np.ndarray
    variance_std_errors: np.ndarray
    mode: SampleMode
    seed: int
    n: int
    frequency: float
    shot_noise: float

    @property
    def normalized(self) -> np.ndarray:
        return self.variances / self.shot_noise

    def to_record(self) -> dict:
        return {
            "means": [float(v) for v in self.means],
            "variances": [float(v) for v in self.variances],
            "std_errors": {
                "means": [float(v) for v in self.mean_std_errors],
                "variances": [float(v) for v in self.variance_std_errors],
            },
            "mode": self.mode.value,
            "seed": int(self.seed),
            "n": int(self.n),
            "frequency_hz": float(self.frequency),
            "generator": BIT_GENERATOR,
        }


@dataclass(frozen=True)
class OracleGate:
    z_scores: Tuple[float, float, float, float]
    sigma: float

    @property
    def passed(self) -> bool:
        return all(z <= self.sigma for z in self.z_scores)

    @property
    def worst(self) -> float:
        return max(self.z_scores)


def covariance_factor(covariance: np.ndarray, rel_tol: float = None) -> np.ndarray:
    """Matrix L with L L^T = C, tolerant to singular (pure-state) covariances"""
    rel_tol = sim_config.get_psd_relative_tolerance() if rel_tol is None else rel_tol
    cov = np.asarray(covariance, dtype=float)
    if cov.shape != (4, 4) or not np.all(np.isfinite(cov)):
        raise SamplingError("oracle needs one finite 4x4 covariance")
    if not np.allclose(cov, cov.T, atol=1e-12 * max(1.0, float(np.abs(cov).max()))):
        raise SamplingError("covariance is not symmetric")
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    if eigenvalues.min() < -rel_tol * abs(np.trace(cov)):
        raise SamplingError(f"covariance is not positive semidefinite (eigenvalue {eigenvalues.min():.3e})")
    return eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))


def _single_frequency(state: TwoModeState, frequency: Optional[float]) -> TwoModeState:
    if frequency is None:
        if state.frequencies.size != 1:
            raise DomainError("choose a frequency: the oracle samples one sideband at a time")
        return state
    index = state.index_of(frequency)
    if index is None:
        raise DomainError(f"{frequency:g} Hz is not on the state's frequency grid")
    return state.slice(index)


def quadratic_stokes(x: np.ndarray, alpha_h: float, alpha_v: float, theta: float) -> np.ndarray:
    """Stokes values, shape (n, 4), from sampled local quadratures, shape (n, 4)"""
    a_h = alpha_h + 0.5 * (x[:, 0] + 1j * x[:, 1])
    a_v = np.exp(1j * theta) * (alpha_v + 0.5 * (x[:, 2] + 1j * x[:, 3]))
    p_h = np.abs(a_h) ** 2
    p_v = np.abs(a_v) ** 2
    cross = 2.0 * np.conj(a_h) * a_v
    return np.stack([p_h + p_v, p_h - p_v, cross.real, cross.imag], axis=-1)


def _chunk_moments(args) -> Dict[SampleMode, _Moments]:
    generator, size, factor, alpha_h, alpha_v, theta, means, coefficients = args
    x = generator.standard_normal((size, 4)) @ factor.T
    linear = means + x @ coefficients.T
    full = quadratic_stokes(x, alpha_h, alpha_v, theta)
    return {SampleMode.LINEARIZED: _Moments.of(linear), SampleMode.FULL_QUADRATIC: _Moments.of(full)}


def sample_both_modes(state: TwoModeState, config: SampleConfig, frequency: float = None) -> Dict[SampleMode, OracleEstimate]:
    state = _single_frequency(state, frequency)
    factor = covariance_factor(state.covariance[0])
    alpha_h, alpha_v, theta = state.alpha_h, state.alpha_v, state.theta
    means = stokes_means(state)
    coefficients = stokes_coefficients(alpha_h, alpha_v, theta)

    sizes = chunk_sizes(config.sample_count, config.chunk_size)
    generators = spawn_generators(config.seed, len(sizes))
    jobs = [(g, size, factor, alpha_h, alpha_v, theta, means, coefficients) for g, size in zip(generators, sizes)]

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_chunk_moments, jobs))
    else:
        results = [_chunk_moments(job) for job in jobs]

    estimates = {}
    for mode in SampleMode:
        moments = results[0][mode]
        for result in results[1:]:
            moments = moments.merge(result[mode])
        variances = moments.variance
        n = moments.count
        estimates[mode] = OracleEstimate(
            means=moments.mean,
            variances=variances,
            mean_std_errors=np.sqrt(variances / n),
            variance_std_errors=variances * math.sqrt(2.0 / (n - 1)),
            mode=mode,
            seed=config.seed,
            n=n,
            frequency=float(state.frequencies[0]),
            shot_noise=state.photon_number,
        )
    logger.debug(
        "Oracle at %g Hz: %d samples in %d chunks, seed %d",
        state.frequencies[0], config.sample_count, len(sizes), config.seed,
    )
    return estimates


def sample_stokes(state: TwoModeState, config: SampleConfig, frequency: float = None) -> OracleEstimate:
    """Empirical Stokes means and variances, with standard errors, at one sideband frequency"""
    return sample_both_modes(state, config, frequency)[config.mode]


def linearization_discrepancy(state: TwoModeState, config: SampleConfig, frequency: float = None) -> np.ndarray:
    """Relative difference of FullQuadratic against Linearized variances, per Stokes parameter"""
    estimates = sample_both_modes(state, config, frequency)
    linear = estimates[SampleMode.LINEARIZED].variances
    full = estimates[SampleMode.FULL_QUADRATIC].variances
    return np.abs(full - linear) / np.where(linear > 0.0, linear, 1.0)


def oracle_gate(analytic_variances, estimate: OracleEstimate, sigma: float = None) -> OracleGate:
    """Compare analytic variances to the sampled ones in units of the standard error"""
    sigma = sim_config.get_oracle_gate_sigma() if sigma is None else sigma
    analytic = np.asarray(analytic_variances, dtype=float).reshape(4)
    errors = estimate.variance_std_errors
    deltas = np.abs(estimate.variances - analytic)
    z_scores = tuple(
        float(d / e) if e > 0.0 else (0.0 if d <= 1e-12 * max(abs(a), 1.0) else math.inf)
        for d, e, a in zip(deltas, errors, analytic)
    )
    gate = OracleGate(z_scores, sigma)
    if not gate.passed:
        worst = STOKES_LABELS[int(np.argmax(z_scores))]
        logger.warning("Oracle gate failed at %g Hz: %s off by %.1f sigma", estimate.frequency, worst, gate.worst)
    return gate
