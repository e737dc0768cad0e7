"""
Covariance Validation Service
Checks quadrature covariances and noise spectra before a state is built
"""
from typing import Optional, Tuple

import numpy as np

from src.polsqueezesim.ui.uiconfigfile import sim_config

# Symplectic form for the ordering (X_H+, X_H-, X_V+, X_V-); [X+, X-] = 2i
SYMPLECTIC_FORM = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)


class ValidationService:
    """Service for validating covariance matrices and quadrature spectra"""

    def __init__(self, config=sim_config):
        self.config = config
        self.psd_tolerance = config.get_psd_relative_tolerance()
        self.admissibility_tolerance = config.get_admissibility_tolerance()

    def validate_covariance(self, covariance: np.ndarray) -> Tuple[bool, np.ndarray, Optional[str]]:
        """
        Validate a stack of symmetric covariance matrices (..., n, n).

        Eigenvalues down to -tolerance * trace count as round-off and are
        clamped to zero.

        Returns:
            Tuple[bool, np.ndarray, Optional[str]]: (is_valid, processed_covariance, error_message)
        """
        cov = np.asarray(covariance, dtype=float)
        if cov.ndim < 2 or cov.shape[-1] != cov.shape[-2]:
            return False, cov, f"covariance must be square, got shape {cov.shape}"
        if not np.all(np.isfinite(cov)):
            return False, cov, "covariance has non-finite entries"

        asymmetry = np.abs(cov - np.swapaxes(cov, -1, -2))
        scale = np.maximum(np.abs(cov).max(axis=(-1, -2), keepdims=True), 1.0)
        if np.any(asymmetry > 1e-12 * scale):
            return False, cov, "covariance is not symmetric"
        cov = 0.5 * (cov + np.swapaxes(cov, -1, -2))

        eigenvalues, eigenvectors = np.linalg.eigh(cov)
        trace = np.trace(cov, axis1=-2, axis2=-1)[..., None]
        floor = -self.psd_tolerance * np.abs(trace)
        if np.any(eigenvalues < floor):
            worst = float(eigenvalues.min())
            return False, cov, f"covariance is not positive semidefinite (eigenvalue {worst:.3e})"

        if np.any(eigenvalues < 0.0):
            clamped = np.clip(eigenvalues, 0.0, None)
            cov = np.einsum("...ik,...k,...jk->...ij", eigenvectors, clamped, eigenvectors)
        return True, cov, None

    def validate_admissibility(self, v_plus: np.ndarray, v_minus: np.ndarray) -> Tuple[bool, Optional[str]]:
        """
        Check V+ > 0, V- > 0 and V+ * V- >= 1 at every frequency.

        Returns:
            Tuple[bool, Optional[str]]: (is_valid, error_message)
        """
        v_plus = np.asarray(v_plus, dtype=float)
        v_minus = np.asarray(v_minus, dtype=float)
        if not (np.all(np.isfinite(v_plus)) and np.all(np.isfinite(v_minus))):
            return False, "quadrature variances must be finite"
        if np.any(v_plus <= 0.0) or np.any(v_minus <= 0.0):
            return False, "quadrature variances must be positive"
        product = v_plus * v_minus
        if np.any(product < 1.0 - self.admissibility_tolerance):
            worst = float(product.min())
            return False, f"uncertainty product V+*V- = {worst:.6g} is below 1"
        return True, None

    def validate_physical(self, covariance: np.ndarray) -> Tuple[bool, Optional[str]]:
        """
        Full Gaussian-state condition C + i*Omega >= 0 for a stack of 4x4 covariances.

        Returns:
            Tuple[bool, Optional[str]]: (is_physical, error_message)
        """
        cov = np.asarray(covariance, dtype=float)
        eigenvalues = np.linalg.eigvalsh(cov + 1j * SYMPLECTIC_FORM)
        trace = np.trace(cov, axis1=-2, axis2=-1)[..., None]
        if np.any(eigenvalues < -self.psd_tolerance * np.maximum(trace, 1.0)):
            return False, f"covariance violates C + i*Omega >= 0 (eigenvalue {float(eigenvalues.min()):.3e})"
        return True, None


# Global instance
validation_service = ValidationService()
