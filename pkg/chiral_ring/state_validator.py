"""
State Validator
Chainable checks on density matrices and population vectors

Features:
- Trace validation
- Hermiticity validation
- Positivity validation
- Steady-state residual validation
- Population range validation
"""
from typing import Optional

import numpy as np

from chiral_ring.errors import InvalidState
from chiral_ring.sim_logger import logger

TRACE_TOL = 1e-10
HERMITIAN_TOL = 1e-10
POSITIVITY_TOL = 1e-8


class StateValidator:
    """
    Density-matrix validator.

    Every check raises InvalidState on failure and returns self, so checks
    can be chained:

        StateValidator(rho).assert_trace_one().assert_hermitian().assert_positive()
    """

    def __init__(self, matrix: np.ndarray, name: str = "rho"):
        """
        Initialize validator with a density matrix.

        Args:
            matrix: Square complex matrix
            name: Label used in error messages
        """
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidState(f"{name} must be square, got shape {matrix.shape}")
        self.matrix = matrix
        self.name = name
        self._eigenvalues: Optional[np.ndarray] = None

    # ============================================
    # Diagnostics
    # ============================================

    @property
    def trace_error(self) -> float:
        return float(abs(np.trace(self.matrix) - 1.0))

    @property
    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    @property
    def min_eigenvalue(self) -> float:
        if self._eigenvalues is None:
            self._eigenvalues = np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))
        return float(self._eigenvalues.min())

    # ============================================
    # Checks
    # ============================================

    def assert_trace_one(self, tol: float = TRACE_TOL) -> 'StateValidator':
        """
        Assert |tr ρ − 1| < tol.

        Returns:
            StateValidator: self (for method chaining)
        """
        if not self.trace_error < tol:
            raise InvalidState(f"{self.name}: trace error {self.trace_error:.3e} exceeds {tol:g}")
        logger.debug(f"{self.name}: trace OK ({self.trace_error:.1e})")
        return self

    def assert_hermitian(self, tol: float = HERMITIAN_TOL) -> 'StateValidator':
        """
        Assert ‖ρ − ρ†‖_max < tol.

        Returns:
            StateValidator: self (for method chaining)
        """
        if not self.hermiticity_error < tol:
            raise InvalidState(f"{self.name}: Hermiticity error "
                               f"{self.hermiticity_error:.3e} exceeds {tol:g}")
        logger.debug(f"{self.name}: Hermitian OK")
        return self

    def assert_positive(self, tol: float = POSITIVITY_TOL) -> 'StateValidator':
        """
        Assert the smallest eigenvalue is above −tol. Nothing is repaired.

        Returns:
            StateValidator: self (for method chaining)
        """
        if not self.min_eigenvalue > -tol:
            raise InvalidState(f"{self.name}: eigenvalue {self.min_eigenvalue:.3e} below -{tol:g}")
        logger.debug(f"{self.name}: positive OK (min eigenvalue {self.min_eigenvalue:.1e})")
        return self

    def assert_physical(self, trace_tol: float = TRACE_TOL) -> 'StateValidator':
        return self.assert_trace_one(trace_tol).assert_hermitian().assert_positive()

    def assert_stationary(self, generator: np.ndarray, tol: float = 1e-9) -> 'StateValidator':
        """
        Assert ‖L vec(ρ)‖_max < tol·‖L‖_max for a row-major vectorized generator.

        Returns:
            StateValidator: self (for method chaining)
        """
        scale = max(float(np.max(np.abs(generator))), np.finfo(float).tiny)
        residual = float(np.max(np.abs(generator @ self.matrix.reshape(-1)))) / scale
        if not residual < tol:
            raise InvalidState(f"{self.name}: stationarity residual {residual:.3e} exceeds {tol:g}")
        logger.debug(f"{self.name}: stationary OK ({residual:.1e})")
        return self


def assert_populations(populations: np.ndarray, tol: float = 1e-12,
                       name: str = "populations") -> np.ndarray:
    """
    Check a probability vector: entries ≥ −tol and sum 1 within 1e-10.

    Returns:
        The vector with entries in [−tol, 0) set to zero
    """
    populations = np.asarray(populations, dtype=float)
    if not np.all(np.isfinite(populations)):
        raise InvalidState(f"{name}: non-finite entries")
    if populations.size and populations.min() < -tol:
        raise InvalidState(f"{name}: entry {populations.min():.3e} below -{tol:g}")
    if abs(populations.sum() - 1.0) >= TRACE_TOL:
        raise InvalidState(f"{name}: sum {populations.sum():.12f} differs from 1")
    return np.where(populations < 0.0, 0.0, populations)
