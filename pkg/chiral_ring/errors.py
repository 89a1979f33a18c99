"""
Simulator Errors
One exception class per failure mode of the simulator

Parameter and configuration problems derive from ValueError so callers
can treat them as bad input; numerical failures derive from RuntimeError.
"""


class ChiralRingError(Exception):
    """Root of every error raised by the simulator."""


# ============================================
# Input Errors
# ============================================

class InvalidParameter(ChiralRingError, ValueError):
    """A physical parameter is non-finite, non-positive, or out of range."""

    def __init__(self, field: str, value, reason: str):
        self.field = field
        self.value = value
        self.reason = reason
        super().__init__(f"Invalid parameter '{field}' = {value!r}: {reason}")


class IndexOutOfRange(ChiralRingError, IndexError):
    """A site, bond, or quasi-momentum index outside [0, N)."""

    def __init__(self, name: str, index: int, n_sites: int):
        self.name = name
        self.index = index
        self.n_sites = n_sites
        super().__init__(f"{name} index {index} out of range for ring of {n_sites} sites")


class ConfigError(ChiralRingError, ValueError):
    """A run configuration file is unreadable or violates the schema."""

    def __init__(self, message: str, errors=None):
        self.errors = list(errors or [])
        super().__init__(message)


class DimensionMismatch(ChiralRingError, ValueError):
    """Operators handed to a builder do not share one Hilbert space."""


class AxisMismatch(ChiralRingError, ValueError):
    """Two sweeps cannot be compared cell by cell."""


# ============================================
# Numerical Errors
# ============================================

class DegenerateDrive(ChiralRingError, ValueError):
    """Cavity drive exactly on the undamped cavity resonance."""


class PerturbationInvalid(ChiralRingError, ValueError):
    """The drive is too close to the qubit resonance for perturbation theory."""


class NotHermitian(ChiralRingError, ValueError):
    """A matrix expected to be Hermitian is not, within tolerance."""


class EigenFailure(ChiralRingError, RuntimeError):
    """The dense eigensolver did not converge or failed its residual check."""


class SolverFailure(ChiralRingError, RuntimeError):
    """A steady-state or expectation-value computation failed."""


class DegenerateSteadyState(SolverFailure):
    """The generator has more than one stationary state."""


class SingularRateGraph(SolverFailure):
    """The rate matrix cannot define a stationary distribution."""


class StepSizeTooLarge(ChiralRingError, ValueError):
    """Time step too large for the fourth-order integrator."""


class InvalidState(ChiralRingError, ValueError):
    """A density matrix violates trace, Hermiticity, or positivity bounds."""
