"""
State Validator Tests
Test the density-matrix and population checks
"""
import numpy as np
import pytest

from chiral_ring.errors import InvalidState
from chiral_ring.state_validator import StateValidator, assert_populations


class TestStateValidator:
    """Test StateValidator checks and chaining"""

    def test_pure_state_passes(self, param_factory):
        """Test: Random pure state passes every check"""
        state = param_factory.random_state(8)
        rho = np.outer(state, state.conj())

        validator = StateValidator(rho).assert_physical()
        assert validator.trace_error < 1e-12
        print(f"✓ min eigenvalue {validator.min_eigenvalue:.2e}")

    def test_chaining_returns_self(self):
        """Test: Each check returns the validator"""
        validator = StateValidator(np.eye(2) / 2)
        assert validator.assert_trace_one().assert_hermitian().assert_positive() is validator

    def test_trace_failure(self):
        """Test: Trace 2 is rejected"""
        with pytest.raises(InvalidState, match="trace"):
            StateValidator(np.eye(2)).assert_trace_one()

    def test_hermiticity_failure(self):
        """Test: Asymmetric off-diagonal is rejected"""
        rho = np.array([[0.5, 0.1], [0.0, 0.5]])
        with pytest.raises(InvalidState, match="Hermiticity"):
            StateValidator(rho, name="sample").assert_hermitian()

    def test_positivity_failure(self):
        """Test: Negative eigenvalue is reported, not repaired"""
        rho = np.diag([1.1, -0.1])
        validator = StateValidator(rho)

        with pytest.raises(InvalidState, match="eigenvalue"):
            validator.assert_positive()
        assert validator.min_eigenvalue == pytest.approx(-0.1)

    def test_tolerance_respected(self):
        """Test: Tiny negative eigenvalue within tolerance passes"""
        StateValidator(np.diag([1.0 + 1e-10, -1e-10])).assert_positive()

    def test_time_evolved_trace_tolerance(self):
        """Test: Trace drift of 4·10⁻⁹ fails the default check but passes trace_tol = 1e-8"""
        rho = np.diag([0.75 + 4e-9, 0.25])
        with pytest.raises(InvalidState, match="trace"):
            StateValidator(rho).assert_physical()
        assert StateValidator(rho).assert_physical(trace_tol=1e-8).trace_error < 1e-8

    def test_non_square(self):
        """Test: Non-square input is rejected at construction"""
        with pytest.raises(InvalidState):
            StateValidator(np.zeros((2, 3)))

    def test_stationary(self):
        """Test: Stationarity check against a diagonal generator"""
        generator = np.diag([0.0, -1.0, -1.0, -2.0]).astype(complex)
        StateValidator(np.diag([1.0, 0.0])).assert_stationary(generator)

        with pytest.raises(InvalidState, match="stationarity"):
            StateValidator(np.diag([0.5, 0.5])).assert_stationary(generator)


class TestPopulations:

    def test_valid(self):
        """Test: Probability vector passes unchanged"""
        assert assert_populations([0.25, 0.75]).tolist() == [0.25, 0.75]

    def test_round_off_clipped(self):
        """Test: Entries in [−tol, 0) are clipped to zero"""
        result = assert_populations([1.0 + 1e-13, -1e-13])
        assert result[1] == 0.0

    @pytest.mark.parametrize("populations", [
        [1.2, -0.2],
        [0.5, 0.4],
        [np.nan, 1.0],
    ])
    def test_invalid(self, populations):
        """Test: Negative, unnormalized or non-finite vectors raise"""
        with pytest.raises(InvalidState):
            assert_populations(populations)
