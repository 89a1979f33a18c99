"""
Observable Tests
Bond currents, chiral populations, resonance curves and the star model
"""
import math

import numpy as np
import pytest

from chiral_ring.errors import SolverFailure
from chiral_ring.model import DriveParams
from chiral_ring.observables import (
    PointResult, analytic_populations, current_from_populations,
    current_operator_expectation, optimal_drive_frequency, populations_nk,
)
from chiral_ring.operators import chiral_state, ground_state
from chiral_ring.steadystate import DensityMatrix


def _chiral_mixture(device, weights, ground_weight=0.0):
    """Σ_k w_k|k⟩⟨k| + w_0|0⟩⟨0| without coherences."""
    rho = ground_weight * DensityMatrix.pure(ground_state(device)).matrix
    for k_index, weight in enumerate(weights):
        rho = rho + weight * DensityMatrix.pure(chiral_state(k_index, device)).matrix
    return rho


@pytest.mark.observables
class TestCurrent:

    def test_vacuum(self, device, drive):
        """Test: |0⟩⟨0| carries no current on any bond"""
        reading = current_operator_expectation(DensityMatrix.pure(ground_state(3)).matrix,
                                               device, drive)
        assert np.all(reading.bond_currents == 0.0)
        assert reading.mean == 0.0

    @pytest.mark.parametrize("k_index", [0, 1, 2])
    def test_chiral_state(self, device, drive, k_index):
        """Test: |k⟩⟨k| gives (2J_0/N) sin(k + φ) uniformly over the bonds"""
        rho = DensityMatrix.pure(chiral_state(k_index, device)).matrix
        reading = current_operator_expectation(rho, device, drive)
        expected = 2 * device.j0 / 3 * math.sin(2 * math.pi * k_index / 3 + drive.phi)

        assert reading.mean == pytest.approx(expected, abs=1e-17)
        assert reading.spread < 1e-17

    def test_imaginary_expectation(self, device, omega_bar):
        """Test: Non-Hermitian input with a complex current raises SolverFailure"""
        rho = np.zeros((8, 8), dtype=complex)
        rho[2, 1] = 1.0
        with pytest.raises(SolverFailure, match="imaginary"):
            current_operator_expectation(rho, device, DriveParams(omega_d=omega_bar, phi=0.0))

    def test_population_formula_matches_operator(self, device, drive):
        """Test: Closed-form current equals Tr[Iρ] without inter-k coherences"""
        weights = [0.4, 0.15, 0.05]
        rho = _chiral_mixture(device, weights, ground_weight=0.4)

        operator = current_operator_expectation(rho, device, drive).mean
        closed_form = current_from_populations(weights, drive.phi, device)
        assert closed_form == pytest.approx(operator, abs=1e-18)

    @pytest.mark.parametrize("phi", [0.0, math.pi / 3, 2 * math.pi / 3, math.pi])
    def test_uniform_populations_cancel(self, device, phi):
        """Test: Equal n_k give zero current at any phase"""
        assert current_from_populations([0.2, 0.2, 0.2], phi, device) == pytest.approx(0.0, abs=1e-19)


@pytest.mark.observables
class TestPopulations:

    def test_chiral_populations(self, device):
        """Test: n_k and n_ground recover the mixture weights"""
        rho = _chiral_mixture(device, [0.3, 0.2, 0.1], ground_weight=0.4)
        n_k, n_ground = populations_nk(rho, device)

        assert n_k == pytest.approx([0.3, 0.2, 0.1], abs=1e-15)
        assert n_ground == pytest.approx(0.4, abs=1e-15)

    def test_site_localized_state(self, device):
        """Test: A single-site excitation spreads evenly over k"""
        state = np.zeros(8, dtype=complex)
        state[1] = 1.0
        n_k, n_ground = populations_nk(DensityMatrix.pure(state).matrix, device)

        assert n_k == pytest.approx([1 / 3] * 3, abs=1e-15)
        assert n_ground == 0.0


@pytest.mark.observables
class TestOptimalDrive:

    def test_band_center_at_quarter_flux(self, device):
        """Test: k = 0, φ = π/2 sits at ω̄_d = 6.5051875"""
        assert optimal_drive_frequency(0, math.pi / 2, device, 0.05) == \
            pytest.approx(6.5051875, abs=1e-12)

    @pytest.mark.parametrize("k_index", [0, 1, 2])
    def test_cosine_offset(self, device, omega_bar, k_index):
        """Test: ω_d^opt = ω̄_d − J_0 cos(k + φ)"""
        phi = 0.8
        expected = omega_bar - device.j0 * math.cos(2 * math.pi * k_index / 3 + phi)
        assert optimal_drive_frequency(k_index, phi, device, 0.05) == pytest.approx(expected, abs=1e-12)


@pytest.mark.observables
class TestStarModel:

    def test_on_curve_populations(self, device):
        """Test: On the k = 0 curve at φ = π/2, n_{k=0} ≈ 0.69"""
        phi = math.pi / 2
        drive = DriveParams(omega_d=optimal_drive_frequency(0, phi, device, 0.05), phi=phi)
        n_k, n_ground = analytic_populations(device, drive)

        print(f"  n_k = {n_k}, n_ground = {n_ground:.4f}")
        assert n_k[0] == pytest.approx(0.69, abs=0.01)
        assert n_k[1] < 0.01 and n_k[2] < 0.01
        assert n_ground + n_k.sum() == pytest.approx(1.0, abs=1e-14)

    def test_on_curve_current(self, device):
        """Test: On-curve current is of order 2J_0/N with the right sign"""
        phi = math.pi / 2
        drive = DriveParams(omega_d=optimal_drive_frequency(0, phi, device, 0.05), phi=phi)
        n_k, _ = analytic_populations(device, drive)
        current = current_from_populations(n_k, phi, device)
        scale = 2 * device.j0 / 3

        assert current == pytest.approx(scale * (n_k[0] - 0.5 * (n_k[1] + n_k[2])), rel=1e-12)
        assert 0.3 * scale <= current <= scale

    def test_undriven(self, device, omega_bar):
        """Test: ε_d = 0 leaves everything in the ground state"""
        n_k, n_ground = analytic_populations(device, DriveParams(omega_d=omega_bar, eps_d=0.0))
        assert n_ground == 1.0
        assert not np.any(n_k)

    def test_dressed_variant_close(self, device):
        """Test: Dressed and bare matrix elements give populations within a few percent"""
        phi = math.pi / 2
        drive = DriveParams(omega_d=optimal_drive_frequency(0, phi, device, 0.05), phi=phi)
        bare, _ = analytic_populations(device, drive)
        dressed, _ = analytic_populations(device, drive, dressed=True)
        assert dressed[0] == pytest.approx(bare[0], rel=0.05)


@pytest.mark.observables
class TestPointResult:

    def test_failed_point(self):
        """Test: Failed result carries NaNs and the error name"""
        point = PointResult.failed(6.5, 0.3, 3, 'nullspace', 'DegenerateSteadyState')

        assert not point.ok
        assert math.isnan(point.current_natural)
        assert np.all(np.isnan(point.n_k))
        assert point.to_dict()['solver_status'] == 'DegenerateSteadyState'

    def test_to_dict_is_plain(self):
        """Test: to_dict holds plain floats and lists"""
        point = PointResult(6.5, 0.3, 1e-4, 6e5, 0.3, np.array([0.5, 0.1, 0.1]),
                            np.array([1e-4] * 3), 0.0, 1e-15, 'rates')
        data = point.to_dict()

        assert data['n_k'] == [0.5, 0.1, 0.1]
        assert isinstance(data['bond_currents'], list)
        assert point.ok
