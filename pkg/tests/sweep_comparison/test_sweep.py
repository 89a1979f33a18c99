"""
Sweep Tests
Point solver, grid layout, failure isolation and the current-map symmetries
"""
import math

import numpy as np
import pytest

from chiral_ring.errors import ConfigError
from chiral_ring.model import DriveParams
from chiral_ring.observables import optimal_drive_frequency
from chiral_ring.sweep import (
    SweepResult, SweepSpec, analytic_sweep, default_omega_center, run_sweep, solve_point,
)


@pytest.fixture
def scale(device):
    """Natural current scale 2J_0/N"""
    return 2 * device.j0 / device.n_sites


@pytest.mark.sweep
class TestSolvePoint:

    @pytest.mark.parametrize("solver", ['rates', 'nullspace'])
    def test_numerical_solvers(self, device, drive, solver):
        """Test: Numerical solvers return a normalized, stationary state"""
        point = solve_point(device, drive, solver)

        assert point.ok
        assert point.trace_err < 1e-10
        assert point.residual < 1e-9
        assert point.n_ground + point.n_k.sum() <= 1.0 + 1e-10
        assert point.current_per_sec == pytest.approx(point.current_natural * 2 * math.pi * 1e9)

    def test_analytic_solver(self, device, drive):
        """Test: Analytic point has uniform bond currents and zero residual"""
        point = solve_point(device, drive, 'analytic')

        assert point.residual == 0.0
        assert np.all(point.bond_currents == point.current_natural)
        assert point.trace_err < 1e-14

    def test_unknown_solver(self, device, drive):
        """Test: Unknown solver name raises ConfigError"""
        with pytest.raises(ConfigError, match="solver"):
            solve_point(device, drive, 'montecarlo')

    def test_solvers_agree_on_current(self, device, scale):
        """Test: Null-space and rate currents agree within 10⁻³·2J_0/N on a resonance"""
        phi = math.pi / 2
        drive = DriveParams(omega_d=optimal_drive_frequency(0, phi, device, 0.05), phi=phi)
        rates = solve_point(device, drive, 'rates')
        nullspace = solve_point(device, drive, 'nullspace')

        print(f"  rates {rates.current_natural:.6e}, nullspace {nullspace.current_natural:.6e}")
        assert abs(rates.current_natural - nullspace.current_natural) < 1e-3 * scale

    @pytest.mark.parametrize("solver", ['rates', 'nullspace'])
    def test_antisymmetry(self, device, param_factory, solver):
        """Test: 𝓘(ω_d, −φ) = −𝓘(ω_d, φ) within 10⁻⁸·J_0"""
        for omega_d, phi in param_factory.random_points(device, count=4):
            plus = solve_point(device, DriveParams(omega_d=omega_d, phi=phi), solver)
            minus = solve_point(device, DriveParams(omega_d=omega_d, phi=-phi), solver)
            assert abs(plus.current_natural + minus.current_natural) < 1e-8 * device.j0

    @pytest.mark.parametrize("solver,fraction", [('rates', 0.02), ('analytic', 1e-9)])
    def test_flux_periodicity(self, device, param_factory, scale, solver, fraction):
        """Test: 𝓘(ω_d, φ + 2π/N) = 𝓘(ω_d, φ) over 20 random points"""
        worst = 0.0
        for omega_d, phi in param_factory.random_points(device, count=20):
            base = solve_point(device, DriveParams(omega_d=omega_d, phi=phi), solver)
            shifted = solve_point(device, DriveParams(omega_d=omega_d, phi=phi + 2 * math.pi / 3),
                                  solver)
            worst = max(worst, abs(base.current_natural - shifted.current_natural))

        print(f"  {solver}: worst periodicity defect {worst / scale:.2e} x 2J0/N")
        assert worst < fraction * scale

    def test_undriven_point(self, device, omega_bar):
        """Test: ε_d = 0 gives zero current and a full ground state"""
        point = solve_point(device, DriveParams(omega_d=omega_bar, phi=1.0, eps_d=0.0), 'rates')

        assert abs(point.current_natural) < 1e-12 * device.j0
        assert point.n_ground == pytest.approx(1.0, abs=1e-12)


@pytest.mark.sweep
class TestSweepSpec:

    def test_default_axes(self, device):
        """Test: Default window is ω̄_d ± 4J_0 and φ excludes 2π"""
        spec = SweepSpec(device=device, omega_d_steps=5, phi_steps=4)
        center = default_omega_center(device, 0.05)
        omega = spec.omega_axis()
        phi = spec.phi_axis()

        assert omega[0] == pytest.approx(center - 4e-3)
        assert omega[-1] == pytest.approx(center + 4e-3)
        assert omega[2] == pytest.approx(center)
        assert phi.tolist() == pytest.approx([0.0, math.pi / 2, math.pi, 3 * math.pi / 2])

    def test_explicit_range(self, device):
        """Test: omega_d_range fixes both ends"""
        spec = SweepSpec(device=device, omega_d_range=(6.50, 6.51), omega_d_steps=3)
        assert spec.omega_axis().tolist() == pytest.approx([6.50, 6.505, 6.51])

    @pytest.mark.parametrize("overrides,field", [
        ({'solver': 'exact'}, 'solver'),
        ({'omega_d_steps': 1}, 'omega_d_steps'),
        ({'phi_steps': 2.5}, 'phi_steps'),
        ({'workers': 0}, 'workers'),
        ({'eps_d': -0.1}, 'eps_d'),
        ({'omega_d_range': (6.6, 6.5)}, 'omega_d_range'),
    ])
    def test_invalid_spec(self, device, overrides, field):
        """Test: Invalid sweep settings raise ConfigError naming the key"""
        with pytest.raises(ConfigError, match=field):
            SweepSpec(device=device, **overrides).validate()

    def test_metadata(self, device):
        """Test: Metadata records device, amplitude, solver and version"""
        meta = SweepSpec(device=device).metadata()
        assert meta['device']['j0'] == device.j0
        assert set(meta) == {'device', 'eps_d', 'solver', 'version'}


@pytest.mark.sweep
class TestRunSweep:

    def test_undriven_grid(self, device):
        """Test: ε_d = 0 sweep has zero current everywhere"""
        result = run_sweep(SweepSpec(device=device, eps_d=0.0, omega_d_steps=2, phi_steps=2))

        assert result.shape == (2, 2)
        assert result.failed_cells == []
        assert np.all(np.abs(result.current_natural) < 1e-12 * device.j0)
        assert np.allclose(result.n_ground, 1.0)

    def test_row_order(self, device):
        """Test: rows() runs φ outer and ω_d inner"""
        result = analytic_sweep(SweepSpec(device=device, omega_d_steps=3, phi_steps=2))
        rows = list(result.rows())

        assert len(rows) == 6
        assert [r['phi'] for r in rows[:3]] == [0.0] * 3
        assert [r['omega_d'] for r in rows[:3]] == result.omega_d.tolist()
        assert set(rows[0]) >= {'n_k0', 'n_k1', 'n_k2', 'solver_status'}

    def test_failed_cells_isolated(self, device):
        """Test: A cell on the qubit resonance fails alone with its error name"""
        spec = SweepSpec(device=device, omega_d_range=(6.99, 7.0), omega_d_steps=2,
                         phi_steps=2, solver='analytic')
        result = run_sweep(spec)

        assert result.failed_cells == [(0, 1), (1, 1)]
        assert result.solver_status[0, 1] == 'PerturbationInvalid'
        assert np.isnan(result.current_natural[0, 1])
        assert result.solver_status[0, 0] == 'ok'

    def test_worker_count_does_not_change_output(self, device):
        """Test: One and two workers give identical arrays"""
        spec = SweepSpec(device=device, omega_d_steps=3, phi_steps=3)
        serial = run_sweep(spec)
        parallel = run_sweep(SweepSpec(device=device, omega_d_steps=3, phi_steps=3, workers=2))

        assert np.array_equal(serial.current_natural, parallel.current_natural)
        assert np.array_equal(serial.n_k, parallel.n_k)
        assert list(serial.rows()) == list(parallel.rows())

    def test_analytic_zero_lines(self, device, scale):
        """Test: Star model current vanishes exactly at φ = nπ/N"""
        result = analytic_sweep(SweepSpec(device=device, omega_d_steps=9, phi_steps=6))
        print(f"  max |I| on lines: {np.max(np.abs(result.current_natural)):.2e}")
        assert np.all(np.abs(result.current_natural) < 1e-12 * scale)

    def test_rate_zero_lines(self, device, scale):
        """Test: Rate current vanishes at φ = 0, π and stays below 10⁻³·2J_0/N on the other lines"""
        result = run_sweep(SweepSpec(device=device, omega_d_steps=5, phi_steps=6))
        currents = np.abs(result.current_natural)

        assert np.all(currents[[0, 3]] < 1e-9 * scale)
        assert np.all(currents < 1e-3 * scale)

    def test_empty_result(self):
        """Test: Empty result is NaN-filled and pending"""
        result = SweepResult.empty(np.array([6.5, 6.6]), np.array([0.0]), 3)

        assert result.n_k.shape == (1, 2, 3)
        assert np.all(np.isnan(result.current_natural))
        assert len(result.failed_cells) == 2
        assert result.device is None
