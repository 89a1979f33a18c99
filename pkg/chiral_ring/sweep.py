"""
Sweep
Point solver and parallel (ω_d, φ) grid evaluation

Grid layout: arrays are indexed [phi_index, omega_index]; flattened rows
run with φ outer and ω_d inner.
"""
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from chiral_ring import __version__
from chiral_ring.errors import ChiralRingError, ConfigError
from chiral_ring.model import DEFAULT_EPS_D, DeviceParams, DriveParams, derived_scales
from chiral_ring.observables import (
    CurrentReading, PointResult, analytic_populations, current_from_populations,
    current_operator_expectation, populations_nk, summarize,
)
from chiral_ring.operators import build_h_sigma
from chiral_ring.rates import pump_rates_full
from chiral_ring.sim_logger import logger
from chiral_ring.spectrum import diagonalize
from chiral_ring.steadystate import (
    full_model_liouvillian, steady_state_nullspace,
    steady_state_rate_equation, total_secular_rates,
)

SOLVERS = ('rates', 'nullspace', 'analytic')
DEFAULT_OMEGA_STEPS = 101
DEFAULT_PHI_STEPS = 121
DEFAULT_WINDOW_J0 = 4.0


# ============================================
# Point Solver
# ============================================

def solve_point(device: DeviceParams, drive: DriveParams, solver: str = 'rates') -> PointResult:
    """
    Steady-state observables at one (ω_d, φ).

    Args:
        device: Device parameters
        drive: Drive parameters
        solver: 'rates' (secular rate equations), 'nullspace' (full
            Liouvillian) or 'analytic' (perturbative star model)

    Returns:
        PointResult

    Raises:
        ConfigError: Unknown solver
        ChiralRingError: Any solver failure
    """
    if solver not in SOLVERS:
        raise ConfigError(f"unknown solver '{solver}', expected one of {', '.join(SOLVERS)}")

    if solver == 'analytic':
        n_k, n_ground = analytic_populations(device, drive)
        current = current_from_populations(n_k, drive.phi, device)
        reading = CurrentReading(bond_currents=np.full(device.n_sites, current), mean=current)
        trace_err = abs(n_ground + float(n_k.sum()) - 1.0)
        return summarize(drive.omega_d, drive.phi, reading, n_k, n_ground,
                         trace_err, 0.0, solver)

    eig = diagonalize(build_h_sigma(device, drive))
    pump = pump_rates_full(eig, device, drive)

    if solver == 'rates':
        populations = steady_state_rate_equation(eig, pump, device)
        rho = (eig.states * populations) @ eig.states.conj().T
        rates = total_secular_rates(eig, pump, device)
        generator = rates.T - np.diag(rates.sum(axis=1))
        scale = max(float(np.max(np.abs(generator))), np.finfo(float).tiny)
        residual = float(np.max(np.abs(generator @ populations))) / scale
    else:
        liouvillian = full_model_liouvillian(eig, device, drive, pump=pump)
        rho = steady_state_nullspace(liouvillian).matrix
        residual = liouvillian.residual(rho)

    reading = current_operator_expectation(rho, device, drive)
    n_k, n_ground = populations_nk(rho, device)
    trace_err = float(abs(np.trace(rho) - 1.0))
    return summarize(drive.omega_d, drive.phi, reading, n_k, n_ground,
                     trace_err, residual, solver)


# ============================================
# Sweep Types
# ============================================

@dataclass(frozen=True)
class SweepSpec:
    """
    A (ω_d, φ) grid and the solver to run on it.

    Attributes:
        device: Device parameters
        eps_d: Drive amplitude
        omega_d_range: (lo, hi) inclusive; None centers on ω̄_d ± 4J_0
        omega_d_steps: Number of ω_d samples
        phi_steps: Number of φ samples over [0, 2π), endpoint excluded
        solver: 'rates', 'nullspace' or 'analytic'
        workers: Process count; 1 runs in-process
    """
    device: DeviceParams = field(default_factory=DeviceParams.standard)
    eps_d: float = DEFAULT_EPS_D
    omega_d_range: Optional[Tuple[float, float]] = None
    omega_d_steps: int = DEFAULT_OMEGA_STEPS
    phi_steps: int = DEFAULT_PHI_STEPS
    solver: str = 'rates'
    workers: int = 1

    def validate(self) -> 'SweepSpec':
        if self.solver not in SOLVERS:
            raise ConfigError(f"sweep.solver: '{self.solver}' is not one of {', '.join(SOLVERS)}")
        for name in ('omega_d_steps', 'phi_steps'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 2:
                raise ConfigError(f"sweep.{name}: must be an integer >= 2, got {value!r}")
        if isinstance(self.workers, bool) or not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError(f"sweep.workers: must be a positive integer, got {self.workers!r}")
        if not (math.isfinite(self.eps_d) and self.eps_d >= 0.0):
            raise ConfigError(f"drive.eps_d: must be finite and >= 0, got {self.eps_d!r}")
        if self.omega_d_range is not None:
            lo, hi = self.omega_d_range
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ConfigError(f"sweep.omega_d_range: need finite lo < hi, got {self.omega_d_range!r}")
        return self

    def omega_axis(self) -> np.ndarray:
        if self.omega_d_range is not None:
            lo, hi = self.omega_d_range
        else:
            center = default_omega_center(self.device, self.eps_d)
            lo = center - DEFAULT_WINDOW_J0 * self.device.j0
            hi = center + DEFAULT_WINDOW_J0 * self.device.j0
        return np.linspace(lo, hi, self.omega_d_steps)

    def phi_axis(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.phi_steps) / self.phi_steps

    def metadata(self) -> Dict[str, Any]:
        return {
            'device': self.device.to_dict(),
            'eps_d': self.eps_d,
            'solver': self.solver,
            'version': __version__
        }


def default_omega_center(device: DeviceParams, eps_d: float) -> float:
    """ω̄_d, independent of ω_d because Δ = ω_q − ω_c is fixed."""
    midband = DriveParams(omega_d=0.5 * (device.omega_q + device.omega_c), eps_d=eps_d)
    return derived_scales(device, midband).omega_d_bar


@dataclass
class SweepResult:
    """
    Per-cell observables on a (φ, ω_d) grid.

    Arrays are shaped (len(phi), len(omega_d)); n_k has a trailing axis of
    length N. wall_time is never part of a written payload.
    """
    omega_d: np.ndarray
    phi: np.ndarray
    n_sites: int
    current_natural: np.ndarray
    current_per_sec: np.ndarray
    n_ground: np.ndarray
    n_k: np.ndarray
    trace_err: np.ndarray
    residual: np.ndarray
    solver_status: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    @classmethod
    def empty(cls, omega_d: np.ndarray, phi: np.ndarray, n_sites: int,
              metadata: Optional[Dict[str, Any]] = None) -> 'SweepResult':
        shape = (phi.size, omega_d.size)
        return cls(omega_d=omega_d, phi=phi, n_sites=n_sites,
                   current_natural=np.full(shape, np.nan),
                   current_per_sec=np.full(shape, np.nan),
                   n_ground=np.full(shape, np.nan),
                   n_k=np.full(shape + (n_sites,), np.nan),
                   trace_err=np.full(shape, np.nan),
                   residual=np.full(shape, np.nan),
                   solver_status=np.full(shape, 'pending', dtype=object),
                   metadata=dict(metadata or {}))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.phi.size, self.omega_d.size

    @property
    def failed_cells(self) -> List[Tuple[int, int]]:
        return [tuple(int(i) for i in cell) for cell in np.argwhere(self.solver_status != 'ok')]

    @property
    def device(self) -> Optional[DeviceParams]:
        data = self.metadata.get('device')
        return DeviceParams.from_dict(data) if data else None

    def store(self, j: int, i: int, point: PointResult):
        self.current_natural[j, i] = point.current_natural
        self.current_per_sec[j, i] = point.current_per_sec
        self.n_ground[j, i] = point.n_ground
        self.n_k[j, i, :] = point.n_k
        self.trace_err[j, i] = point.trace_err
        self.residual[j, i] = point.residual
        self.solver_status[j, i] = point.solver_status

    def rows(self) -> Iterator[Dict[str, Any]]:
        """Cells in file order, φ outer and ω_d inner."""
        for j, phi in enumerate(self.phi):
            for i, omega in enumerate(self.omega_d):
                row = {
                    'omega_d': float(omega),
                    'phi': float(phi),
                    'current_natural': float(self.current_natural[j, i]),
                    'current_per_sec': float(self.current_per_sec[j, i]),
                    'n_ground': float(self.n_ground[j, i]),
                }
                for k in range(self.n_sites):
                    row[f'n_k{k}'] = float(self.n_k[j, i, k])
                row['trace_err'] = float(self.trace_err[j, i])
                row['residual'] = float(self.residual[j, i])
                row['solver_status'] = str(self.solver_status[j, i])
                yield row


# ============================================
# Grid Evaluation
# ============================================

def _solve_cell(task: Tuple[int, int, DeviceParams, DriveParams, str]) -> Tuple[int, int, PointResult]:
    j, i, device, drive, solver = task
    try:
        point = solve_point(device, drive, solver)
    except ChiralRingError as exc:
        logger.warning(f"cell (phi={drive.phi:.6g}, omega_d={drive.omega_d:.10g}) "
                       f"failed: {type(exc).__name__}: {exc}")
        point = PointResult.failed(drive.omega_d, drive.phi, device.n_sites,
                                   solver, type(exc).__name__)
    return j, i, point


def run_sweep(spec: SweepSpec) -> SweepResult:
    """
    Evaluate every grid cell with the chosen solver.

    Cells are independent; results are collected by (φ, ω_d) index, so the
    output does not depend on the worker count. A failing cell records the
    error class name in solver_status and NaN elsewhere.

    Raises:
        ConfigError: Invalid spec
    """
    spec.validate()
    omega_axis = spec.omega_axis()
    phi_axis = spec.phi_axis()
    result = SweepResult.empty(omega_axis, phi_axis, spec.device.n_sites, spec.metadata())

    tasks = [(j, i, spec.device, DriveParams(omega_d=float(omega), phi=float(phi), eps_d=spec.eps_d),
              spec.solver)
             for j, phi in enumerate(phi_axis) for i, omega in enumerate(omega_axis)]
    logger.step(f"Sweep: {len(tasks)} cells, solver={spec.solver}, workers={spec.workers}")

    started = time.perf_counter()
    if spec.workers == 1:
        outcomes = map(_solve_cell, tasks)
        for j, i, point in outcomes:
            result.store(j, i, point)
    else:
        chunk = max(1, len(tasks) // (8 * spec.workers))
        with ProcessPoolExecutor(max_workers=spec.workers) as executor:
            for j, i, point in executor.map(_solve_cell, tasks, chunksize=chunk):
                result.store(j, i, point)
    result.wall_time = time.perf_counter() - started

    failures = len(result.failed_cells)
    if failures:
        logger.warning(f"{failures} of {len(tasks)} cells failed")
    logger.info(f"Sweep finished in {result.wall_time:.1f}s")
    return result


def analytic_sweep(spec: SweepSpec) -> SweepResult:
    """The same grid evaluated with the perturbative star model."""
    return run_sweep(replace(spec, solver='analytic'))
