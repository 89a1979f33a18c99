"""
Observables
Permanent current, chiral populations and the optimal drive-frequency curves
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from chiral_ring.errors import SolverFailure
from chiral_ring.model import DeviceParams, DriveParams, derived_scales, to_per_second
from chiral_ring.operators import build_current_op, chiral_basis, quasi_momentum
from chiral_ring.rates import pump_rate_analytic

IMAGINARY_TOL = 1e-10
FIXED_POINT_ITERATIONS = 50


@dataclass
class PointResult:
    """
    Outputs of one (ω_d, φ) point.

    Attributes:
        omega_d: Drive frequency
        phi: Coupler phase
        current_natural: Bond-averaged current in 2π·GHz
        current_per_sec: Same current in excitations per second
        n_ground: ⟨0|ρ|0⟩
        n_k: ⟨k|ρ|k⟩ for k = 2πn/N, n = 0..N−1
        bond_currents: Tr[I_i ρ] per bond
        trace_err: |tr ρ − 1|
        residual: Normalized stationarity residual of the solver
        solver: Solver name
        solver_status: 'ok' or the name of the error that stopped the solve
    """
    omega_d: float
    phi: float
    current_natural: float
    current_per_sec: float
    n_ground: float
    n_k: np.ndarray
    bond_currents: np.ndarray
    trace_err: float
    residual: float
    solver: str
    solver_status: str = 'ok'

    @classmethod
    def failed(cls, omega_d: float, phi: float, n_sites: int,
               solver: str, status: str) -> 'PointResult':
        nan = float('nan')
        return cls(omega_d=omega_d, phi=phi, current_natural=nan, current_per_sec=nan,
                   n_ground=nan, n_k=np.full(n_sites, nan), bond_currents=np.full(n_sites, nan),
                   trace_err=nan, residual=nan, solver=solver, solver_status=status)

    @property
    def ok(self) -> bool:
        return self.solver_status == 'ok'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'omega_d': self.omega_d,
            'phi': self.phi,
            'current_natural': self.current_natural,
            'current_per_sec': self.current_per_sec,
            'n_ground': self.n_ground,
            'n_k': [float(v) for v in self.n_k],
            'bond_currents': [float(v) for v in self.bond_currents],
            'trace_err': self.trace_err,
            'residual': self.residual,
            'solver': self.solver,
            'solver_status': self.solver_status
        }


@dataclass(frozen=True)
class CurrentReading:
    bond_currents: np.ndarray
    mean: float
    spread: float = field(default=0.0)


def current_operator_expectation(rho: np.ndarray, device: DeviceParams,
                                 drive: DriveParams) -> CurrentReading:
    """
    Per-bond currents Tr[I_i ρ] and their average.

    Raises:
        SolverFailure: Imaginary part of an expectation above 1e-10
    """
    rho = np.asarray(rho)
    bonds = np.empty(device.n_sites)
    for bond in range(device.n_sites):
        value = np.trace(build_current_op(bond, device, drive) @ rho)
        if abs(value.imag) > IMAGINARY_TOL:
            raise SolverFailure(f"current on bond {bond} has imaginary part {value.imag:.3e}")
        bonds[bond] = value.real
    return CurrentReading(bond_currents=bonds, mean=float(bonds.mean()),
                          spread=float(bonds.max() - bonds.min()))


def current_from_populations(n_k, phi: float, device: DeviceParams) -> float:
    """𝓘 = (2/N)·J_0·Σ_k sin(k + φ)·n_k."""
    n = device.n_sites
    ks = np.array([quasi_momentum(i, n) for i in range(n)])
    return float(2.0 / n * device.j0 * np.sum(np.sin(ks + phi) * np.asarray(n_k, dtype=float)))


def populations_nk(rho: np.ndarray, device: DeviceParams) -> Tuple[np.ndarray, float]:
    """
    Populations of the bare chiral states and of |0⟩.

    Returns:
        (n_k, n_ground)
    """
    rho = np.asarray(rho)
    chirals = chiral_basis(device)
    n_k = np.real(np.einsum('ik,ij,jk->k', chirals.conj(), rho, chirals))
    return n_k, float(rho[0, 0].real)


def optimal_drive_frequency(k_index: int, phi: float, device: DeviceParams,
                            eps_d: float) -> float:
    """
    ω_d^opt = ω̄_d − J_0 cos(k + φ).

    ω̄_d is evaluated self-consistently, starting from (ω_q + ω_c)/2.
    """
    k = quasi_momentum(k_index, device.n_sites)
    omega = 0.5 * (device.omega_q + device.omega_c)
    for _ in range(FIXED_POINT_ITERATIONS):
        scales = derived_scales(device, DriveParams(omega_d=omega, phi=phi, eps_d=eps_d))
        updated = scales.omega_d_bar - device.j0 * math.cos(k + phi)
        if abs(updated - omega) <= 1e-15 * abs(updated):
            return updated
        omega = updated
    return omega


def analytic_populations(device: DeviceParams, drive: DriveParams,
                         dressed: bool = False) -> Tuple[np.ndarray, float]:
    """
    Star-graph rate model of the truncated ring.

    The ground state is pumped to each |k̃⟩ at Γ_k and each |k̃⟩ relaxes at
    γ_eff = γ + 2γ_φ(N−1)/N. With x_k = Γ_k/γ_eff:

        n_k = x_k/(1 + Σ_q x_q),  n_ground = 1/(1 + Σ_q x_q)

    Returns:
        (n_k, n_ground)
    """
    n = device.n_sites
    gamma_eff = device.gamma + 2.0 * device.gamma_phi * (n - 1) / n
    pumps = np.array([pump_rate_analytic(k, device, drive, dressed=dressed) for k in range(n)])
    ratios = pumps / gamma_eff
    norm = 1.0 + ratios.sum()
    return ratios / norm, float(1.0 / norm)


def summarize(omega_d: float, phi: float, reading: CurrentReading, n_k: np.ndarray,
              n_ground: float, trace_err: float, residual: float, solver: str,
              status: Optional[str] = None) -> PointResult:
    return PointResult(
        omega_d=omega_d,
        phi=phi,
        current_natural=reading.mean,
        current_per_sec=to_per_second(reading.mean),
        n_ground=n_ground,
        n_k=np.asarray(n_k, dtype=float),
        bond_currents=reading.bond_currents,
        trace_err=trace_err,
        residual=residual,
        solver=solver,
        solver_status=status or 'ok'
    )
