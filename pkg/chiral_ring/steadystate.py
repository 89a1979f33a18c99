"""
Steady State
Lindblad generator of the driven-dissipative ring and its stationary state

Density matrices are vectorized row-major, vec(ρ) = ρ.reshape(-1), so that
vec(AρB) = (A ⊗ Bᵀ) vec(ρ).

Two independent solvers:
- steady_state_nullspace: null vector of the full Liouvillian (4^N)
- steady_state_rate_equation: stationary distribution of the secular
  rate equations in the H_σ eigenbasis (2^N)
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import scipy.linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from chiral_ring.errors import (
    DegenerateSteadyState, DimensionMismatch, InvalidParameter,
    SingularRateGraph, SolverFailure, StepSizeTooLarge,
)
from chiral_ring.model import DeviceParams, DriveParams
from chiral_ring.operators import build_h_sigma, check_hermitian
from chiral_ring.rates import (
    JumpOperator, RateMatrix, decay_rates, dephasing_rates,
    dissipative_jumps, pump_rates_full,
)
from chiral_ring.sim_logger import logger
from chiral_ring.spectrum import EigenSystem
from chiral_ring.state_validator import TRACE_TOL, StateValidator, assert_populations

NULLSPACE_GAP = 1e-10
RATE_EDGE_RTOL = 1e-14
STEP_GUARD = 0.1
DEFAULT_SAVES = 101


# ============================================
# Types
# ============================================

@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix on the 2^N ring Hilbert space."""
    matrix: np.ndarray

    @classmethod
    def pure(cls, state: np.ndarray) -> 'DensityMatrix':
        state = np.asarray(state, dtype=complex)
        return cls(np.outer(state, state.conj()) / np.vdot(state, state).real)

    @classmethod
    def maximally_mixed(cls, dim: int) -> 'DensityMatrix':
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validator(self) -> StateValidator:
        return StateValidator(self.matrix)

    def validate(self, trace_tol: float = TRACE_TOL) -> 'DensityMatrix':
        """Check trace, Hermiticity and positivity; time-evolved states use trace_tol = 1e-8."""
        self.validator().assert_physical(trace_tol)
        return self

    def expectation(self, operator: np.ndarray) -> complex:
        return complex(np.trace(operator @ self.matrix))

    def eigenbasis_populations(self, eig: EigenSystem) -> np.ndarray:
        return np.real(np.einsum('ij,ik,kj->j', eig.states.conj(), self.matrix, eig.states))


@dataclass(frozen=True)
class Liouvillian:
    """
    Vectorized Lindblad generator.

    Attributes:
        matrix: (d², d²) superoperator acting on row-major vec(ρ)
        dim: Hilbert-space dimension d
    """
    matrix: np.ndarray
    dim: int

    @property
    def scale(self) -> float:
        return max(float(np.max(np.abs(self.matrix))), np.finfo(float).tiny)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return (self.matrix @ np.asarray(rho).reshape(-1)).reshape(self.dim, self.dim)

    def residual(self, rho: np.ndarray) -> float:
        """‖L vec(ρ)‖_max / ‖L‖_max."""
        return float(np.max(np.abs(self.apply(rho)))) / self.scale

    def trace_defect(self) -> float:
        """‖vec(1)† L‖_max; zero for a trace-preserving generator."""
        identity = np.eye(self.dim, dtype=complex).reshape(-1)
        return float(np.max(np.abs(identity @ self.matrix))) if self.matrix.size else 0.0


@dataclass
class Trajectory:
    times: np.ndarray
    states: List[DensityMatrix] = field(default_factory=list)

    @property
    def final(self) -> DensityMatrix:
        return self.states[-1]


# ============================================
# Generator Assembly
# ============================================

def build_liouvillian(h: np.ndarray, jumps: Sequence[JumpOperator]) -> Liouvillian:
    """
    Assemble L(ρ) = −i[H, ρ] + Σ_j r_j 𝒟[X_j]ρ with 𝒟[X]ρ = (XρX† − X†Xρ + h.c.)/2.

    Args:
        h: Hermitian Hamiltonian
        jumps: Rate-weighted jump operators

    Returns:
        Liouvillian

    Raises:
        DimensionMismatch: A jump operator does not match H
        NotHermitian: H is not Hermitian
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"Hamiltonian must be square, got shape {h.shape}")
    check_hermitian(h, "Hamiltonian")
    dim = h.shape[0]
    identity = np.eye(dim, dtype=complex)

    matrix = -1j * (np.kron(h, identity) - np.kron(identity, h.T))
    for jump in jumps:
        x = np.asarray(jump.operator, dtype=complex)
        if x.shape != h.shape:
            raise DimensionMismatch(f"jump '{jump.label}' has shape {x.shape}, "
                                    f"Hamiltonian has {h.shape}")
        if not np.all(np.isfinite(x)):
            raise InvalidParameter('jump', jump.label, "operator has non-finite entries")
        if jump.rate == 0.0:
            continue
        x_dag_x = x.conj().T @ x
        matrix += jump.rate * (np.kron(x, x.conj())
                               - 0.5 * np.kron(x_dag_x, identity)
                               - 0.5 * np.kron(identity, x_dag_x.T))

    logger.debug(f"build_liouvillian: dim={dim}, jumps={len(jumps)}")
    return Liouvillian(matrix=matrix, dim=dim)


def pump_jumps(eig: EigenSystem, pump: RateMatrix) -> List[JumpOperator]:
    """Davies jump operators Γ_{m→n}·𝒟[|n⟩⟨m|] for every nonzero pump rate."""
    if pump.dim != eig.dim:
        raise DimensionMismatch(f"pump rates of dim {pump.dim} for eigensystem of dim {eig.dim}")
    jumps = []
    for m, n in zip(*np.nonzero(pump.rates)):
        operator = np.outer(eig.states[:, n], eig.states[:, m].conj())
        jumps.append(JumpOperator(float(pump.rates[m, n]), operator, f"pump {m}->{n}"))
    return jumps


def full_model_liouvillian(eig: EigenSystem, device: DeviceParams, drive: DriveParams,
                           pump: Optional[RateMatrix] = None) -> Liouvillian:
    """
    Liouvillian of the full model: H_σ, local decay and dephasing, Davies pump.

    Args:
        eig: Eigensystem of H_σ for (device, drive)
        device: Device parameters
        drive: Drive parameters
        pump: Precomputed pump rates (computed from eig when omitted)
    """
    if pump is None:
        pump = pump_rates_full(eig, device, drive)
    jumps = dissipative_jumps(device) + pump_jumps(eig, pump)
    return build_liouvillian(build_h_sigma(device, drive), jumps)


# ============================================
# Solvers
# ============================================

def steady_state_nullspace(liouvillian: Liouvillian) -> DensityMatrix:
    """
    Stationary state from the smallest right singular vector of L.

    The vector is reshaped, divided by its trace, then Hermitized. No
    positivity repair is applied.

    Raises:
        DegenerateSteadyState: Second-smallest singular value ≤ 1e-10·s_max
        SolverFailure: SVD failure or traceless null vector
        InvalidState: Result violates trace, Hermiticity or positivity bounds
    """
    try:
        _, singular, vh = scipy.linalg.svd(liouvillian.matrix)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise SolverFailure(f"SVD of the Liouvillian failed: {exc}") from exc

    if singular.size > 1 and singular[-2] <= NULLSPACE_GAP * singular[0]:
        raise DegenerateSteadyState(f"null space dimension > 1: s[-2] = {singular[-2]:.3e}, "
                                    f"s[0] = {singular[0]:.3e}")
    logger.debug(f"steady_state_nullspace: s_min={singular[-1]:.2e}, gap={singular[-2]:.2e}")

    dim = liouvillian.dim
    rho = vh[-1].conj().reshape(dim, dim)
    trace = np.trace(rho)
    if abs(trace) < 1e-14:
        raise SolverFailure("null vector is traceless")
    rho = rho / trace
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho).validate()


def total_secular_rates(eig: EigenSystem, pump: RateMatrix, device: DeviceParams) -> np.ndarray:
    """Pump plus secular decay and dephasing rates, diagonal zeroed."""
    rates = pump.rates + decay_rates(eig, device).rates + dephasing_rates(eig, device).rates
    rates = np.array(rates)
    np.fill_diagonal(rates, 0.0)
    return rates


def count_closed_classes(rates: np.ndarray) -> int:
    """
    Number of closed communicating classes of the rate graph.

    Edges with rate below 1e-14 times the largest rate are dropped.
    """
    top = rates.max() if rates.size else 0.0
    adjacency = rates > RATE_EDGE_RTOL * top if top > 0.0 else np.zeros_like(rates, dtype=bool)
    n_components, labels = connected_components(csr_matrix(adjacency), directed=True,
                                                connection='strong')
    leaving = np.zeros(n_components, dtype=bool)
    sources, targets = np.nonzero(adjacency)
    for m, n in zip(sources, targets):
        if labels[m] != labels[n]:
            leaving[labels[m]] = True
    return int(np.count_nonzero(~leaving))


def steady_state_rate_equation(eig: EigenSystem, pump: RateMatrix,
                               device: DeviceParams) -> np.ndarray:
    """
    Stationary populations of the secular master equation.

    Solves W p = 0 with Σp = 1, where W = Rᵀ − diag(Σ_n R[m, n]) and R is
    the total rate matrix (pump, decay γΣ_i|⟨n|σ_i^−|m⟩|², dephasing
    (γ_φ/2)Σ_i|⟨n|σ_i^z|m⟩|²).

    Args:
        eig: Eigensystem of H_σ
        pump: Pump rates over the same eigenstates
        device: Device parameters

    Returns:
        Population vector over the eigenstates of eig

    Raises:
        SingularRateGraph: Non-finite or negative total rates
        DegenerateSteadyState: More than one closed class in the rate graph
    """
    if pump.dim != eig.dim:
        raise DimensionMismatch(f"pump rates of dim {pump.dim} for eigensystem of dim {eig.dim}")
    rates = total_secular_rates(eig, pump, device)
    if not np.all(np.isfinite(rates)) or np.any(rates < 0.0):
        raise SingularRateGraph("rate matrix has non-finite or negative entries")

    closed = count_closed_classes(rates)
    if closed > 1:
        raise DegenerateSteadyState(f"rate graph has {closed} closed classes")

    generator = rates.T - np.diag(rates.sum(axis=1))
    try:
        _, singular, vh = scipy.linalg.svd(generator)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise SingularRateGraph(f"SVD of the rate generator failed: {exc}") from exc

    null = vh[-1].conj().real
    total = null.sum()
    if abs(total) < 1e-300:
        raise SingularRateGraph("stationary vector sums to zero")
    populations = null / total
    logger.debug(f"steady_state_rate_equation: dim={eig.dim}, s_min={singular[-1]:.2e}")
    return assert_populations(populations)


# ============================================
# Time Evolution
# ============================================

def rk4_propagator(liouvillian: Liouvillian, step: float) -> np.ndarray:
    """One step of classical RK4 for dρ/dt = Lρ, i.e. Σ_{j≤4} (hL)^j/j!."""
    hl = step * liouvillian.matrix
    term = np.eye(hl.shape[0], dtype=complex)
    propagator = term.copy()
    for order in range(1, 5):
        term = term @ hl / order
        propagator = propagator + term
    return propagator


def time_evolve(rho0: DensityMatrix, liouvillian: Liouvillian, t_final: float,
                dt: float, n_saves: int = DEFAULT_SAVES) -> Trajectory:
    """
    Integrate the master equation with fixed-step RK4.

    The step is shortened to t_final/ceil(t_final/dt). Saved samples are
    spread evenly over the step count; the stretch between samples is
    advanced with a matrix power of the one-step propagator.

    Args:
        rho0: Initial density matrix
        liouvillian: Generator
        t_final: Final time (1/(2π·GHz))
        dt: Requested step
        n_saves: Number of saved samples including t = 0

    Returns:
        Trajectory of saved states

    Raises:
        StepSizeTooLarge: dt·max|eig(L)| ≥ 0.1
        DimensionMismatch: rho0 and L act on different spaces
    """
    if rho0.dim != liouvillian.dim:
        raise DimensionMismatch(f"state of dim {rho0.dim} for generator of dim {liouvillian.dim}")
    if not (math.isfinite(t_final) and t_final >= 0.0):
        raise InvalidParameter('t_final', t_final, "must be finite and >= 0")
    if not (math.isfinite(dt) and dt > 0.0):
        raise InvalidParameter('dt', dt, "must be finite and > 0")

    max_rate = float(np.max(np.abs(scipy.linalg.eigvals(liouvillian.matrix)))) \
        if liouvillian.matrix.size else 0.0
    if dt * max_rate >= STEP_GUARD:
        raise StepSizeTooLarge(f"dt * max|eig(L)| = {dt * max_rate:.3g} >= {STEP_GUARD}")

    vec = rho0.matrix.reshape(-1).astype(complex)
    if t_final == 0.0:
        return Trajectory(times=np.array([0.0]), states=[rho0])

    n_steps = math.ceil(t_final / dt)
    step = t_final / n_steps
    marks = np.unique(np.rint(np.linspace(0, n_steps, max(2, min(n_saves, n_steps + 1))))
                      .astype(np.int64))
    propagator = rk4_propagator(liouvillian, step)
    powers: Dict[int, np.ndarray] = {}

    states = [rho0]
    for previous, current in zip(marks[:-1], marks[1:]):
        stride = int(current - previous)
        if stride not in powers:
            powers[stride] = np.linalg.matrix_power(propagator, stride)
        vec = powers[stride] @ vec
        states.append(DensityMatrix(vec.reshape(rho0.dim, rho0.dim)))

    logger.debug(f"time_evolve: {n_steps} steps of {step:.3e}, {len(states)} samples")
    return Trajectory(times=marks * step, states=states)
