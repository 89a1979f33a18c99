"""
Spectrum
Exact diagonalization of H_σ and the perturbative spectrum of the truncated model
"""
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.linalg

from chiral_ring.errors import EigenFailure, PerturbationInvalid
from chiral_ring.model import DeviceParams, DriveParams, derived_scales
from chiral_ring.operators import (
    check_hermitian, chiral_basis, chiral_state, ground_state,
    number_operator, quasi_momentum, translation_operator,
)
from chiral_ring.sim_logger import logger

DEGENERACY_GAP = 1e-10
RESIDUAL_RTOL = 1e-10
PHASE_TIE_TOL = 1e-9
PERTURBATIVE_WARN = 0.2

# weight of the anti-Hermitian part of T when resolving momenta in a
# degenerate cluster; irrational so that cos k − w·sin k separates lattice momenta
_MOMENTUM_WEIGHT = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class EigenSystem:
    """
    Eigendecomposition of a ring operator.

    Attributes:
        energies: Ascending eigenvalues
        states: Column-orthonormal eigenvectors, deterministic phase
        excitation_labels: Rounded ⟨Σ_i (σ_i^z + 1)/2⟩ per eigenvector
        momentum_labels: Quasi-momentum index n (T eigenvalue e^{−i2πn/N}),
            −1 when the vector is not a translation eigenstate
    """
    energies: np.ndarray
    states: np.ndarray
    excitation_labels: np.ndarray
    momentum_labels: np.ndarray

    @property
    def dim(self) -> int:
        return self.states.shape[0]

    @property
    def n_sites(self) -> Optional[int]:
        n = int(round(math.log2(self.dim))) if self.dim > 0 else 0
        return n if 2 ** n == self.dim else None

    def state(self, index: int) -> np.ndarray:
        return self.states[:, index]

    def project(self, operator: np.ndarray) -> np.ndarray:
        """Matrix elements ⟨n|A|m⟩ in the eigenbasis."""
        return self.states.conj().T @ operator @ self.states

    def single_excitation(self) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.excitation_labels == 1)]


@dataclass(frozen=True)
class AnalyticSpectrum:
    """
    Perturbative spectrum of the truncated (zero- plus one-excitation) model.

    Energies are measured from ⟨0|H_σ|0⟩ = −N h_z/2.
    """
    n_sites: int
    e_k: np.ndarray
    tilde_e_0: float
    tilde_e_k: np.ndarray
    tilde_ground: np.ndarray
    tilde_k_states: np.ndarray
    mixing: float

    def tilde_k(self, k_index: int) -> np.ndarray:
        return self.tilde_k_states[:, k_index]


# ============================================
# Exact Diagonalization
# ============================================

def _clusters(energies: np.ndarray) -> List[np.ndarray]:
    if energies.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(energies) >= DEGENERACY_GAP) + 1
    return np.split(np.arange(energies.size), breaks)


def _momentum_label(vector: np.ndarray, translation: np.ndarray, n_sites: int) -> int:
    eigenvalue = np.vdot(vector, translation @ vector)
    if abs(abs(eigenvalue) - 1.0) > 1e-6:
        return -1
    k = (-np.angle(eigenvalue)) % (2.0 * math.pi)
    return int(round(k * n_sites / (2.0 * math.pi))) % n_sites


def _fix_phase(vector: np.ndarray) -> np.ndarray:
    magnitudes = np.abs(vector)
    peak = magnitudes.max()
    if peak == 0.0:
        return vector
    anchor = int(np.flatnonzero(magnitudes >= peak - PHASE_TIE_TOL)[0])
    return vector * (abs(vector[anchor]) / vector[anchor])


def _resolve_cluster(block: np.ndarray, translation: Optional[np.ndarray],
                     chirals: Optional[np.ndarray], n_sites: Optional[int]) -> np.ndarray:
    """Rotate a degenerate block to translation eigenstates and order it."""
    if translation is not None and block.shape[1] > 1:
        t_sub = block.conj().T @ translation @ block
        mixer = (0.5 * (t_sub + t_sub.conj().T)
                 + _MOMENTUM_WEIGHT * (t_sub - t_sub.conj().T) / 2j)
        _, rotation = scipy.linalg.eigh(mixer)
        block = block @ rotation

    columns = [_fix_phase(block[:, j]) for j in range(block.shape[1])]

    def sort_key(vector: np.ndarray):
        overlap = float(np.sum(np.abs(chirals.conj().T @ vector) ** 2)) if chirals is not None else 0.0
        label = _momentum_label(vector, translation, n_sites) if translation is not None else -1
        largest = int(np.flatnonzero(np.abs(vector) >= np.abs(vector).max() - PHASE_TIE_TOL)[0])
        return (-round(overlap, 9), label, largest)

    columns.sort(key=sort_key)
    return np.column_stack(columns)


def diagonalize(h: np.ndarray) -> EigenSystem:
    """
    Diagonalize a Hermitian ring operator with a deterministic eigenbasis.

    Degenerate clusters (gap < 1e-10) are rotated onto ring-translation
    eigenstates, then ordered by descending weight on the chiral states,
    momentum label and lowest index of the largest component. Each vector
    is phased so that its first largest-magnitude component is real positive.

    Args:
        h: Hermitian (d, d) matrix; d = 2^N enables momentum labels

    Returns:
        EigenSystem with ascending energies

    Raises:
        NotHermitian: h fails the Hermiticity check
        EigenFailure: Solver non-convergence or residual above tolerance
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise EigenFailure(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise EigenFailure("matrix has non-finite entries")
    check_hermitian(h, "Hamiltonian")
    h = 0.5 * (h + h.conj().T)

    try:
        energies, vectors = scipy.linalg.eigh(h)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise EigenFailure(f"eigh failed: {exc}") from exc

    dim = h.shape[0]
    n = int(round(math.log2(dim))) if dim > 1 else 0
    n_sites = n if n >= 1 and 2 ** n == dim else None
    translation = translation_operator(n_sites) if n_sites else None
    chirals = chiral_basis(n_sites) if n_sites else None

    clusters = _clusters(energies)
    states = np.empty_like(vectors)
    resolved = energies.copy()
    for cluster in clusters:
        states[:, cluster] = _resolve_cluster(vectors[:, cluster], translation, chirals, n_sites)
        resolved[cluster] = energies[cluster].mean()

    scale = max(np.max(np.abs(h)), np.finfo(float).tiny)
    residual = np.max(np.abs(h @ states - states * resolved)) if dim else 0.0
    orthogonality = np.max(np.abs(states.conj().T @ states - np.eye(dim))) if dim else 0.0
    if residual >= RESIDUAL_RTOL * scale or orthogonality >= RESIDUAL_RTOL:
        raise EigenFailure(f"eigendecomposition residual {residual:.3e}, "
                           f"orthogonality defect {orthogonality:.3e}")

    if n_sites:
        counts = np.real(np.einsum('ij,ik,kj->j', states.conj(), number_operator(n_sites), states))
        excitations = np.rint(counts).astype(int)
        momenta = np.array([_momentum_label(states[:, j], translation, n_sites)
                            for j in range(dim)], dtype=int)
    else:
        excitations = np.zeros(dim, dtype=int)
        momenta = np.full(dim, -1, dtype=int)

    logger.debug(f"diagonalize: dim={dim}, clusters={len(clusters)}, residual={residual:.2e}")
    return EigenSystem(energies=resolved, states=states,
                       excitation_labels=excitations, momentum_labels=momenta)


def find_state(eig: EigenSystem, target: np.ndarray,
               candidates: Optional[List[int]] = None) -> int:
    """Index of the eigenvector with the largest overlap |⟨v|target⟩|²."""
    indices = list(range(eig.dim)) if candidates is None else list(candidates)
    overlaps = np.abs(eig.states[:, indices].conj().T @ target) ** 2
    return indices[int(np.argmax(overlaps))]


# ============================================
# Analytic Spectrum
# ============================================

def single_particle_energies(device: DeviceParams, drive: DriveParams) -> np.ndarray:
    """E_k = h_z − 2J_0 cos(k + φ), measured from the all-down energy."""
    scales = derived_scales(device, drive)
    ks = np.array([quasi_momentum(n, device.n_sites) for n in range(device.n_sites)])
    return scales.h_z - 2.0 * device.j0 * np.cos(ks + drive.phi)


def analytic_spectrum(device: DeviceParams, drive: DriveParams) -> AnalyticSpectrum:
    """
    Perturbed ground and chiral states of the drive-dressed ring.

    Ẽ_0 = −(g/Δ)²Nε_d²/Δ_q, Ẽ_k = E_k − ½(g/Δ)²Nε_d²/Δ_q and
    |0̃⟩ ∝ |0⟩ − α|k=0⟩, |k̃⟩ ∝ |k⟩ + δ_{k,0}·α|0⟩ with α = (g/Δ)√N·ε_d/Δ_q.

    Raises:
        PerturbationInvalid: Δ_q ≈ 0 or α ≥ 1
    """
    scales = derived_scales(device, drive)
    n = device.n_sites
    if abs(scales.delta_q) < 1e-12:
        raise PerturbationInvalid(f"drive at omega_d = {drive.omega_d} is resonant "
                                  f"with the qubits (Delta_q = {scales.delta_q:.3e})")
    ratio = scales.perturbative_ratio(n, drive.eps_d)
    if ratio >= 1.0:
        raise PerturbationInvalid(f"perturbative ratio {ratio:.3g} >= 1")
    if ratio > PERTURBATIVE_WARN:
        logger.warning(f"perturbative ratio {ratio:.3g} above {PERTURBATIVE_WARN}")

    alpha = scales.g_over_delta * math.sqrt(n) * drive.eps_d / scales.delta_q
    shift = scales.g_over_delta ** 2 * n * drive.eps_d ** 2 / scales.delta_q

    e_k = single_particle_energies(device, drive)
    vacuum = ground_state(n)
    k_zero = chiral_state(0, n)

    tilde_ground = vacuum - alpha * k_zero
    tilde_ground /= np.linalg.norm(tilde_ground)
    columns = []
    for k_index in range(n):
        state = chiral_state(k_index, n)
        if k_index == 0:
            state = state + alpha * vacuum
            state /= np.linalg.norm(state)
        columns.append(state)

    return AnalyticSpectrum(
        n_sites=n,
        e_k=e_k,
        tilde_e_0=-shift,
        tilde_e_k=e_k - 0.5 * shift,
        tilde_ground=tilde_ground,
        tilde_k_states=np.column_stack(columns),
        mixing=alpha
    )
