"""
Rates
Cavity density of states, Fermi-Golden-Rule pump rates and the local dissipators

Rates are in 2π·GHz. A RateMatrix entry rates[m, n] is the rate of the
transition m → n between eigenstates.
"""
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from chiral_ring.errors import IndexOutOfRange, InvalidParameter, PerturbationInvalid
from chiral_ring.model import DeviceParams, DriveParams, derived_scales
from chiral_ring.operators import chiral_state, ground_state, pauli_site
from chiral_ring.sim_logger import logger
from chiral_ring.spectrum import EigenSystem, analytic_spectrum


@dataclass(frozen=True)
class RateMatrix:
    """Non-negative transition rates between eigenstates, zero diagonal."""
    rates: np.ndarray

    def __post_init__(self):
        rates = np.array(self.rates, dtype=float)
        if rates.ndim != 2 or rates.shape[0] != rates.shape[1]:
            raise InvalidParameter('rates', rates.shape, "rate matrix must be square")
        if not np.all(np.isfinite(rates)):
            raise InvalidParameter('rates', 'non-finite', "rates must be finite")
        if np.any(rates < 0.0):
            raise InvalidParameter('rates', float(rates.min()), "rates must be >= 0")
        np.fill_diagonal(rates, 0.0)
        rates.setflags(write=False)
        object.__setattr__(self, 'rates', rates)

    @classmethod
    def zeros(cls, dim: int) -> 'RateMatrix':
        return cls(np.zeros((dim, dim)))

    @property
    def dim(self) -> int:
        return self.rates.shape[0]

    def outgoing(self) -> np.ndarray:
        return self.rates.sum(axis=1)

    def __add__(self, other: 'RateMatrix') -> 'RateMatrix':
        return RateMatrix(self.rates + other.rates)


@dataclass(frozen=True)
class JumpOperator:
    """Dissipator term rate·𝒟[X] with 𝒟[X]ρ = (XρX† − X†Xρ + h.c.)/2."""
    rate: float
    operator: np.ndarray
    label: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate >= 0.0):
            raise InvalidParameter('rate', self.rate, "jump rate must be finite and >= 0")

    @property
    def scaled(self) -> np.ndarray:
        """√rate·X."""
        return math.sqrt(self.rate) * self.operator


# ============================================
# Cavity Spectrum
# ============================================

def lorentzian_dos(omega, omega_c: float, kappa: float):
    """
    Lorentzian cavity density of states ρ(ω) = (κ/2π)/[(ω − ω_c)² + κ²/4].

    Args:
        omega: Frequency or array of frequencies
        omega_c: Cavity frequency
        kappa: Cavity linewidth

    Returns:
        Density in 1/(2π·GHz), same shape as omega

    Raises:
        InvalidParameter: kappa <= 0
    """
    if not kappa > 0.0:
        raise InvalidParameter('kappa', kappa, "linewidth must be strictly positive")
    detuning = np.asarray(omega, dtype=float) - omega_c
    density = (kappa / (2.0 * math.pi)) / (detuning ** 2 + 0.25 * kappa ** 2)
    return float(density) if density.ndim == 0 else density


# ============================================
# Pump Rates
# ============================================

def transition_matrix_element(device: DeviceParams, drive: DriveParams,
                              dressed: bool = False) -> float:
    """
    Λ² = (g/Δ)⁶(1 + 2Δ/Δ_c)²ε_d⁴/Δ_q².

    Args:
        device: Device parameters
        drive: Drive parameters
        dressed: Replace Δ_q by the first-order gap h_z − 2J_0 cos φ

    Raises:
        PerturbationInvalid: Δ_q or Δ_c vanish
    """
    if drive.eps_d == 0.0:
        return 0.0
    scales = derived_scales(device, drive)
    if abs(scales.delta_c) < 1e-12 or abs(scales.delta_q) < 1e-12:
        raise PerturbationInvalid(f"resonant denominator at omega_d = {drive.omega_d}")
    gap = scales.h_z - 2.0 * device.j0 * math.cos(drive.phi) if dressed else scales.delta_q
    if abs(gap) < 1e-12:
        raise PerturbationInvalid(f"vanishing mixing gap at omega_d = {drive.omega_d}")
    enhancement = (1.0 + 2.0 * scales.delta / scales.delta_c) ** 2
    return scales.g_over_delta ** 6 * enhancement * drive.eps_d ** 4 / gap ** 2


def pump_rate_analytic(k_index: int, device: DeviceParams, drive: DriveParams,
                       dressed: bool = False) -> float:
    """
    Raman pump rate Γ_{0→k} = 2πΛ²ρ(ω_d + Ẽ_0 − Ẽ_k).
    """
    if drive.eps_d == 0.0:
        return 0.0
    if not 0 <= k_index < device.n_sites:
        raise IndexOutOfRange('quasi-momentum', k_index, device.n_sites)
    spectrum = analytic_spectrum(device, drive)
    lam2 = transition_matrix_element(device, drive, dressed=dressed)
    emission = drive.omega_d + spectrum.tilde_e_0 - spectrum.tilde_e_k[k_index]
    return 2.0 * math.pi * lam2 * lorentzian_dos(emission, device.omega_c, device.kappa)


def pump_prefactor(device: DeviceParams, drive: DriveParams) -> float:
    """2π(g/Δ)⁴|Δā + ε_d/2|², the squared coupling of σ_i^z to each cavity bath."""
    scales = derived_scales(device, drive)
    amplitude = scales.delta * scales.a_bar + 0.5 * drive.eps_d
    return 2.0 * math.pi * scales.g_over_delta ** 4 * abs(amplitude) ** 2


def _site_weights(eig: EigenSystem, kind: str) -> np.ndarray:
    """W[n, m] = Σ_i |⟨n|σ_i^kind|m⟩|²."""
    n_sites = eig.n_sites
    weights = np.zeros((eig.dim, eig.dim))
    for site in range(n_sites):
        weights += np.abs(eig.project(pauli_site(kind, site, n_sites))) ** 2
    return weights


def pump_rates_full(eig: EigenSystem, device: DeviceParams, drive: DriveParams) -> RateMatrix:
    """
    Fermi-Golden-Rule pump rates between all eigenstates of H_σ.

        Γ_{m→n} = 2π(g/Δ)⁴|Δā + ε_d/2|² Σ_i |⟨n|σ_i^z|m⟩|² ρ(ω_d + E_m − E_n)

    Each cavity is an independent zero-temperature bath, so only emission
    of a cavity photon is included.

    Args:
        eig: Eigensystem of the untruncated H_σ
        device: Device parameters
        drive: Drive parameters

    Returns:
        RateMatrix over the eigenstates of eig
    """
    if drive.eps_d == 0.0:
        return RateMatrix.zeros(eig.dim)
    prefactor = pump_prefactor(device, drive)
    weights = _site_weights(eig, 'z')
    emission = drive.omega_d + eig.energies[:, None] - eig.energies[None, :]
    rates = prefactor * weights.T * lorentzian_dos(emission, device.omega_c, device.kappa)
    np.fill_diagonal(rates, 0.0)
    logger.debug(f"pump_rates_full: dim={eig.dim}, max rate={rates.max():.3e}")
    return RateMatrix(rates)


# ============================================
# Local Dissipators
# ============================================

def dissipative_jumps(device: DeviceParams) -> List[JumpOperator]:
    """
    Local decay γ·𝒟[σ_i^−] and dephasing (γ_φ/2)·𝒟[σ_i^z] on every site.

    Zero rates are skipped.
    """
    jumps = []
    n = device.n_sites
    if device.gamma > 0.0:
        jumps.extend(JumpOperator(device.gamma, pauli_site('-', i, n), f"decay {i}")
                     for i in range(n))
    if device.gamma_phi > 0.0:
        jumps.extend(JumpOperator(0.5 * device.gamma_phi, pauli_site('z', i, n), f"dephasing {i}")
                     for i in range(n))
    return jumps


def decay_rates(eig: EigenSystem, device: DeviceParams) -> RateMatrix:
    """Secular decay rates γ·Σ_i |⟨n|σ_i^−|m⟩|² for m → n."""
    return RateMatrix(device.gamma * _site_weights(eig, '-').T)


def dephasing_rates(eig: EigenSystem, device: DeviceParams) -> RateMatrix:
    """Secular dephasing rates (γ_φ/2)·Σ_i |⟨n|σ_i^z|m⟩|² for m → n."""
    return RateMatrix(0.5 * device.gamma_phi * _site_weights(eig, 'z').T)


def manifold_projected_rates(n_sites: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Local matrix elements projected onto the zero- and one-excitation manifold.

    Returns:
        (decay, transfer): decay[k] = Σ_i |⟨0|σ_i^−|k⟩|², expected 1 for
        every k; transfer[q, k] = Σ_i |⟨q|σ_i^z|k⟩|², expected 4/N for q ≠ k
    """
    vacuum = ground_state(n_sites)
    chirals = [chiral_state(k, n_sites) for k in range(n_sites)]
    decay = np.zeros(n_sites)
    transfer = np.zeros((n_sites, n_sites))
    for i in range(n_sites):
        lower = pauli_site('-', i, n_sites)
        sz = pauli_site('z', i, n_sites)
        for k, ket in enumerate(chirals):
            decay[k] += abs(np.vdot(vacuum, lower @ ket)) ** 2
            for q, bra in enumerate(chirals):
                transfer[q, k] += abs(np.vdot(bra, sz @ ket)) ** 2
    return decay, transfer
