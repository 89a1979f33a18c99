"""
Parameter Test Data Factory
Generates reproducible random physical parameters using Faker

Useful for tests that need:
- Drive points (omega_d, phi) around the band center
- Coupler phases away from the zero-current lines
- Hermitian matrices for eigensolver checks
- Random device parameter sets that respect the frequency hierarchy
"""
import math
from typing import List, Tuple

import numpy as np
from faker import Faker

from chiral_ring.model import DeviceParams
from chiral_ring.sweep import default_omega_center

DEFAULT_SEED = 20240611


class ParamFactory:
    """
    Factory to generate test parameters with Faker.

    Uses Singleton pattern to reuse same instance. Call reseed() to restart
    the sequence so every test sees the same numbers.
    """

    _instance = None

    def __new__(cls, *args, **kwargs):
        """Singleton - only one instance"""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self, seed: int = DEFAULT_SEED):
        if self._initialized:
            return
        self.seed = seed
        self.fake = Faker()
        self.reseed()
        self._initialized = True

    def reseed(self, seed: int = None) -> 'ParamFactory':
        self.fake.seed_instance(self.seed if seed is None else seed)
        return self

    def uniform(self, low: float, high: float) -> float:
        return self.fake.random.uniform(low, high)

    # ============================================
    # Drive Points
    # ============================================

    def random_phi(self, n_sites: int = 3, margin: float = 0.05) -> float:
        """Phase in [0, 2π) at least margin away from every line nπ/N."""
        while True:
            phi = self.uniform(0.0, 2.0 * math.pi)
            distance = abs(((phi * n_sites / math.pi) + 0.5) % 1.0 - 0.5) * math.pi / n_sites
            if distance >= margin:
                return phi

    def random_omega_d(self, device: DeviceParams, eps_d: float = 0.05,
                       half_width_j0: float = 4.0) -> float:
        center = default_omega_center(device, eps_d)
        return self.uniform(center - half_width_j0 * device.j0, center + half_width_j0 * device.j0)

    def random_points(self, device: DeviceParams, count: int = 20,
                      eps_d: float = 0.05) -> List[Tuple[float, float]]:
        """
        Generate (omega_d, phi) pairs inside the default sweep window.

        Args:
            device: Device parameters
            count: Number of points
            eps_d: Drive amplitude used for the band center

        Returns:
            List of (omega_d, phi)
        """
        return [(self.random_omega_d(device, eps_d), self.random_phi(device.n_sites))
                for _ in range(count)]

    # ============================================
    # Matrices
    # ============================================

    def random_hermitian(self, dim: int, scale: float = 1.0) -> np.ndarray:
        real = np.array([[self.fake.random.gauss(0.0, 1.0) for _ in range(dim)] for _ in range(dim)])
        imag = np.array([[self.fake.random.gauss(0.0, 1.0) for _ in range(dim)] for _ in range(dim)])
        matrix = real + 1j * imag
        return 0.5 * scale * (matrix + matrix.conj().T)

    def random_state(self, dim: int) -> np.ndarray:
        vector = np.array([complex(self.fake.random.gauss(0, 1), self.fake.random.gauss(0, 1))
                           for _ in range(dim)])
        return vector / np.linalg.norm(vector)

    # ============================================
    # Devices
    # ============================================

    def create_device(self, n_sites: int = 3) -> DeviceParams:
        """
        Random device whose hierarchy ratios all clear the default factor of 3.

        Returns:
            DeviceParams
        """
        j0 = self.uniform(0.5e-3, 1.2e-3)
        kappa = j0 * self.uniform(0.05, 0.2)
        gamma = kappa * self.uniform(0.05, 0.2)
        return DeviceParams(
            n_sites=n_sites,
            omega_q=self.uniform(6.8, 7.2),
            omega_c=self.uniform(5.8, 6.2),
            g=self.uniform(0.08, 0.12),
            j0=j0,
            kappa=kappa,
            gamma=gamma,
            gamma_phi=gamma * self.uniform(0.05, 0.2),
            deltas=tuple(10 * j0 + 4 * j0 * i for i in range(n_sites))
        )


# ============================================
# Global instance
# ============================================
param_factory = ParamFactory()
