"""
Many-Qubit Operators
Dense operators on the 2^N Hilbert space of the ring

Basis convention:
- site i maps to bit i of the basis index (site 0 = least significant bit)
- bit value 1 = |↑⟩, bit value 0 = |↓⟩
- basis index = Σ_i b_i·2^i, so |0⟩ ≡ |↓…↓⟩ is index 0 and the
  single-excitation state |i⟩ is index 2^i
"""
from functools import lru_cache, reduce
from typing import Union

import numpy as np

from chiral_ring.errors import IndexOutOfRange, InvalidParameter, NotHermitian
from chiral_ring.model import DeviceParams, DriveParams, derived_scales

MAX_DENSE_SITES = 12
HERMITIAN_RTOL = 1e-12

# single-qubit matrices in the (|↓⟩, |↑⟩) ordering
_SINGLE = {
    'x': np.array([[0, 1], [1, 0]], dtype=complex),
    'y': np.array([[0, 1j], [-1j, 0]], dtype=complex),
    'z': np.array([[-1, 0], [0, 1]], dtype=complex),
    '+': np.array([[0, 0], [1, 0]], dtype=complex),
    '-': np.array([[0, 1], [0, 0]], dtype=complex),
}
_ALIASES = {'−': '-', 'minus': '-', 'plus': '+'}

SiteCount = Union[int, DeviceParams]


def _n_sites(ring: SiteCount) -> int:
    n_sites = ring.n_sites if isinstance(ring, DeviceParams) else int(ring)
    if n_sites < 1:
        raise InvalidParameter('n_sites', n_sites, "must be positive")
    if n_sites > MAX_DENSE_SITES:
        raise InvalidParameter('n_sites', n_sites,
                               f"dense operators are limited to {MAX_DENSE_SITES} sites")
    return n_sites


def _check_index(name: str, index: int, n_sites: int):
    if not 0 <= index < n_sites:
        raise IndexOutOfRange(name, index, n_sites)


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix.setflags(write=False)
    return matrix


def check_hermitian(matrix: np.ndarray, name: str = "operator",
                    rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """
    Raise NotHermitian unless ‖A − A†‖_max < rtol·‖A‖_max.

    Returns:
        The matrix itself, for chaining
    """
    scale = np.max(np.abs(matrix)) if matrix.size else 0.0
    defect = np.max(np.abs(matrix - matrix.conj().T)) if matrix.size else 0.0
    if defect > rtol * max(scale, np.finfo(float).tiny):
        raise NotHermitian(f"{name} is not Hermitian: defect {defect:.3e} "
                           f"against scale {scale:.3e}")
    return matrix


# ============================================
# Single-Site Operators and States
# ============================================

@lru_cache(maxsize=None)
def _pauli_site(kind: str, site: int, n_sites: int) -> np.ndarray:
    # kron puts its left factor on the most significant bit, so site N−1 goes first
    factors = [_SINGLE[kind] if s == site else np.eye(2, dtype=complex)
               for s in reversed(range(n_sites))]
    return _frozen(reduce(np.kron, factors))


def pauli_site(kind: str, site: int, n_sites: SiteCount) -> np.ndarray:
    """
    Single-site Pauli operator embedded in the ring Hilbert space.

    Args:
        kind: One of 'x', 'y', 'z', '+', '-'
        site: Site index in [0, N)
        n_sites: Ring size N (or DeviceParams)

    Returns:
        Read-only (2^N, 2^N) complex matrix

    Raises:
        IndexOutOfRange: site outside the ring
    """
    kind = _ALIASES.get(kind, kind)
    if kind not in _SINGLE:
        raise InvalidParameter('kind', kind, "expected one of x, y, z, +, -")
    n = _n_sites(n_sites)
    _check_index('site', site, n)
    return _pauli_site(kind, site, n)


@lru_cache(maxsize=None)
def _number_operator(n_sites: int) -> np.ndarray:
    counts = np.array([bin(b).count('1') for b in range(2 ** n_sites)], dtype=float)
    return _frozen(np.diag(counts).astype(complex))


def number_operator(n_sites: SiteCount) -> np.ndarray:
    """Total excitation number Σ_i (σ_i^z + 1)/2."""
    return _number_operator(_n_sites(n_sites))


@lru_cache(maxsize=None)
def _translation_operator(n_sites: int) -> np.ndarray:
    dim = 2 ** n_sites
    top = n_sites - 1
    matrix = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        # content of site i moves to site i+1, site N−1 wraps to site 0
        shifted = ((b << 1) & (dim - 1)) | (b >> top)
        matrix[shifted, b] = 1.0
    return _frozen(matrix)


def translation_operator(n_sites: SiteCount) -> np.ndarray:
    """Ring translation T with T|i⟩ = |i+1⟩ and T|k⟩ = e^{−ik}|k⟩."""
    return _translation_operator(_n_sites(n_sites))


def ground_state(n_sites: SiteCount) -> np.ndarray:
    """|0⟩ ≡ |↓…↓⟩."""
    state = np.zeros(2 ** _n_sites(n_sites), dtype=complex)
    state[0] = 1.0
    return state


def quasi_momentum(k_index: int, n_sites: int) -> float:
    return 2.0 * np.pi * k_index / n_sites


def chiral_state(k_index: int, device: SiteCount) -> np.ndarray:
    """
    Chiral single-excitation state |k⟩ = N^{-1/2} Σ_i e^{iki} |i⟩, k = 2πn/N.

    Args:
        k_index: Quasi-momentum index n in [0, N)
        device: DeviceParams (or ring size)

    Returns:
        Unit-norm state vector

    Raises:
        IndexOutOfRange: n outside [0, N)
    """
    n = _n_sites(device)
    _check_index('quasi-momentum', k_index, n)
    k = quasi_momentum(k_index, n)
    state = np.zeros(2 ** n, dtype=complex)
    for i in range(n):
        state[1 << i] = np.exp(1j * k * i)
    return state / np.sqrt(n)


def chiral_basis(device: SiteCount) -> np.ndarray:
    """Matrix whose column n is |k = 2πn/N⟩."""
    n = _n_sites(device)
    return np.column_stack([chiral_state(k_index, n) for k_index in range(n)])


# ============================================
# Hamiltonian and Current
# ============================================

def _bond_hop(bond: int, n_sites: int, phi: float) -> np.ndarray:
    """e^{iφ} σ_i^+ σ_{i+1}^− on one bond (not Hermitian)."""
    nxt = (bond + 1) % n_sites
    return np.exp(1j * phi) * (_pauli_site('+', bond, n_sites) @ _pauli_site('-', nxt, n_sites))


def hopping_term(device: DeviceParams, drive: DriveParams) -> np.ndarray:
    """−J_0 Σ_i [e^{iφ} σ_i^+ σ_{i+1}^− + h.c.] with periodic boundary."""
    n = _n_sites(device)
    hop = sum(_bond_hop(i, n, drive.phi) for i in range(n))
    return -device.j0 * (hop + hop.conj().T)


def build_h_sigma(device: DeviceParams, drive: DriveParams) -> np.ndarray:
    """
    Effective rotating-frame qubit Hamiltonian.

        H_σ = Σ_i [h_x σ_i^x/2 + h_z σ_i^z/2] − J_0 Σ_i [e^{iφ} σ_i^+ σ_{i+1}^− + h.c.]

    with h_x = 2(g/Δ)ε_d and h_z = Δ_q + δω_q.

    Args:
        device: Device parameters
        drive: Drive parameters

    Returns:
        Hermitian (2^N, 2^N) matrix
    """
    n = _n_sites(device)
    scales = derived_scales(device, drive)
    dim = 2 ** n
    h = np.zeros((dim, dim), dtype=complex)
    for i in range(n):
        h += 0.5 * scales.h_z * _pauli_site('z', i, n)
        if scales.h_x:
            h += 0.5 * scales.h_x * _pauli_site('x', i, n)
    h += hopping_term(device, drive)
    return check_hermitian(h, "H_sigma")


def build_current_op(bond: int, device: DeviceParams, drive: DriveParams) -> np.ndarray:
    """
    Bond current I_i = −iJ_0 [e^{iφ} σ_i^+ σ_{i+1}^− − h.c.].

    Raises:
        IndexOutOfRange: bond outside [0, N)
    """
    n = _n_sites(device)
    _check_index('bond', bond, n)
    hop = _bond_hop(bond, n, drive.phi)
    current = -1j * device.j0 * (hop - hop.conj().T)
    return check_hermitian(current, f"current on bond {bond}")


def gauge_rotation(n_sites: SiteCount, shift: int = 1) -> np.ndarray:
    """
    Local rotation U with U σ_j^+ U† = e^{−iθj} σ_j^+, θ = 2π·shift/N.

    Conjugating the ε_d = 0 Hamiltonian by U advances φ by θ.
    """
    n = _n_sites(n_sites)
    theta = 2.0 * np.pi * shift / n
    phases = np.empty(2 ** n, dtype=complex)
    for b in range(2 ** n):
        # U = exp(−iθ Σ_j j·n_j)
        weight = sum(j for j in range(n) if b >> j & 1)
        phases[b] = np.exp(-1j * theta * weight)
    return np.diag(phases)
