"""
Device and Drive Model
Physical parameters of the driven qubit ring and every derived scale

All angular frequencies and rates are stored in units of 2π·GHz, i.e. the
numbers as they are quoted for superconducting devices. The only place
where they are converted to SI is ANGULAR_GHZ_TO_PER_SECOND below.
"""
import math
from dataclasses import dataclass, field, asdict, replace
from typing import Any, Dict, List, Optional, Tuple

from chiral_ring.errors import InvalidParameter, DegenerateDrive
from chiral_ring.sim_logger import logger

TWO_PI = 2.0 * math.pi

# 1 (2π·GHz) expressed in 1/s
ANGULAR_GHZ_TO_PER_SECOND = TWO_PI * 1e9

DEFAULT_HIERARCHY_FACTOR = 3.0
DEFAULT_EPS_D = 0.05


# ============================================
# Parameter Types
# ============================================

@dataclass(frozen=True)
class DeviceParams:
    """
    Fabricated device: N qubits on a ring, each coupled to its own cavity.

    Attributes:
        n_sites: Number of qubits N
        omega_q: Qubit base splitting ω_q
        omega_c: Cavity base frequency ω_c
        g: Rabi coupling between each qubit and its cavity
        j0: Coupler hopping amplitude J_0
        kappa: Cavity damping κ
        gamma: Qubit decay γ
        gamma_phi: Qubit dephasing γ_φ
        deltas: Optional per-site offsets δ_i, used for hierarchy checks only
    """
    n_sites: int = 3
    omega_q: float = 7.0
    omega_c: float = 6.0
    g: float = 0.1
    j0: float = 1e-3
    kappa: float = 1e-4
    gamma: float = 1e-5
    gamma_phi: float = 1e-6
    deltas: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.deltas is not None:
            object.__setattr__(self, 'deltas', tuple(float(d) for d in self.deltas))

    @classmethod
    def standard(cls, n_sites: int = 3) -> 'DeviceParams':
        """Phenomenological parameter set with offsets δ_i = 0.010 + 0.005·i."""
        return cls(n_sites=n_sites,
                   deltas=tuple(0.010 + 0.005 * i for i in range(n_sites)))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DeviceParams':
        kwargs = dict(data)
        if kwargs.get('deltas') is not None:
            kwargs['deltas'] = tuple(kwargs['deltas'])
        return cls(**kwargs)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['deltas'] = list(self.deltas) if self.deltas is not None else None
        return data

    @property
    def delta(self) -> float:
        """Qubit-cavity detuning Δ = ω_q − ω_c."""
        return self.omega_q - self.omega_c

    @property
    def dim(self) -> int:
        return 2 ** self.n_sites


@dataclass(frozen=True)
class DriveParams:
    """
    Cavity drive and coupler phase, uniform over the ring.

    The drive phases Φ_i^d are fixed to zero. phi is folded into [0, 2π).
    """
    omega_d: float = 6.5
    phi: float = math.pi / 2
    eps_d: float = DEFAULT_EPS_D

    def __post_init__(self):
        omega_d = _require_finite('omega_d', self.omega_d)
        eps_d = _require_finite('eps_d', self.eps_d)
        if eps_d < 0.0:
            raise InvalidParameter('eps_d', eps_d, "drive amplitude must be >= 0")
        folded = _require_finite('phi', self.phi) % TWO_PI
        if folded >= TWO_PI:
            folded = 0.0
        object.__setattr__(self, 'omega_d', omega_d)
        object.__setattr__(self, 'phi', float(folded))
        object.__setattr__(self, 'eps_d', eps_d)

    def with_point(self, omega_d: float, phi: float) -> 'DriveParams':
        return replace(self, omega_d=omega_d, phi=phi)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class DerivedScales:
    """Detunings, shifts and effective fields shared by every other module."""
    delta: float
    delta_q: float
    delta_c: float
    lamb_shift: float
    a_bar: complex
    h_x: float
    h_z: float
    omega_d_bar: float
    g_over_delta: float

    def perturbative_ratio(self, n_sites: int, eps_d: float) -> float:
        """(g/Δ)·√N·ε_d/|Δ_q|, the expansion parameter of the analytic spectrum."""
        if self.delta_q == 0.0:
            return math.inf
        return self.g_over_delta * math.sqrt(n_sites) * eps_d / abs(self.delta_q)


# ============================================
# Validation
# ============================================

@dataclass(frozen=True)
class HierarchyCheck:
    name: str
    ratio: Optional[float]
    threshold: float
    status: str  # 'pass', 'warn' or 'skipped'

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ValidationReport:
    """
    Outcome of validate(): one entry per ratio of the frequency hierarchy

        Δ ≫ g ≫ |δ_i| ≫ J_0 ≫ κ ≫ γ ≫ γ_φ

    plus the coupler detunings δ_i − δ_{i+1} against J_0.
    """
    checks: List[HierarchyCheck] = field(default_factory=list)

    @property
    def warnings(self) -> List[HierarchyCheck]:
        return [c for c in self.checks if c.status == 'warn']

    @property
    def passed(self) -> bool:
        return not self.warnings

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'warning_count': len(self.warnings),
            'checks': [c.to_dict() for c in self.checks]
        }


_POSITIVE_FIELDS = ('g', 'j0', 'kappa', 'gamma', 'gamma_phi')


def _require_finite(name: str, value) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidParameter(name, value, "must be a real number")
    if not math.isfinite(value):
        raise InvalidParameter(name, value, "must be finite")
    return value


def validate(device: DeviceParams,
             factor: float = DEFAULT_HIERARCHY_FACTOR) -> ValidationReport:
    """
    Validate device parameters and grade the frequency hierarchy.

    Args:
        device: Device parameters
        factor: Minimum ratio between consecutive scales before a warning

    Returns:
        ValidationReport with one HierarchyCheck per ratio

    Raises:
        InvalidParameter: Non-finite or non-positive fields, n_sites < 3,
            or omega_q <= omega_c
    """
    if isinstance(device.n_sites, bool) or not isinstance(device.n_sites, int):
        raise InvalidParameter('n_sites', device.n_sites, "must be an integer")
    if device.n_sites < 3:
        raise InvalidParameter('n_sites', device.n_sites,
                               "a ring with flux needs at least 3 sites")

    omega_q = _require_finite('omega_q', device.omega_q)
    omega_c = _require_finite('omega_c', device.omega_c)
    for name in _POSITIVE_FIELDS:
        value = _require_finite(name, getattr(device, name))
        if value <= 0.0:
            raise InvalidParameter(name, value, "must be strictly positive")
    if omega_c <= 0.0:
        raise InvalidParameter('omega_c', omega_c, "must be strictly positive")
    if omega_q <= omega_c:
        raise InvalidParameter('omega_q', omega_q, "must exceed omega_c")

    if device.deltas is not None:
        if len(device.deltas) != device.n_sites:
            raise InvalidParameter('deltas', device.deltas,
                                   f"expected {device.n_sites} offsets")
        for i, d in enumerate(device.deltas):
            _require_finite(f'deltas[{i}]', d)

    report = ValidationReport()

    def grade(name: str, ratio: Optional[float]):
        if ratio is None:
            report.checks.append(HierarchyCheck(name, None, factor, 'skipped'))
            return
        status = 'pass' if ratio >= factor else 'warn'
        report.checks.append(HierarchyCheck(name, ratio, factor, status))
        if status == 'warn':
            logger.warning(f"hierarchy {name} = {ratio:.3g} below {factor:g}")

    grade('Delta/g', device.delta / device.g)
    if device.deltas is not None:
        magnitudes = [abs(d) for d in device.deltas]
        couplers = [abs(device.deltas[i] - device.deltas[(i + 1) % device.n_sites])
                    for i in range(device.n_sites)]
        grade('g/max|delta_i|', device.g / max(magnitudes) if max(magnitudes) > 0 else math.inf)
        grade('min|delta_i|/J0', min(magnitudes) / device.j0)
        grade('min|delta_i - delta_i+1|/J0', min(couplers) / device.j0)
    else:
        grade('g/max|delta_i|', None)
        grade('min|delta_i|/J0', None)
        grade('min|delta_i - delta_i+1|/J0', None)
        grade('g/J0', device.g / device.j0)
    grade('J0/kappa', device.j0 / device.kappa)
    grade('kappa/gamma', device.kappa / device.gamma)
    grade('gamma/gamma_phi', device.gamma / device.gamma_phi)

    return report


# ============================================
# Derived Scales
# ============================================

def derived_scales(device: DeviceParams, drive: DriveParams) -> DerivedScales:
    """
    Compute detunings, the drive-renormalized Lamb shift and effective fields.

    Args:
        device: Device parameters (validated)
        drive: Drive parameters

    Returns:
        DerivedScales

    Raises:
        DegenerateDrive: Drive on an undamped cavity resonance (ā diverges)
    """
    delta_q = device.omega_q - drive.omega_d
    delta_c = drive.omega_d - device.omega_c
    # summed rather than ω_q − ω_c so that Δ = Δ_q + Δ_c holds bit for bit
    delta = delta_q + delta_c
    g_over_delta = device.g / delta

    denominator = complex(delta_c, device.kappa / 2.0)
    if device.kappa <= 0.0 and abs(delta_c) < 1e-12:
        raise DegenerateDrive(f"omega_d = {drive.omega_d} sits on the cavity "
                              f"resonance with kappa = {device.kappa}")
    a_bar = complex(drive.eps_d) / denominator if drive.eps_d else 0j

    lamb_shift = g_over_delta ** 2 * delta * (1.0 + 12.0 * (drive.eps_d / delta) ** 2)
    h_x = 2.0 * g_over_delta * drive.eps_d
    h_z = delta_q + lamb_shift
    omega_d_bar = 0.5 * (device.omega_c + device.omega_q + lamb_shift
                         + g_over_delta ** 2 * device.n_sites * drive.eps_d ** 2 / delta)

    return DerivedScales(
        delta=delta,
        delta_q=delta_q,
        delta_c=delta_c,
        lamb_shift=lamb_shift,
        a_bar=a_bar,
        h_x=h_x,
        h_z=h_z,
        omega_d_bar=omega_d_bar,
        g_over_delta=g_over_delta
    )


def to_per_second(value: float) -> float:
    """Convert a rate or current in 2π·GHz to 1/s."""
    return value * ANGULAR_GHZ_TO_PER_SECOND
