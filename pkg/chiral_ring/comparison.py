"""
Sweep Comparison
Compare the current maps of two sweeps cell by cell

A cell counts when both currents clear the floor |𝓘| ≥ floor and both
solves succeeded. Cells where the signs disagree are grouped into
connected sign-reversal clusters.
"""
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy import ndimage

from chiral_ring.errors import AxisMismatch
from chiral_ring.model import DeviceParams
from chiral_ring.sweep import SweepResult

DEFAULT_FLOOR_FRACTION = 0.01


class SignReversalCluster:
    """
    Connected region of cells where the two current maps have opposite signs.

    Attributes:
        cells: (phi_index, omega_index) pairs
        centroid: Mean (omega_d, phi) of the cells
        size: Number of cells
    """

    def __init__(self, cells: List[Tuple[int, int]], centroid: Tuple[float, float]):
        self.cells = cells
        self.centroid = centroid
        self.size = len(cells)

    def __repr__(self):
        return (f"SignReversalCluster(size={self.size}, omega_d={self.centroid[0]:.6f}, "
                f"phi={self.centroid[1]:.4f})")

    def to_dict(self):
        return {
            'size': self.size,
            'centroid_omega_d': self.centroid[0],
            'centroid_phi': self.centroid[1],
            'cells': [list(cell) for cell in self.cells]
        }


class ComparisonReport:
    """Sign agreement between two sweeps on the cells above the floor."""

    def __init__(self, agreement: float, floor: float, compared: int, masked: int,
                 clusters: List[SignReversalCluster]):
        self.agreement = agreement
        self.floor = floor
        self.compared = compared
        self.masked = masked
        self.clusters = clusters

    @property
    def disagreeing(self) -> int:
        return sum(c.size for c in self.clusters)

    def get_summary(self) -> Dict[str, Any]:
        """
        Get summary statistics of the comparison.

        Returns:
            Dict with summary statistics
        """
        largest = max((c.size for c in self.clusters), default=0)
        return {
            'sign_agreement': self.agreement,
            'floor': self.floor,
            'compared_cells': self.compared,
            'masked_cells': self.masked,
            'disagreeing_cells': self.disagreeing,
            'cluster_count': len(self.clusters),
            'largest_cluster': largest,
            'clusters': [c.to_dict() for c in sorted(self.clusters, key=lambda c: -c.size)]
        }


def default_floor(result: SweepResult) -> float:
    """1% of 2J_0/N for the device recorded in the sweep (standard device otherwise)."""
    device = result.device or DeviceParams.standard(result.n_sites)
    return DEFAULT_FLOOR_FRACTION * 2.0 * device.j0 / result.n_sites


def compare_sweeps(a: SweepResult, b: SweepResult,
                   floor: Optional[float] = None) -> ComparisonReport:
    """
    Compare the current maps of two sweeps.

    Args:
        a: First sweep
        b: Second sweep on identical axes
        floor: Minimum |𝓘| in both maps for a cell to count
            (default 1% of 2J_0/N); math.inf masks every cell

    Returns:
        ComparisonReport; agreement is 1.0 when no cell is compared

    Raises:
        AxisMismatch: Axes differ in length or value
    """
    if a.n_sites != b.n_sites:
        raise AxisMismatch(f"ring sizes differ: {a.n_sites} vs {b.n_sites}")
    for name in ('omega_d', 'phi'):
        axis_a, axis_b = getattr(a, name), getattr(b, name)
        if axis_a.shape != axis_b.shape or not np.array_equal(axis_a, axis_b):
            raise AxisMismatch(f"{name} axes differ ({axis_a.size} vs {axis_b.size} points)")

    if floor is None:
        floor = default_floor(a)

    current_a, current_b = a.current_natural, b.current_natural
    solved = (a.solver_status == 'ok') & (b.solver_status == 'ok')
    solved &= np.isfinite(current_a) & np.isfinite(current_b)
    with np.errstate(invalid='ignore'):
        counted = solved & (np.minimum(np.abs(current_a), np.abs(current_b)) >= floor)

    compared = int(np.count_nonzero(counted))
    reversed_cells = counted & (np.sign(current_a) != np.sign(current_b))
    agreement = 1.0 if compared == 0 else 1.0 - np.count_nonzero(reversed_cells) / compared

    labels, n_clusters = ndimage.label(reversed_cells)
    clusters = []
    for label in range(1, n_clusters + 1):
        cells = [(int(j), int(i)) for j, i in np.argwhere(labels == label)]
        centroid = (float(np.mean([a.omega_d[i] for _, i in cells])),
                    float(np.mean([a.phi[j] for j, _ in cells])))
        clusters.append(SignReversalCluster(cells, centroid))

    return ComparisonReport(agreement=float(agreement), floor=float(floor), compared=compared,
                            masked=int(counted.size - compared), clusters=clusters)
