"""
Plot Script Generator
Emit a standalone matplotlib script that renders a sweep CSV as heatmaps
"""
from pathlib import Path
from typing import Union

from chiral_ring.errors import ConfigError
from chiral_ring.model import DeviceParams
from chiral_ring.sweep import default_omega_center
from chiral_ring.sweep_io import read_sweep_csv

_TEMPLATE = '''\
"""Maps of {csv_name} with zero-current lines and optimal-drive curves."""
import csv

import matplotlib.pyplot as plt
import numpy as np

CSV_PATH = {csv_path!r}
OMEGA_BAR = {omega_bar!r}
J0 = {j0!r}
POPULATIONS = {populations!r}

with open(CSV_PATH, newline="") as f:
    reader = csv.DictReader(f)
    columns = reader.fieldnames
    rows = list(reader)

N = sum(1 for c in columns if c.startswith("n_k"))
omega = np.array(sorted({{float(r["omega_d"]) for r in rows}}))
phi = np.array(sorted({{float(r["phi"]) for r in rows}}))


def grid(column):
    return np.array([float(r[column]) for r in rows]).reshape(phi.size, omega.size)


def decorate(ax):
    for n in range(2 * N):
        ax.axhline(n * np.pi / N, color="k", linestyle="--", linewidth=0.8)
    phi_line = np.linspace(phi.min(), phi.max(), 400)
    for k in range(N):
        ax.plot(OMEGA_BAR - J0 * np.cos(2 * np.pi * k / N + phi_line), phi_line,
                color="green", linestyle="--", linewidth=1.2)
    ax.set_xlim(omega.min(), omega.max())
    ax.set_ylim(phi.min(), phi.max())
    ax.set_xlabel("drive frequency (2pi GHz)")
    ax.set_ylabel("phase (rad)")


current = grid("current_natural")
limit = np.nanmax(np.abs(current)) or 1.0
panels = [("current (2pi GHz)", current, dict(cmap="RdBu_r", vmin=-limit, vmax=limit))]
if POPULATIONS:
    panels += [(f"n_k{{k}}", grid(f"n_k{{k}}"), dict(cmap="viridis", vmin=0.0))
               for k in range(N)]

fig, axes = plt.subplots(1, len(panels), figsize=(7 * len(panels), 5), squeeze=False)
for ax, (label, values, style) in zip(axes[0], panels):
    mesh = ax.pcolormesh(omega, phi, values, shading="auto", **style)
    fig.colorbar(mesh, ax=ax, label=label)
    decorate(ax)

fig.tight_layout()
fig.savefig(CSV_PATH.rsplit(".", 1)[0] + ".png", dpi=150)
plt.show()
'''


def render_plot_script(csv_path: Union[str, Path], device: DeviceParams = None,
                       eps_d: float = 0.05, populations: bool = False) -> str:
    """
    Build the plotting script for a sweep CSV.

    Every panel shows the 2N zero-current guide lines at φ = nπ/N and the N
    curves ω_d^opt(φ) = ω̄_d − J_0 cos(2πk/N + φ).

    Args:
        csv_path: Sweep CSV (validated here)
        device: Device used for ω̄_d and J_0; default parameters when omitted
        eps_d: Drive amplitude used for ω̄_d
        populations: Add one n_k panel per quasi-momentum next to the current map

    Raises:
        ConfigError: Missing, empty or malformed CSV
    """
    result = read_sweep_csv(csv_path)
    if device is None:
        device = DeviceParams.standard(result.n_sites)
    elif device.n_sites != result.n_sites:
        raise ConfigError(f"sweep has N = {result.n_sites}, config has N = {device.n_sites}")
    return _TEMPLATE.format(csv_name=Path(csv_path).name, csv_path=str(csv_path),
                            omega_bar=default_omega_center(device, eps_d), j0=device.j0,
                            populations=bool(populations))


def write_plot_script(csv_path: Union[str, Path], out_path: Union[str, Path],
                      device: DeviceParams = None, eps_d: float = 0.05,
                      populations: bool = False) -> Path:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(render_plot_script(csv_path, device, eps_d, populations))
    return out_path
