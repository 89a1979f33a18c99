"""
Sweep Files
CSV and JSON serialization of SweepResult

CSV columns, in order:
    omega_d, phi, current_natural, current_per_sec, n_ground,
    n_k0 .. n_k{N-1}, trace_err, residual, solver_status
Rows run φ outer, ω_d inner. Numbers use 17 significant digits by default
so that a rerun produces a byte-identical file.
"""
import csv
import json
import re
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np

from chiral_ring.errors import ConfigError
from chiral_ring.sweep import SweepResult

PathLike = Union[str, Path]

LEADING_COLUMNS = ['omega_d', 'phi', 'current_natural', 'current_per_sec', 'n_ground']
TRAILING_COLUMNS = ['trace_err', 'residual', 'solver_status']
_NK_COLUMN = re.compile(r'^n_k(\d+)$')


def csv_columns(n_sites: int) -> List[str]:
    return LEADING_COLUMNS + [f'n_k{k}' for k in range(n_sites)] + TRAILING_COLUMNS


def _format(value: Any, precision: int) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), f'.{precision}g')


def write_sweep_csv(result: SweepResult, path: PathLike, precision: int = 17) -> Path:
    """Write the sweep as CSV; returns the path written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = csv_columns(result.n_sites)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(columns)
        for row in result.rows():
            writer.writerow([_format(row[c], precision) for c in columns])
    return path


def sweep_payload(result: SweepResult) -> Dict[str, Any]:
    """The comparable JSON payload: metadata, axes and rows (no wall time)."""
    return {
        'metadata': {**result.metadata, 'n_sites': result.n_sites},
        'axes': {
            'omega_d': [float(v) for v in result.omega_d],
            'phi': [float(v) for v in result.phi]
        },
        'columns': csv_columns(result.n_sites),
        'rows': list(result.rows())
    }


def write_sweep_json(result: SweepResult, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(sweep_payload(result), f, indent=2, sort_keys=True)
        f.write('\n')
    return path


def _from_rows(rows: List[Dict[str, Any]], n_sites: int, source: str,
               metadata: Dict[str, Any] = None) -> SweepResult:
    if not rows:
        raise ConfigError(f"sweep file '{source}' has no data rows")
    try:
        omegas = [float(r['omega_d']) for r in rows]
        phis = [float(r['phi']) for r in rows]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"sweep file '{source}': bad axis value ({exc})") from exc

    omega_axis = np.array(list(dict.fromkeys(omegas)))
    phi_axis = np.array(list(dict.fromkeys(phis)))
    if omega_axis.size * phi_axis.size != len(rows):
        raise ConfigError(f"sweep file '{source}': {len(rows)} rows do not form a "
                          f"{phi_axis.size} x {omega_axis.size} grid")
    for name, axis in (('omega_d', omega_axis), ('phi', phi_axis)):
        if axis.size > 1 and not np.all(np.diff(axis) > 0):
            raise ConfigError(f"sweep file '{source}': {name} axis is not strictly increasing")

    result = SweepResult.empty(omega_axis, phi_axis, n_sites, metadata)
    for index, row in enumerate(rows):
        j, i = divmod(index, omega_axis.size)
        if float(row['omega_d']) != omega_axis[i] or float(row['phi']) != phi_axis[j]:
            raise ConfigError(f"sweep file '{source}': row {index + 2} out of grid order")
        try:
            result.current_natural[j, i] = float(row['current_natural'])
            result.current_per_sec[j, i] = float(row['current_per_sec'])
            result.n_ground[j, i] = float(row['n_ground'])
            for k in range(n_sites):
                result.n_k[j, i, k] = float(row[f'n_k{k}'])
            result.trace_err[j, i] = float(row['trace_err'])
            result.residual[j, i] = float(row['residual'])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"sweep file '{source}': bad value in row {index + 2} ({exc})") from exc
        result.solver_status[j, i] = str(row.get('solver_status', ''))
    return result


def read_sweep_csv(path: PathLike) -> SweepResult:
    """
    Read a sweep CSV; N is inferred from the n_k columns.

    Raises:
        ConfigError: Missing, empty or malformed file
    """
    path = Path(path)
    try:
        with open(path, 'r', newline='') as f:
            reader = csv.DictReader(f)
            header = reader.fieldnames or []
            rows = list(reader)
    except OSError as exc:
        raise ConfigError(f"cannot read sweep file '{path}': {exc.strerror}") from exc
    except csv.Error as exc:
        raise ConfigError(f"malformed CSV in '{path}': {exc}") from exc

    if not header:
        raise ConfigError(f"sweep file '{path}' is empty")
    n_sites = sum(1 for column in header if _NK_COLUMN.match(column))
    if header != csv_columns(n_sites):
        raise ConfigError(f"sweep file '{path}' has unexpected columns: {', '.join(header)}")
    return _from_rows(rows, n_sites, str(path))


def read_sweep_json(path: PathLike) -> SweepResult:
    path = Path(path)
    try:
        with open(path, 'r') as f:
            payload = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read sweep file '{path}': {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in '{path}': {exc}") from exc

    try:
        metadata = dict(payload['metadata'])
        n_sites = int(metadata.pop('n_sites'))
        rows = payload['rows']
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"sweep file '{path}' lacks metadata or rows") from exc
    return _from_rows(rows, n_sites, str(path), metadata)


def read_sweep(path: PathLike) -> SweepResult:
    """Read a sweep file by extension (.json, otherwise CSV)."""
    return read_sweep_json(path) if Path(path).suffix.lower() == '.json' else read_sweep_csv(path)
