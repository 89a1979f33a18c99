"""
Run Configuration Loader
Load YAML run configurations and turn them into simulator parameters
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from chiral_ring.config_validator import SECTIONS, ConfigValidator
from chiral_ring.errors import ConfigError
from chiral_ring.model import DeviceParams, DriveParams
from chiral_ring.sweep import SweepSpec, default_omega_center


@dataclass(frozen=True)
class OutputOptions:
    path: str = 'sweep.csv'
    format: str = 'csv'
    precision: int = 17


@dataclass(frozen=True)
class RunConfig:
    """Device, drive, sweep and output settings of one run."""
    device: DeviceParams = field(default_factory=DeviceParams.standard)
    drive: DriveParams = field(default_factory=DriveParams)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    output: OutputOptions = field(default_factory=OutputOptions)


class ConfigLoader:
    """
    Load and validate a run configuration file.

    Usage:
        loader = ConfigLoader('configs/ring-n3.yaml')
        config = loader.get_config()
        device = loader.get_section('device')
        run = loader.get_run_config()
    """

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        """
        Initialize loader with a configuration path.

        Args:
            config_path: Path to a YAML file; None means all defaults
        """
        self.config_path = Path(config_path) if config_path is not None else None
        self.validator = ConfigValidator()
        self._config = None

    def get_config(self) -> Dict[str, Any]:
        """
        Load, validate and return the raw configuration.

        Returns:
            Dict with the sections present in the file

        Raises:
            ConfigError: Unreadable file, malformed YAML or schema violations
        """
        if self._config is not None:
            return self._config
        if self.config_path is None:
            self._config = {}
            return self._config

        try:
            with open(self.config_path, 'r') as f:
                data = yaml.safe_load(f)
        except OSError as exc:
            raise ConfigError(f"cannot read config '{self.config_path}': {exc.strerror}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"malformed YAML in '{self.config_path}': {exc}") from exc

        data = {} if data is None else data
        errors = self.validator.validate(data)
        if errors:
            raise ConfigError(f"invalid config '{self.config_path}': " + '; '.join(errors), errors)
        self._config = data
        return self._config

    def get_section(self, section_name: str) -> Dict[str, Any]:
        """
        Get one section with schema defaults filled in.

        Raises:
            KeyError: Unknown section name
        """
        if section_name not in SECTIONS:
            raise KeyError(f"Section '{section_name}' not found in schema")
        merged = self.validator.defaults(section_name)
        merged.update(self.get_config().get(section_name) or {})
        return merged

    def get_run_config(self) -> RunConfig:
        """
        Build typed parameters from the configuration.

        The drive frequency defaults to the band center ω̄_d. Without an
        explicit deltas entry the device gets the default offsets.

        Raises:
            ConfigError: Invalid combinations of otherwise valid keys
        """
        device_section = self.get_section('device')
        explicit = self.get_config().get('device') or {}
        if 'deltas' not in explicit:
            device_section['deltas'] = DeviceParams.standard(device_section['n_sites']).deltas
        device = DeviceParams.from_dict(device_section)

        drive_section = self.get_section('drive')
        omega_d = drive_section['omega_d']
        if omega_d is None:
            omega_d = default_omega_center(device, drive_section['eps_d'])
        drive = DriveParams(omega_d=omega_d, phi=drive_section['phi'], eps_d=drive_section['eps_d'])

        sweep_section = self.get_section('sweep')
        bounds = (sweep_section['omega_d_min'], sweep_section['omega_d_max'])
        if (bounds[0] is None) != (bounds[1] is None):
            raise ConfigError("sweep: omega_d_min and omega_d_max must be given together")
        sweep = SweepSpec(
            device=device,
            eps_d=drive.eps_d,
            omega_d_range=None if bounds[0] is None else (float(bounds[0]), float(bounds[1])),
            omega_d_steps=sweep_section['omega_d_steps'],
            phi_steps=sweep_section['phi_steps'],
            solver=sweep_section['solver'],
            workers=sweep_section['workers']
        ).validate()

        output = OutputOptions(**self.get_section('output'))
        return RunConfig(device=device, drive=drive, sweep=sweep, output=output)
