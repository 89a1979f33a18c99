"""
Configuration Loader Tests
Load YAML run configurations and build typed parameters
"""
import math

import pytest

from chiral_ring.config_loader import ConfigLoader, RunConfig
from chiral_ring.errors import ConfigError
from chiral_ring.model import DeviceParams
from chiral_ring.sweep import default_omega_center


@pytest.mark.config
class TestConfigLoader:

    def test_shipped_config(self, configs_dir):
        """Test: Shipped three-site config builds the default device"""
        run = ConfigLoader(configs_dir / 'ring-n3.yaml').get_run_config()

        assert isinstance(run, RunConfig)
        assert run.device.n_sites == 3
        assert run.device.j0 == 1e-3
        assert run.drive.phi == pytest.approx(math.pi / 2)
        assert run.sweep.omega_d_steps == 101
        assert run.output.path == 'results/ring-n3.csv'
        print(f"\n[Config] omega_d = {run.drive.omega_d:.7f}")

    def test_band_center_default(self, write_config):
        """Test: omega_d null resolves to the band center"""
        run = ConfigLoader(write_config("drive:\n  omega_d: null\n  eps_d: 0.05\n")).get_run_config()
        assert run.drive.omega_d == pytest.approx(default_omega_center(run.device, 0.05))
        assert run.drive.omega_d == pytest.approx(6.5051875, abs=1e-9)

    def test_explicit_drive(self, write_config):
        """Test: Explicit drive values pass through, φ folded into [0, 2π)"""
        path = write_config("drive:\n  omega_d: 6.503\n  phi: -1.0\n  eps_d: 0.02\n")
        run = ConfigLoader(path).get_run_config()

        assert run.drive.omega_d == 6.503
        assert run.drive.phi == pytest.approx(2 * math.pi - 1.0)
        assert run.sweep.eps_d == 0.02

    def test_default_offsets(self, write_config):
        """Test: Without deltas the device gets the default offsets"""
        run = ConfigLoader(write_config("device:\n  n_sites: 4\n")).get_run_config()
        assert run.device.deltas == DeviceParams.standard(4).deltas

    def test_explicit_null_offsets(self, write_config):
        """Test: deltas: null skips the offset checks"""
        run = ConfigLoader(write_config("device:\n  deltas: null\n")).get_run_config()
        assert run.device.deltas is None

    def test_no_path_means_defaults(self):
        """Test: No file gives the all-default run"""
        loader = ConfigLoader()
        assert loader.get_config() == {}
        assert loader.get_run_config().sweep.solver == 'rates'

    def test_empty_file(self, write_config):
        """Test: Empty YAML document is all defaults"""
        assert ConfigLoader(write_config("")).get_config() == {}

    def test_explicit_range(self, write_config):
        """Test: Both bounds set the sweep window"""
        path = write_config("sweep:\n  omega_d_min: 6.50\n  omega_d_max: 6.51\n  omega_d_steps: 3\n")
        axis = ConfigLoader(path).get_run_config().sweep.omega_axis()
        assert axis.tolist() == pytest.approx([6.50, 6.505, 6.51])

    def test_single_bound(self, write_config):
        """Test: Only one bound raises ConfigError"""
        with pytest.raises(ConfigError, match="together"):
            ConfigLoader(write_config("sweep:\n  omega_d_min: 6.5\n")).get_run_config()

    def test_inverted_range(self, write_config):
        """Test: min above max raises ConfigError from sweep validation"""
        path = write_config("sweep:\n  omega_d_min: 6.6\n  omega_d_max: 6.5\n")
        with pytest.raises(ConfigError, match="omega_d_range"):
            ConfigLoader(path).get_run_config()

    def test_missing_file(self, tmp_path):
        """Test: Missing file raises ConfigError"""
        with pytest.raises(ConfigError, match="cannot read"):
            ConfigLoader(tmp_path / 'missing.yaml').get_config()

    def test_malformed_yaml(self, write_config):
        """Test: Broken YAML raises ConfigError"""
        with pytest.raises(ConfigError, match="malformed YAML"):
            ConfigLoader(write_config("device: [1, 2\n")).get_config()

    def test_schema_violation(self, write_config):
        """Test: Schema errors are collected into one ConfigError"""
        with pytest.raises(ConfigError, match="device.gamma") as exc_info:
            ConfigLoader(write_config("device:\n  gamma: -1\n")).get_config()
        assert exc_info.value.errors

    def test_get_section(self, configs_dir):
        """Test: Sections merge file values over defaults"""
        loader = ConfigLoader(configs_dir / 'ring-n3.yaml')
        sweep = loader.get_section('sweep')

        assert sweep['phi_steps'] == 121
        assert sweep['workers'] == 1

    def test_unknown_section(self, configs_dir):
        """Test: Unknown section name raises KeyError"""
        with pytest.raises(KeyError):
            ConfigLoader(configs_dir / 'ring-n3.yaml').get_section('metrics')
