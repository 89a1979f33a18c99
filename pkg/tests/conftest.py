"""
Pytest Configuration and Fixtures
HTML report customization and global fixtures
"""
import math
import sys
from datetime import datetime
from pathlib import Path

import numpy as np
import pytest

from chiral_ring import __version__
from chiral_ring.model import DeviceParams, DriveParams
from chiral_ring.sweep import default_omega_center


# ============================================
# HTML Report Customization
# ============================================

def pytest_html_report_title(report):
    """Customize HTML report title"""
    report.title = "Chiral Ring Simulator - Test Report"


def pytest_configure(config):
    """Add custom metadata to report"""
    config._metadata = {
        "Project": "chiral_ring",
        "Version": __version__,
        "Test Date": datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
        "Python Version": f"{sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}",
        "NumPy Version": np.__version__,
        "Test Categories": "Model, Operators, Spectrum, Rates, Steady State, Observables, "
                           "Sweep, Config, CLI, Acceptance"
    }


def pytest_html_results_summary(prefix, summary, postfix):
    """Add custom summary section to HTML report"""
    prefix.extend([
        "<h2>Chiral Ring Simulator Summary</h2>",
        "<p>Steady-state current of a driven-dissipative qubit ring:</p>",
        "<ul>",
        "<li><strong>Spectrum</strong> - exact diagonalization against the chiral dispersion</li>",
        "<li><strong>Rates</strong> - full Fermi-Golden-Rule rates against the closed-form pump rate</li>",
        "<li><strong>Steady state</strong> - Liouvillian null space against secular rate equations</li>",
        "<li><strong>Symmetries</strong> - antisymmetry and zero-current phases of the current map</li>",
        "</ul>"
    ])


# ============================================
# Global Fixtures
# ============================================

@pytest.fixture(scope='session')
def device():
    """Default three-site device"""
    return DeviceParams.standard(3)


@pytest.fixture(scope='session')
def omega_bar(device):
    """Band center ω̄_d at the default drive amplitude"""
    return default_omega_center(device, 0.05)


@pytest.fixture
def drive(omega_bar):
    """Default drive at the band center, φ = π/2"""
    return DriveParams(omega_d=omega_bar, phi=math.pi / 2, eps_d=0.05)


@pytest.fixture(scope='session')
def configs_dir():
    return Path(__file__).resolve().parent.parent / 'configs'


@pytest.fixture
def write_config(tmp_path):
    """Write a YAML string to a temporary config file and return its path"""
    def _write(text: str, name: str = 'config.yaml') -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write
