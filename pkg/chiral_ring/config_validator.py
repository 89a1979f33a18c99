"""
Run Configuration Schema
JSON Schema (Draft 7) for run configuration files and its validator
"""
import math
from typing import Any, Dict, List

from jsonschema import Draft7Validator

_POSITIVE = {'type': 'number', 'exclusiveMinimum': 0}

CONFIG_SCHEMA: Dict[str, Any] = {
    '$schema': 'http://json-schema.org/draft-07/schema#',
    'title': 'chiral_ring run configuration',
    'type': 'object',
    'additionalProperties': False,
    'properties': {
        'device': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'n_sites': {'type': 'integer', 'minimum': 3, 'maximum': 12, 'default': 3,
                            'description': 'number of qubits N on the ring [dimensionless]'},
                'omega_q': {**_POSITIVE, 'default': 7.0,
                            'description': 'qubit base splitting [2pi GHz]'},
                'omega_c': {**_POSITIVE, 'default': 6.0,
                            'description': 'cavity frequency [2pi GHz]'},
                'g': {**_POSITIVE, 'default': 0.1,
                      'description': 'qubit-cavity Rabi coupling [2pi GHz]'},
                'j0': {**_POSITIVE, 'default': 1e-3,
                       'description': 'coupler hopping J0 [2pi GHz]'},
                'kappa': {**_POSITIVE, 'default': 1e-4,
                          'description': 'cavity linewidth [2pi GHz]'},
                'gamma': {**_POSITIVE, 'default': 1e-5,
                          'description': 'qubit decay rate [2pi GHz]'},
                'gamma_phi': {**_POSITIVE, 'default': 1e-6,
                              'description': 'qubit dephasing rate [2pi GHz]'},
                'deltas': {'type': ['array', 'null'], 'items': {'type': 'number'}, 'default': None,
                           'description': 'per-site offsets delta_i, hierarchy checks only [2pi GHz]'},
            },
        },
        'drive': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'omega_d': {'type': ['number', 'null'], 'default': None,
                            'description': 'drive frequency, null for the band center [2pi GHz]'},
                'phi': {'type': 'number', 'default': math.pi / 2,
                        'description': 'coupler phase [rad]'},
                'eps_d': {'type': 'number', 'minimum': 0, 'default': 0.05,
                          'description': 'cavity drive amplitude [2pi GHz]'},
            },
        },
        'sweep': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'omega_d_min': {'type': ['number', 'null'], 'default': None,
                                'description': 'lowest drive frequency, null for center - 4 J0 [2pi GHz]'},
                'omega_d_max': {'type': ['number', 'null'], 'default': None,
                                'description': 'highest drive frequency, null for center + 4 J0 [2pi GHz]'},
                'omega_d_steps': {'type': 'integer', 'minimum': 2, 'default': 101,
                                  'description': 'drive-frequency samples [count]'},
                'phi_steps': {'type': 'integer', 'minimum': 2, 'default': 121,
                              'description': 'phase samples over [0, 2pi) [count]'},
                'solver': {'enum': ['rates', 'nullspace', 'analytic'], 'default': 'rates',
                           'description': 'steady-state solver [name]'},
                'workers': {'type': 'integer', 'minimum': 1, 'default': 1,
                            'description': 'worker processes [count]'},
            },
        },
        'output': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'path': {'type': 'string', 'default': 'sweep.csv',
                         'description': 'sweep output file [path]'},
                'format': {'enum': ['csv', 'json'], 'default': 'csv',
                           'description': 'sweep output format [name]'},
                'precision': {'type': 'integer', 'minimum': 1, 'maximum': 17, 'default': 17,
                              'description': 'significant digits in CSV output [digits]'},
            },
        },
    },
}

SECTIONS = tuple(CONFIG_SCHEMA['properties'])


class ConfigValidator:
    """
    Validate run configurations against CONFIG_SCHEMA.

    Usage:
        validator = ConfigValidator()
        errors = validator.validate(data)
        if errors:
            print(f"Validation failed: {errors}")
    """

    def __init__(self, schema: Dict[str, Any] = None):
        self.schema = schema or CONFIG_SCHEMA
        self._validator = Draft7Validator(self.schema)

    def validate(self, data: Any) -> List[str]:
        """
        Validate configuration data.

        Args:
            data: Parsed configuration (dict)

        Returns:
            List of "path: message" strings (empty if valid)
        """
        errors = []
        for error in sorted(self._validator.iter_errors(data), key=lambda e: list(map(str, e.path))):
            path = '.'.join(str(p) for p in error.path) if error.path else 'root'
            errors.append(f"{path}: {error.message}")
        return errors

    def defaults(self, section: str) -> Dict[str, Any]:
        """Default value of every key in a section."""
        properties = self.schema['properties'][section]['properties']
        return {key: spec.get('default') for key, spec in properties.items()}

    def describe(self) -> List[str]:
        """One line per configuration key: name, default, unit and meaning."""
        lines = []
        for section in SECTIONS:
            for key, spec in self.schema['properties'][section]['properties'].items():
                lines.append(f"  {section}.{key:<14} default {spec.get('default')!r:<22} "
                             f"{spec.get('description', '')}")
        return lines
