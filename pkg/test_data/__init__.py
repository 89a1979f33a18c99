"""Test data module"""
from .param_factory import ParamFactory, param_factory

__all__ = [
    'ParamFactory',
    'param_factory'
]
