"""
Pytest configuration and fixtures
"""
import pytest
from test_data.param_factory import param_factory as _param_factory


@pytest.fixture
def param_factory():
    """
    Provide the seeded parameter factory, restarted for every test.

    Returns:
        ParamFactory: Factory for reproducible random parameters
    """
    return _param_factory.reseed()
