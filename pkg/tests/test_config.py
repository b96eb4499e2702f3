"""Tests for configurations."""

import pytest

from contactinstanton import config


def test_finite_difference_keys():
    """Assert that the keys have not changed."""
    assert list(config.FINITE_DIFFERENCES.keys()) == ["first_order", "nested", "pointwise"]


def test_defaults():
    """Check default values."""
    assert config.FINITE_DIFFERENCES["first_order"] == 1e-4
    assert config.FINITE_DIFFERENCES["nested"] == 1e-3
    assert config.INTEGRATION["newton_tol"] == 1e-10
    assert config.TOLERANCES["kernel_factor"] == 10.0
    assert config.ANALYSIS["gamma"] == 0.4
    assert config.ANALYSIS["norm_safety"] == 1.1
    assert config.ANALYSIS["order_band"] == (0.8, 1.5)


def test_setter():
    """Check whether the setter function performs as expected."""
    config.set_finite_difference_parameters(first_order=1e-3, nested=1e-2, pointwise=1e-4)
    assert config.FINITE_DIFFERENCES["first_order"] == 1e-3
    assert config.FINITE_DIFFERENCES["nested"] == 1e-2
    assert config.FINITE_DIFFERENCES["pointwise"] == 1e-4

    # Set back to previous values in order not to mess up the tests below.
    config.set_finite_difference_parameters(first_order=1e-4, nested=1e-3, pointwise=1e-5)


def test_analysis_context():
    """Check whether the context manager does its job."""
    with config.analysis_context(gamma=0.3, order_band=(0.5, 2.0)):
        assert config.ANALYSIS["gamma"] == 0.3
        assert config.ANALYSIS["order_band"] == (0.5, 2.0)
        assert config.ANALYSIS["norm_safety"] == 1.1

    assert config.ANALYSIS["gamma"] == 0.4
    assert config.ANALYSIS["order_band"] == (0.8, 1.5)


def test_context_restores_after_error():
    with pytest.raises(RuntimeError):
        with config.tolerance_context(invariant=1.0):
            assert config.TOLERANCES["invariant"] == 1.0
            raise RuntimeError
    assert config.TOLERANCES["invariant"] == 1e-10


def test_integration_context():
    with config.integration_context(steps_per_unit=200):
        assert config.INTEGRATION["steps_per_unit"] == 200
        assert config.INTEGRATION["newton_max_iters"] == 30
    assert config.INTEGRATION["steps_per_unit"] == 1000
