"""Tests for the three-interval inequality."""

import numpy as np
import pytest

from contactinstanton import decay, utils


def test_zero_sequence():
    result = decay.three_interval_bound(np.zeros(6), 0.3)
    assert result.holds
    np.testing.assert_array_equal(result.bound, 0.0)


def test_worked_example():
    result = decay.three_interval_bound([1.0, 0.3, 0.1, 0.02], 0.4)
    assert result.holds
    assert result.xi == pytest.approx(2.0)
    assert result.bound[1] == pytest.approx(0.505)
    assert np.all(result.bound >= np.array([1.0, 0.3, 0.1, 0.02]) - 1e-15)


@pytest.mark.parametrize("rate", [0.2, 0.7, 1.5])
def test_exponential_equality_case(rate):
    gamma = decay.three_interval_gamma(rate)
    k = np.arange(11)
    xs = np.exp(-rate * k)
    result = decay.three_interval_bound(xs, gamma)
    assert result.holds
    assert result.xi == pytest.approx(np.exp(rate))
    np.testing.assert_allclose(result.bound, xs + xs[-1] * np.exp(-rate * (10 - k)))


def test_violations_are_reported():
    result = decay.three_interval_bound([1.0, 1.0, 1.0, 0.1, 0.01], 0.4)
    assert not result.holds
    assert result.violations == [1, 2]
    assert result.bound is None


@pytest.mark.parametrize("gamma", [0.0, 0.5, -0.1, 0.7])
def test_gamma_out_of_range(gamma):
    with pytest.raises(ValueError):
        decay.three_interval_bound([1.0, 0.1, 0.01], gamma)


def test_negative_sequence():
    with pytest.raises(ValueError):
        decay.three_interval_bound([1.0, -0.1, 0.01], 0.3)


def _repaired(xs, gamma, sweeps):
    """Lower interior values until the hypothesis holds everywhere."""
    for _ in range(sweeps):
        xs[:, 1:-1] = np.minimum(xs[:, 1:-1], gamma * (xs[:, :-2] + xs[:, 2:]))
    return xs


def test_bound_on_random_instances():
    """The conclusion holds on ten thousand sequences satisfying the hypothesis."""
    rng = utils.named_generator(7, "three-interval")
    count, length = 10000, 9
    gamma = rng.uniform(0.05, 0.45, size=(count, 1))
    xs = _repaired(rng.exponential(size=(count, length)), gamma, sweeps=500)
    checked = 0
    for row, g in zip(xs, gamma[:, 0]):
        result = decay.three_interval_bound(row, g)
        if not result.holds:
            continue
        checked += 1
        assert np.all(row <= result.bound + 1e-12)
    assert checked > 0.99 * count
