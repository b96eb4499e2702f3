"""Tests for the shared numerical helpers."""

import numpy as np
import pytest

from contactinstanton import utils


def test_named_streams_differ():
    first = utils.named_generator(0, "samples").standard_normal(4)
    second = utils.named_generator(0, "guesses").standard_normal(4)
    assert not np.allclose(first, second)


def test_named_stream_is_reproducible():
    np.testing.assert_array_equal(
        utils.named_generator(7, "samples").standard_normal(8),
        utils.named_generator(7, "samples").standard_normal(8),
    )


def test_negative_seed():
    with pytest.raises(ValueError):
        utils.named_generator(-1)


@pytest.mark.parametrize("order", [1.0, 2.0, 4.0])
def test_convergence_order(order):
    steps = np.array([1 / 16, 1 / 32, 1 / 64])
    assert utils.convergence_order(steps, 3.0 * steps ** order) == pytest.approx(order)


def test_convergence_order_needs_positive_residuals():
    assert np.isnan(utils.convergence_order([0.1, 0.05], [0.0, 1e-3]))


def test_exponential_tail_fit():
    x = np.arange(6.0)
    rate, r2, log_amplitude = utils.exponential_tail_fit(x, 2.0 * np.exp(-0.7 * x))
    assert rate == pytest.approx(0.7)
    assert r2 == pytest.approx(1.0)
    assert log_amplitude == pytest.approx(np.log(2.0))


@pytest.mark.parametrize("x, values", [([1.0], [1.0]), ([0.0, 1.0], [1.0, 0.0])])
def test_exponential_tail_fit_invalid(x, values):
    with pytest.raises(ValueError):
        utils.exponential_tail_fit(x, values)
