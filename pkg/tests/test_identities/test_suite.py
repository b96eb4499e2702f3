"""Tests for the concurrent identity suite."""

import numpy as np
import pytest

from contactinstanton import cylfield, identities, instanton


def decaying_circle(tau, t):
    return 0.3 * np.exp(-2 * np.pi * (tau + 1j * t))


@pytest.fixture(scope="module")
def oracles():
    return [
        instanton.oracle_flat(cylfield.CylinderGrid(L=1.0, Ntau=Nt + 1, Nt=Nt), decaying_circle)
        for Nt in (32, 16)
    ]


def test_selected_checks(oracles):
    checks = {
        "inner_star": identities.inner_star_residual,
        "fundamental_equation": identities.fundamental_equation_residual,
    }
    reports = identities.run_suite(oracles, checks=checks, max_workers=2)
    assert [report.name for report in reports] == ["inner_star", "fundamental_equation"]
    assert all(report.resolutions == [16, 32] for report in reports)
    assert all(report.passed for report in reports)


def test_default_suite(oracles):
    reports = identities.run_suite(oracles)
    assert [report.name for report in reports] == list(identities.SUITE)


def test_csv(oracles, tmp_path):
    reports = identities.run_suite(
        oracles, checks={"inner_star": identities.inner_star_residual}
    )
    path = tmp_path / "suite.csv"
    identities.write_suite_csv(path, reports)
    lines = path.read_text().splitlines()
    assert lines[0] == "identity,Nt=16,Nt=32,order,pass"
    assert len(lines) == 2
    assert lines[1].startswith("inner_star,")
    assert lines[1].endswith(",1")


def test_empty_field_list():
    with pytest.raises(ValueError):
        identities.run_suite([])
