import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import quad_incomplete_beta
from uav_coexist.special import beta, incomplete_beta, log_gamma

unit_open = st.floats(0.05, 0.95)
# B(0.8, 0.2) by the reflection formula
B_08_02 = math.pi / math.sin(0.2 * math.pi)


def test_oracle_sanity():
    # the oracle itself against values known in closed form
    assert quad_incomplete_beta(1.0, 2.0, 3.0) == pytest.approx(1 / 12, rel=1e-13)
    assert quad_incomplete_beta(0.3, 1.0, 1.0) == pytest.approx(0.3, rel=1e-13)
    assert quad_incomplete_beta(1.0, 0.8, 0.2) == pytest.approx(B_08_02, rel=1e-12)


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (2.0, 0.0), (0.5, 0.5723649429247001)])
def test_log_gamma_values(x, expected):
    assert log_gamma(x) == pytest.approx(expected, abs=1e-13)


def test_log_gamma_accuracy_range():
    for x in np.linspace(0.1, 100, 200):
        assert log_gamma(x) == pytest.approx(math.log(math.gamma(x)), rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_log_gamma_domain(x):
    with pytest.raises(ValueError):
        log_gamma(x)


def test_beta_values():
    assert beta(1, 1) == pytest.approx(1.0, rel=1e-14)
    assert beta(0.8, 0.2) == pytest.approx(B_08_02, rel=1e-13)
    assert beta(2, 3) == pytest.approx(1 / 12, rel=1e-13)


@pytest.mark.parametrize("a, b", [(0.0, 1.0), (1.0, -0.5)])
def test_beta_domain(a, b):
    with pytest.raises(ValueError):
        beta(a, b)


@given(unit_open, unit_open)
def test_beta_symmetric_exactly(a, b):
    assert beta(a, b) == beta(b, a)


@given(unit_open)
def test_reflection_identity(a):
    assert beta(a, 1 - a) * math.sin(math.pi * a) == pytest.approx(math.pi, rel=1e-10)


def test_incomplete_beta_endpoints():
    assert incomplete_beta(0.0, 0.8, 0.2) == 0.0
    assert incomplete_beta(1.0, 0.8, 0.2) == pytest.approx(B_08_02, rel=1e-13)


def test_incomplete_beta_half():
    assert incomplete_beta(0.5, 0.8, 0.2) == pytest.approx(quad_incomplete_beta(0.5, 0.8, 0.2), rel=1e-10)


@settings(max_examples=200)
@given(st.floats(0.0, 1.0), unit_open, unit_open)
def test_incomplete_beta_matches_quadrature(x, a, b):
    ref = quad_incomplete_beta(x, a, b)
    assert incomplete_beta(x, a, b) == pytest.approx(ref, rel=1e-10, abs=1e-300)


@given(unit_open, unit_open)
def test_full_interval_equals_complete(a, b):
    assert incomplete_beta(1.0, a, b) == pytest.approx(beta(a, b), rel=1e-10)
    assert incomplete_beta(1.0 - 1e-15, a, b) <= beta(a, b) * (1 + 1e-10)


@given(unit_open, unit_open)
def test_monotone_in_x(a, b):
    xs = np.linspace(0, 1, 41)
    vals = [incomplete_beta(x, a, b) for x in xs]
    assert all(v2 >= v1 for v1, v2 in zip(vals, vals[1:]))


def test_outside_unit_range_shape_parameters():
    # a, b > 1 are legal as well
    assert incomplete_beta(0.4, 2.5, 3.5) == pytest.approx(quad_incomplete_beta(0.4, 2.5, 3.5), rel=1e-10)


@pytest.mark.parametrize("args", [(-0.1, 0.5, 0.5), (1.1, 0.5, 0.5), (0.5, 0.0, 0.5), (0.5, 0.5, -1.0)])
def test_incomplete_beta_domain(args):
    with pytest.raises(ValueError):
        incomplete_beta(*args)
