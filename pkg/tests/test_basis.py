import math

import numpy as np
import pytest

from tpspower import BasisParam, basis_eval

# 0.25 * ln(0.5), evaluated with 40-digit arithmetic and frozen.
PHI2_AT_HALF = -0.17328679513998632


def test_plain_power_branch():
    assert basis_eval(BasisParam(3.0), 2.0) == 8.0
    assert basis_eval(BasisParam(3.0), -2.0) == 8.0


def test_log_branch_zeros():
    tps = BasisParam(2.0)
    assert basis_eval(tps, 1.0) == 0.0   # log 1 = 0
    assert basis_eval(tps, 0.0) == 0.0   # limit convention at the origin
    assert basis_eval(BasisParam(0.5), 0.0) == 0.0


def test_log_branch_value():
    assert basis_eval(BasisParam(2.0), 0.5) == pytest.approx(PHI2_AT_HALF, abs=1e-15)


def test_array_matches_scalar():
    b = BasisParam(10.0 / 3.0)
    xs = np.array([-1.5, -0.25, 0.0, 0.3, 2.0])
    vals = basis_eval(b, xs)
    assert vals.shape == xs.shape
    for x, v in zip(xs, vals):
        assert v == basis_eval(b, float(x))


@pytest.mark.parametrize("gamma", [0.0, -1.0, -0.5, float("nan"), float("inf")])
def test_invalid_exponent_rejected(gamma):
    with pytest.raises(ValueError):
        BasisParam(gamma)


@pytest.mark.parametrize(
    "gamma,order_m,even",
    [
        (2.0, 1, True),
        (4.0, 2, True),
        (3.0, 1, False),
        (1.0 / 3.0, 0, False),
        (1.0, 0, False),
        (2.5, 1, False),
        (10.0 / 3.0, 1, False),
        (11.0 / 3.0, 1, False),
    ],
)
def test_order_and_branch_flags(gamma, order_m, even):
    b = BasisParam(gamma)
    assert b.order_m == order_m
    assert b.is_even_integer is even
    assert b.order_m == int(math.floor(b.gamma / 2.0))


def test_symmetry_in_argument():
    rng = np.random.default_rng(7)
    xs = rng.uniform(-2.0, 2.0, size=50)
    for gamma in (0.5, 1.0, 2.0, 8.0 / 3.0, 3.0):
        b = BasisParam(gamma)
        assert np.array_equal(basis_eval(b, xs), basis_eval(b, -xs))
