import math

import numpy as np
import pytest

import tpspower as tp
from tpspower import DecaySeries


def synthetic(c, alpha, hs=(1 / 64, 1 / 128, 1 / 256, 1 / 512, 1 / 1024)):
    return DecaySeries(label="synthetic", points=[(h, c * h ** alpha) for h in hs])


def test_exact_power_law_recovered():
    fit = tp.fit_power_law(synthetic(2.0, 1.5))
    assert fit.c == pytest.approx(2.0, rel=1e-12)
    assert fit.alpha_global == pytest.approx(1.5, abs=1e-12)
    assert fit.residual <= 1e-12
    assert all(a == pytest.approx(1.5, abs=1e-10) for _, a in fit.alpha_per_h)


def test_fit_invariant_under_reordering():
    series = synthetic(0.7, 0.5)
    shuffled = DecaySeries(label="shuffled", points=series.points[::-1])
    a, b = tp.fit_power_law(series), tp.fit_power_law(shuffled)
    assert a.c == pytest.approx(b.c, rel=1e-13)
    assert a.alpha_global == pytest.approx(b.alpha_global, abs=1e-13)


def test_reference_column_fit():
    # Frozen reference cells for one decay-table column (exponent 1): the
    # free fit must reproduce the reference constant and flat exponents.
    hs = [1 / 128, 1 / 256, 1 / 512, 1 / 1024, 1 / 2048]
    ys = [6.342e-2, 4.485e-2, 3.171e-2, 2.242e-2, 1.586e-2]
    fit = tp.fit_power_law(DecaySeries(label="mu=1", points=list(zip(hs, ys))))
    assert fit.c == pytest.approx(0.7175, abs=1e-3)
    assert all(a == pytest.approx(0.500, abs=1e-3) for _, a in fit.alpha_per_h)


def test_per_h_exponent_with_external_prefactor():
    series = DecaySeries(label="row", points=[(1 / 128, 0.4774)])
    (h, alpha), = tp.per_h_exponents(series, c=1.072)
    assert h == 1 / 128
    assert alpha == pytest.approx(0.16672, abs=1e-4)
    assert round(alpha, 3) == 0.167


def test_fit_prefactor_pinned_exponent():
    series = synthetic(0.05, 1.5)
    assert tp.fit_prefactor(series, 1.5) == pytest.approx(0.05, rel=1e-12)
    # with the wrong exponent pinned, the prefactor absorbs the geometric mean
    assert tp.fit_prefactor(series, 2.0) != pytest.approx(0.05, rel=1e-3)


def test_doubling_exponents_exact_law():
    out = tp.per_h_exponents_doubling(synthetic(3.0, 0.75))
    assert len(out) == 4
    assert all(a == pytest.approx(0.75, abs=1e-10) for _, a in out)
    assert [h for h, _ in out] == [1 / 128, 1 / 256, 1 / 512, 1 / 1024]


def test_doubling_exponents_reference_rows():
    pair = DecaySeries(label="pair", points=[(1 / 128, 4.774e-1), (1 / 256, 4.253e-1)])
    (_, alpha), = tp.per_h_exponents_doubling(pair)
    assert alpha == pytest.approx(0.16672, abs=5e-4)

    # successive-ratio value differs from the reference per-row 1.500/1.503:
    # those columns follow the fitted-prefactor convention instead
    pair = DecaySeries(label="pair", points=[(1 / 256, 1.196e-4), (1 / 512, 4.296e-5)])
    (_, alpha), = tp.per_h_exponents_doubling(pair)
    assert alpha == pytest.approx(1.4772, abs=1e-3)
    assert abs(alpha - 1.500) > 0.02


def test_doubling_requires_halving_spacing():
    series = DecaySeries(label="bad", points=[(0.1, 1.0), (0.07, 0.5)])
    with pytest.raises(ValueError):
        tp.per_h_exponents_doubling(series)


def test_series_validation():
    with pytest.raises(ValueError):
        DecaySeries(label="dup", points=[(0.1, 1.0), (0.1, 0.5)])
    with pytest.raises(ValueError):
        DecaySeries(label="neg-h", points=[(-0.1, 1.0), (0.05, 0.5)])
    with pytest.raises(ValueError):
        DecaySeries(label="neg-y", points=[(0.1, 1.0), (0.05, -0.5)])
    with pytest.raises(ValueError):
        tp.fit_power_law(DecaySeries(label="single", points=[(0.1, 1.0)]))


def test_residual_measures_worst_log_deviation():
    series = DecaySeries(
        label="noisy", points=[(1 / 64, 1.0), (1 / 128, 0.52), (1 / 256, 0.25)]
    )
    fit = tp.fit_power_law(series)
    devs = [
        abs(math.log(y) - math.log(fit.c) - fit.alpha_global * math.log(h))
        for h, y in series.points
    ]
    assert fit.residual == pytest.approx(max(devs), rel=1e-12)
