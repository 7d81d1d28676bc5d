# -*- coding: utf-8 -*-
"""
Created the 18/10/2026
"""
import numpy as np
import pandas as pd
import pytest

from transit_modeshift.errors import SimConfigurationError, EmptySeriesError, IncompatibleSeriesError
from transit_modeshift.models import (EmissionCoefficients, default_coefficients, integrate, smooth, aggregate,
                                      series_from_values, compare)
from transit_modeshift.models.emissions import SEGMENT_COLUMNS

CONSTANT = {'car': EmissionCoefficients(1., 0., 0.)}
QUADRATIC = {'car': EmissionCoefficients(0.5, 0.1, 0.01)}


def _segments(rows):
    return pd.DataFrame(rows, columns=SEGMENT_COLUMNS)


def _random_segments(seed: int, n: int = 40) -> pd.DataFrame:
    rng = np.random.default_rng(seed)
    enter = rng.uniform(0., 3000., n)
    duration = rng.uniform(1., 400., n)
    return _segments([(f'v{ind % 7}', 'car' if ind % 3 else 'bus', f'e{ind % 5}', enter[ind],
                       enter[ind] + duration[ind],
                       float(rng.uniform(1., 20.))) for ind in range(n)])


def test_constant_rate():
    ledger = integrate(_segments([('v1', 'car', 'e1', 0., 100., 10.)]), CONSTANT, 60.)
    assert ledger.total == pytest.approx(100.)
    assert list(ledger.frame['bin_start_s']) == [0., 60.]
    assert list(ledger.frame['grams']) == pytest.approx([60., 40.])


def test_closed_form():
    ledger = integrate(_segments([('v1', 'car', 'e1', 0., 60., 10.)]), QUADRATIC, 60.)
    assert len(ledger) == 1
    assert ledger.total == pytest.approx(150.)


def test_three_bin_split_against_fine_integration():
    enter, exit_, speed = 30.5, 170.25, 8.
    ledger = integrate(_segments([('v1', 'car', 'e1', enter, exit_, speed)]), QUADRATIC, 60.)
    assert list(ledger.frame['bin_start_s']) == [0., 60., 120.]
    rate = QUADRATIC['car'].rate(speed)
    # 1 s steps, with the fractional first and last seconds weighted by their overlap
    edges = np.arange(0., 181., 1.)
    overlap = np.clip(np.minimum(edges[1:], exit_) - np.maximum(edges[:-1], enter), 0., None)
    oracle = np.bincount((edges[:-1] // 60).astype(int), weights=overlap * rate)
    np.testing.assert_allclose(ledger.frame['grams'].to_numpy(), oracle, rtol=1e-6)


def test_exact_bin_boundaries():
    ledger = integrate(_segments([('v1', 'car', 'e1', 60., 120., 5.)]), CONSTANT, 60.)
    assert list(ledger.frame['bin_start_s']) == [60.]
    assert ledger.total == pytest.approx(60.)


def test_conservation_against_closed_form():
    segments = _random_segments(1)
    coefficients = default_coefficients()
    ledger = integrate(segments, coefficients, 60.)
    expected = sum(coefficients[row.vehicle_class].rate(row.mean_speed_mps) * (row.exit_s - row.enter_s)
                   for row in segments.itertuples(index=False))
    assert ledger.total == pytest.approx(expected, rel=1e-9)
    per_vehicle = ledger.per_vehicle()
    assert per_vehicle.sum() == pytest.approx(ledger.total, rel=1e-12)
    assert set(ledger.per_class().index) == {'car', 'bus'}
    assert (ledger.frame['grams'] >= 0).all()
    assert np.all(ledger.frame['bin_start_s'].to_numpy() % 60. == 0.)


def test_coefficient_linearity():
    segments = _random_segments(2)
    coefficients = default_coefficients()
    scaled = {vclass: coeffs.scaled(2.5) for vclass, coeffs in coefficients.items()}
    base = integrate(segments, coefficients, 60.)
    variant = integrate(segments, scaled, 60.)
    np.testing.assert_allclose(variant.frame['grams'].to_numpy(), 2.5 * base.frame['grams'].to_numpy(), rtol=1e-12)


def test_time_shift_equivariance():
    segments = _random_segments(3)
    shifted = segments.copy()
    shifted['enter_s'] += 600.
    shifted['exit_s'] += 600.
    base = aggregate(integrate(segments, default_coefficients(), 60.), smoothing_window=1)
    moved = aggregate(integrate(shifted, default_coefficients(), 60.), smoothing_window=1)
    assert moved.start_s == base.start_s + 600.
    np.testing.assert_allclose(moved.values, base.values, rtol=1e-9)


def test_missing_class():
    with pytest.raises(SimConfigurationError):
        integrate(_segments([('b1', 'bus', 'e1', 0., 10., 5.)]), CONSTANT, 60.)


def test_empty_segments():
    ledger = integrate(_segments([]), CONSTANT, 60.)
    assert len(ledger) == 0
    with pytest.raises(EmptySeriesError):
        aggregate(ledger)


def test_rate_validation():
    with pytest.raises(ValueError):
        EmissionCoefficients(-0.1, 0., 0.)
    with pytest.raises(ValueError):
        EmissionCoefficients(1., -0.2, 0.001)
    EmissionCoefficients(0., 0., 0.)


def test_rate_validation_vertex_inside_range():
    with pytest.raises(ValueError):
        EmissionCoefficients(1., -0.4, 0.01)
    assert EmissionCoefficients(1., -0.2, 0.01).rate(10.) == pytest.approx(0.)


def test_default_car_rate():
    car = default_coefficients()['car']
    assert car.grams_per_km(13.9) == pytest.approx((0.6 + 0.12 * 13.9 + 0.003 * 13.9 ** 2) / 13.9 * 1000.)
    assert EmissionCoefficients.from_sequence(car.to_list()) == car


def test_single_entry_series():
    ledger = integrate(_segments([('v1', 'car', 'e1', 600., 630., 10.)]), CONSTANT, 60.)
    series = aggregate(ledger, smoothing_window=1, horizon=(0., 1200.))
    assert len(series.values) == 20
    assert np.count_nonzero(series.values) == 1
    assert series.peak_time == 600.
    assert series.total == pytest.approx(30.)
    smoothed = aggregate(ledger, smoothing_window=5, horizon=(0., 1200.))
    assert smoothed.peak_time == 480.
    assert smoothed.peak_value == pytest.approx(6.)


def test_peak_tie_goes_to_earlier_bin():
    values = np.zeros(30)
    values[5] = values[20] = 7.
    series = series_from_values(values, 60., 0., 1)
    assert series.peak_time == 5 * 60.
    assert series.peak_value == 7.
    assert series_from_values(values, 60., 0., 5).peak_time == 3 * 60.


def test_bimodal_peak_against_scan():
    minutes = np.arange(16 * 60)
    values = 50. * np.exp(-0.5 * ((minutes - 150) / 40.) ** 2) \
        + 65. * np.exp(-0.5 * ((minutes - 720) / 55.) ** 2)
    values += np.random.default_rng(4).uniform(0., 3., len(values))
    series = series_from_values(values, 60., 5 * 3600., 5)
    scanned = [np.mean(values[max(0, ind - 2):ind + 3]) for ind in range(len(values))]
    best = max(range(len(scanned)), key=lambda ind: (scanned[ind], -ind))
    assert series.peak_time == 5 * 3600. + 60. * best
    assert series.peak_value == pytest.approx(scanned[best])
    np.testing.assert_allclose(series.smoothed, scanned)


def test_smoothing_keeps_total_and_needs_odd_window():
    values = np.random.default_rng(6).uniform(0., 10., 100)
    for window in (1, 3, 5, 9):
        assert series_from_values(values, 60., 0., window).total == pytest.approx(values.sum(), rel=1e-12)
    # an edge spike is spread over fewer bins, the total still comes from the raw bins
    edge = series_from_values(np.array([9., 0., 0., 0., 0.]), 60., 0., 3)
    assert list(edge.smoothed) == pytest.approx([4.5, 3., 0., 0., 0.])
    assert edge.total == 9.
    with pytest.raises(ValueError):
        smooth(values, 4)


def test_horizon_must_cover_ledger():
    ledger = integrate(_segments([('v1', 'car', 'e1', 600., 630., 10.)]), CONSTANT, 60.)
    with pytest.raises(IncompatibleSeriesError):
        aggregate(ledger, horizon=(0., 300.))


def test_compare():
    values = np.random.default_rng(7).uniform(1., 10., 60)
    base = series_from_values(values, 60., 0., 5)
    same = compare(base, series_from_values(values.copy(), 60., 0., 5))
    assert same.percent_reduction == 0.
    assert same.peak_shift_s == 0.
    half = compare(base, series_from_values(0.5 * values, 60., 0., 5))
    assert half.percent_reduction == pytest.approx(50.)
    assert half.total_variant == pytest.approx(0.5 * base.total)
    with pytest.raises(IncompatibleSeriesError):
        compare(base, series_from_values(values, 60., 60., 5))
    with pytest.raises(IncompatibleSeriesError):
        compare(base, series_from_values(values[:-1], 60., 0., 5))
    with pytest.raises(EmptySeriesError):
        compare(series_from_values(np.zeros(60), 60., 0., 5), base)
    assert set(half.to_dict()) == {'total_base', 'total_variant', 'percent_reduction', 'peak_time_base',
                                   'peak_time_variant', 'peak_shift_s'}


def test_free_flow_proportionality():
    # identical free-flow trips: removing a share of them removes the same share of grams
    rows = [(f'car{ind:03d}', 'car', 'e1', 60. * (ind % 50), 60. * (ind % 50) + 45., 12.) for ind in range(200)]
    base = aggregate(integrate(_segments(rows), default_coefficients(), 60.), horizon=(0., 3600.))
    kept = aggregate(integrate(_segments(rows[:150]), default_coefficients(), 60.), horizon=(0., 3600.))
    assert compare(base, kept).percent_reduction == pytest.approx(25., abs=1e-6)
