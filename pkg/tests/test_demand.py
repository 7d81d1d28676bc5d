# -*- coding: utf-8 -*-
"""
Created the 18/10/2026
"""
import math

import numpy as np
import pytest

from transit_modeshift.errors import (DegenerateDemandError, UnknownProfileError, ReferentialIntegrityError,
                                      SimConfigurationError)
from transit_modeshift.demand import (ODMatrix, calibrate_total, apportion_largest_remainder, round_half_up,
                                      load_od_matrix, write_od_matrix, TemporalProfile, builtin_profile,
                                      load_profile, write_profile, resolve_profile, generate_trips, draw_departures,
                                      write_trip_table, load_trip_table, StopPairAssigner, assign_stop_pairs)
from transit_modeshift.demand.profiles import N_BINS, BIN_S
from transit_modeshift.ingest import BusRunTemplate, StopEvent
from transit_modeshift.network import Edge, NetworkGraph, Zone

from conftest import chain_graph


def _zoned_graph(n_zones=4, edges_per_zone=3) -> NetworkGraph:
    n_edges = n_zones * edges_per_zone
    graph = chain_graph([100.] * n_edges)
    zones = tuple(Zone(f'Z{zone}', tuple(f'c{zone * edges_per_zone + ind}' for ind in range(edges_per_zone)))
                  for zone in range(n_zones))
    return NetworkGraph(graph.nodes, graph.edges, zones)


def _single_bin_profile(index: int) -> TemporalProfile:
    weights = np.zeros(N_BINS)
    weights[index] = 1.
    return TemporalProfile('single', weights)


def test_calibrate_scales_uniformly():
    od = ODMatrix(('A', 'B'), [[10., 40.], [30., 20.]])
    calibrated = calibrate_total(od, 36370.)
    np.testing.assert_allclose(calibrated.trips, od.trips * 363.7)
    assert calibrated.total == pytest.approx(36370.)


def test_calibrate_identity_and_idempotence():
    od = ODMatrix(('A', 'B', 'C'), np.random.default_rng(1).uniform(0., 50., (3, 3)))
    assert calibrate_total(od, od.total) is od
    once = calibrate_total(od, 7412.)
    assert calibrate_total(once, 7412.) == once
    assert math.fsum(once.trips.ravel().tolist()) == pytest.approx(7412., abs=1e-6)
    np.testing.assert_allclose(once.trips / once.total, od.trips / od.total, rtol=1e-12)


def test_calibrate_degenerate():
    zero = ODMatrix(('A', 'B'), np.zeros((2, 2)))
    with pytest.raises(DegenerateDemandError):
        calibrate_total(zero, 10.)
    assert calibrate_total(zero, 0.) is zero
    with pytest.raises(ValueError):
        calibrate_total(zero, -1.)


def test_od_matrix_invariants():
    with pytest.raises(ValueError):
        ODMatrix(('A', 'B'), [[1., 2., 3.]])
    with pytest.raises(ValueError):
        ODMatrix(('A', 'B'), [[1., -2.], [0., 0.]])
    with pytest.raises(ValueError):
        ODMatrix(('A', 'A'), np.ones((2, 2)))


def test_od_file(tmp_path):
    od = ODMatrix(('Z1', 'Z2'), [[0., 12.5], [3.25, 1.]])
    file = tmp_path.joinpath('od.csv')
    write_od_matrix(od, file)
    assert load_od_matrix(file) == od
    file.write_text('zone,Z1,Z2\nZ1,1,2\nZ3,3,4\n', encoding='utf-8')
    with pytest.raises(ValueError):
        load_od_matrix(file)


def _oracle_apportion(values, total):
    flat = [float(value) for value in np.asarray(values).ravel()]
    counts = [int(math.floor(value)) for value in flat]
    ranked = sorted(range(len(flat)), key=lambda ind: (-(flat[ind] - math.floor(flat[ind])), ind))
    for ind in ranked[:total - sum(counts)]:
        counts[ind] += 1
    return np.array(counts).reshape(np.asarray(values).shape)


def test_round_half_up():
    assert [round_half_up(value) for value in (0.5, 1.5, 2.49, 654.67, 18112.5)] == [1, 2, 2, 655, 18113]


def test_apportionment_matches_oracle():
    rng = np.random.default_rng(3)
    for _ in range(20):
        values = rng.uniform(0., 30., (4, 4))
        total = round_half_up(values.sum())
        counts = apportion_largest_remainder(values, total)
        assert counts.sum() == total
        np.testing.assert_array_equal(counts, _oracle_apportion(values, total))
        assert np.all((counts == np.floor(values)) | (counts == np.floor(values) + 1))


def test_apportionment_ties_go_to_lowest_index():
    np.testing.assert_array_equal(apportion_largest_remainder(np.array([[0.5, 0.5], [0.5, 0.5]]), 2),
                                  [[1, 1], [0, 0]])


def test_zero_matrix_gives_empty_table():
    od = ODMatrix(('Z0', 'Z1'), np.zeros((2, 2)))
    assert len(generate_trips(od, builtin_profile('uniform'), _zoned_graph(2), 'car', 1)) == 0


def test_single_cell_single_bin():
    od = ODMatrix(('Z0', 'Z1'), [[0., 10.], [0., 0.]])
    graph = _zoned_graph(2)
    table = generate_trips(od, _single_bin_profile(30), graph, 'car', 42)
    assert len(table) == 10
    for trip in table:
        assert 30 * BIN_S <= trip.depart < 31 * BIN_S
        assert (trip.origin_zone, trip.dest_zone) == ('Z0', 'Z1')
        assert trip.mode == 'car' and trip.trip_id.startswith('car')
    table.check_zones(graph)


def test_counts_follow_apportionment():
    rng = np.random.default_rng(8)
    values = rng.uniform(0., 1., (4, 4))
    values *= 500.4 / values.sum()
    od = ODMatrix(('Z0', 'Z1', 'Z2', 'Z3'), values)
    expected = _oracle_apportion(values, 500)
    for seed in (0, 1, 12345):
        table = generate_trips(od, builtin_profile('mixed_use'), _zoned_graph(), 'bus_passenger', seed)
        assert len(table) == 500
        counts = np.zeros((4, 4), dtype=int)
        for trip in table:
            counts[int(trip.origin_zone[1:]), int(trip.dest_zone[1:])] += 1
        np.testing.assert_array_equal(counts, expected)


def test_generation_is_deterministic(tmp_path):
    od = ODMatrix(('Z0', 'Z1', 'Z2'), [[5., 20., 3.], [7., 0., 11.], [2., 9., 4.]])
    graph = _zoned_graph(3)
    first = generate_trips(od, builtin_profile('residential_bimodal'), graph, 'car', 99)
    second = generate_trips(od, builtin_profile('residential_bimodal'), graph, 'car', 99)
    assert first == second
    write_trip_table(first, tmp_path.joinpath('a.csv'))
    write_trip_table(second, tmp_path.joinpath('b.csv'))
    assert tmp_path.joinpath('a.csv').read_bytes() == tmp_path.joinpath('b.csv').read_bytes()
    assert generate_trips(od, builtin_profile('residential_bimodal'), graph, 'car', 100) != first
    loaded = load_trip_table(tmp_path.joinpath('a.csv'))
    assert [trip.trip_id for trip in loaded] == [trip.trip_id for trip in first]
    departs = [trip.depart for trip in first]
    assert departs == sorted(departs)


def test_unknown_zone_in_matrix():
    graph = _zoned_graph(2)
    od = ODMatrix(('Z0', 'Z9'), [[1., 1.], [1., 1.]])
    with pytest.raises(ReferentialIntegrityError):
        generate_trips(od, builtin_profile('uniform'), graph, 'car', 0)


def test_departure_histogram_converges():
    profile = builtin_profile('residential_bimodal')
    departs = draw_departures(np.random.default_rng(2024), profile, 400_000)
    histogram = np.bincount((departs // BIN_S).astype(int), minlength=N_BINS) / len(departs)
    assert np.abs(histogram - profile.weights).sum() <= 0.02
    assert departs.min() >= 0. and departs.max() < 86400.


def test_builtin_profiles():
    uniform = builtin_profile('uniform')
    np.testing.assert_allclose(uniform.weights, 1. / 96)
    residential = builtin_profile('residential_bimodal')
    assert residential.weight_at(7.5 * 3600) / residential.weight_at(13 * 3600) >= 3.
    assert residential.weight_at(17 * 3600) / residential.weight_at(13 * 3600) >= 3.
    mixed = builtin_profile('mixed_use')
    plateau = mixed.weights[7 * 4:19 * 4]
    assert plateau.max() / plateau.min() <= 1.5
    for profile in (uniform, residential, mixed):
        assert profile.weights.sum() == pytest.approx(1., abs=1e-9)
    with pytest.raises(UnknownProfileError):
        builtin_profile('weekend')


def test_profile_file(tmp_path):
    file = tmp_path.joinpath('custom.csv')
    write_profile(builtin_profile('residential_bimodal'), file)
    loaded = load_profile(file)
    assert loaded.name == 'custom'
    np.testing.assert_allclose(loaded.weights, builtin_profile('residential_bimodal').weights, rtol=1e-15)
    assert resolve_profile('custom.csv', tmp_path) == loaded
    assert resolve_profile('uniform') == builtin_profile('uniform')
    with pytest.raises(UnknownProfileError):
        resolve_profile('nowhere')
    with pytest.raises(ValueError):
        TemporalProfile('bad', np.full(N_BINS, 0.5))


def _line_graph():
    # c0 -> c1 -> ... -> c5 plus a detour ring back to the start
    graph = chain_graph([100.] * 6)
    back = Edge('back', 'n6', 'n0', 100., 10.)
    return NetworkGraph(graph.nodes, graph.edges + (back,))


def test_stop_pairs():
    graph = _line_graph()
    run = BusRunTemplate('T1', 'R1', 'WKD', (StopEvent('S1', 0, 0), StopEvent('S2', 60, 60),
                                            StopEvent('S3', 120, 120)))
    stop_to_edge = {'S1': 'c1', 'S2': 'c3', 'S3': 'c5'}
    assigner = StopPairAssigner(graph, [run], stop_to_edge)
    pair = assigner.best_pair('c0', 'c4')
    assert (pair.board_stop, pair.alight_stop, pair.route_ids) == ('S1', 'S2', ('R1',))
    assert pair.cost == pytest.approx(10. + 10.)
    assert assigner.best_pair('c2', 'c5').board_stop == 'S2'
    pairs = assign_stop_pairs([], graph, [run], stop_to_edge)
    assert pairs == {}


def test_stop_pairs_without_connection():
    graph = chain_graph([100.] * 4)
    run = BusRunTemplate('T1', 'R1', 'WKD', (StopEvent('S1', 0, 0), StopEvent('S2', 60, 60)))
    assigner = StopPairAssigner(graph, [run], {'S1': 'c1', 'S2': 'c2'})
    assert assigner.best_pair('c3', 'c0') is None


def test_unmapped_stop():
    run = BusRunTemplate('T1', 'R1', 'WKD', (StopEvent('S1', 0, 0), StopEvent('S2', 60, 60)))
    with pytest.raises(SimConfigurationError):
        StopPairAssigner(chain_graph([100.] * 3), [run], {'S1': 'c1'})
