# -*- coding: utf-8 -*-
"""
Created the 18/10/2026

Builders shared by the tests: small GTFS feeds, chain and grid networks.
"""
import json
from pathlib import Path
from typing import Dict, List, Sequence

import pandas as pd
import pytest

from transit_modeshift.network import Edge, NetworkGraph, Zone

CALENDAR_COLUMNS = ['service_id', 'monday', 'tuesday', 'wednesday', 'thursday', 'friday', 'saturday', 'sunday',
                    'start_date', 'end_date']


def write_table(directory: Path, name: str, rows: Sequence[Sequence], columns: List[str]):
    directory.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(list(rows), columns=columns).to_csv(directory.joinpath(f'{name}.txt'), index=False,
                                                     lineterminator='\n')


def write_feed(directory: Path, stops=None, routes=None, trips=None, stop_times=None, calendar=None,
               calendar_dates=None) -> Path:
    """ Feed of one weekday service WKD (2024) unless overridden"""
    stops = stops if stops is not None else [('S1', 'First', 35.0, -80.0), ('S2', 'Second', 35.01, -80.0),
                                             ('S3', 'Third', 35.02, -80.0)]
    routes = routes if routes is not None else [('R1', '7', 3)]
    trips = trips if trips is not None else [('R1', 'WKD', 'T1'), ('R1', 'WKD', 'T2')]
    stop_times = stop_times if stop_times is not None else [
        ('T1', '06:00:00', '06:00:00', 'S1', 1), ('T1', '06:05:00', '06:05:00', 'S2', 2),
        ('T1', '06:10:00', '06:10:00', 'S3', 3),
        ('T2', '06:30:00', '06:30:00', 'S1', 1), ('T2', '06:35:00', '06:35:00', 'S2', 2),
        ('T2', '06:40:00', '06:40:00', 'S3', 3)]
    calendar = calendar if calendar is not None else [('WKD', 1, 1, 1, 1, 1, 0, 0, '20240101', '20241231')]
    write_table(directory, 'stops', stops, ['stop_id', 'stop_name', 'stop_lat', 'stop_lon'])
    write_table(directory, 'routes', routes, ['route_id', 'route_short_name', 'route_type'])
    write_table(directory, 'trips', trips, ['route_id', 'service_id', 'trip_id'])
    write_table(directory, 'stop_times', stop_times,
                ['trip_id', 'arrival_time', 'departure_time', 'stop_id', 'stop_sequence'])
    write_table(directory, 'calendar', calendar, CALENDAR_COLUMNS)
    if calendar_dates is not None:
        write_table(directory, 'calendar_dates', calendar_dates, ['service_id', 'date', 'exception_type'])
    return directory


def chain_graph(lengths: Sequence[float], speeds: Sequence[float] = None, capacity: float = 1800.,
                zones: Dict[str, Sequence[str]] = None) -> NetworkGraph:
    """ Edges c0 -> c1 -> ... joined head to tail"""
    speeds = speeds if speeds is not None else [10.] * len(lengths)
    edges = tuple(Edge(f'c{ind}', f'n{ind}', f'n{ind + 1}', float(length), float(speed), capacity=capacity)
                  for ind, (length, speed) in enumerate(zip(lengths, speeds)))
    nodes = tuple(f'n{ind}' for ind in range(len(lengths) + 1))
    zones = tuple(Zone(zone_id, tuple(edge_ids)) for zone_id, edge_ids in (zones or {}).items())
    return NetworkGraph(nodes, edges, zones)


def network_document() -> dict:
    """ Square a-b-c-d with both diagonals a->c (slow) and two zones"""
    return dict(
        nodes=[dict(id=node) for node in 'abcd'],
        edges=[{'id': 'ab', 'from': 'a', 'to': 'b', 'length_m': 100., 'free_speed_mps': 10., 'lanes': 1},
               {'id': 'bc', 'from': 'b', 'to': 'c', 'length_m': 100., 'free_speed_mps': 10., 'lanes': 1},
               {'id': 'cd', 'from': 'c', 'to': 'd', 'length_m': 100., 'free_speed_mps': 10., 'lanes': 1},
               {'id': 'da', 'from': 'd', 'to': 'a', 'length_m': 100., 'free_speed_mps': 10., 'lanes': 1},
               {'id': 'ac', 'from': 'a', 'to': 'c', 'length_m': 300., 'free_speed_mps': 10., 'lanes': 2,
                'capacity_vph': 2500.}],
        zones=[dict(id='Z1', edges=['ab', 'da']), dict(id='Z2', edges=['cd'])])


@pytest.fixture
def feed_dir(tmp_path) -> Path:
    return write_feed(tmp_path.joinpath('gtfs'))


@pytest.fixture
def square_graph() -> NetworkGraph:
    from transit_modeshift.network import network_from_dict
    return network_from_dict(network_document())


def edit_study(config_file: Path, **changes) -> Path:
    """ Rewrite keys of a study config.json in place"""
    document = json.loads(config_file.read_text(encoding='utf-8'))
    document.update(changes)
    config_file.write_text(json.dumps(document, indent=1), encoding='utf-8')
    return config_file


@pytest.fixture(scope='session')
def bundle_run(tmp_path_factory):
    """ run(name, seed=None, workers=None) -> output directory of a run-pipeline on a fresh bundle, cached"""
    from transit_modeshift.bundles import make_bundle
    from transit_modeshift.cli import main

    runs: Dict[tuple, Path] = {}

    def run(name: str, seed: int = None, workers: int = None) -> Path:
        key = (name, seed, workers)
        if key not in runs:
            directory = tmp_path_factory.mktemp(name)
            config_file = make_bundle(name, directory)
            if workers is not None:
                edit_study(config_file, workers=workers)
            argv = ['run-pipeline', '--config', str(config_file), '--out', str(directory.joinpath('run'))]
            if seed is not None:
                argv += ['--seed', str(seed)]
            assert main(argv) == 0
            runs[key] = directory.joinpath('run')
        return runs[key]

    return run
