# -*- coding: utf-8 -*-
"""
Created the 18/10/2026

Synthetic study bundles: a square street grid with arterials, bus lines running along the arterials, zones of local
street edges, gravity OD matrices calibrated to the study totals and the study configuration tying them together.

* mixeduse-grid: 23 x 23 nodes (2024 edges), 16 zones, 9 route directions of 115 runs, flat mixed-use profile
* residential-grid: 10 x 10 nodes, 9 zones, lines 10A, 10C and 10G (173 runs), morning and evening peaks
"""
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np
import pandas as pd

from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift.demand import ODMatrix, write_od_matrix
from transit_modeshift.network import Edge, NetworkGraph, Zone, path_cost, write_network
from transit_modeshift.exporters import write_json
from transit_modeshift.utils import seconds_to_clock

logger = set_logger(get_module_name(__file__))

WINDOW = (5 * 3600, 21 * 3600)
ORIGIN_LAT, ORIGIN_LON = 35.2, -80.85
METERS_PER_DEGREE = 111320.
STOP_SPACING = 3


@dataclass(frozen=True)
class LineDirection:
    route_id: str
    short_name: str
    axis: str  # 'row' or 'col'
    index: int
    forward: bool
    runs: int


@dataclass(frozen=True)
class BundleSpec:
    name: str
    grid_size: int
    block_m: float
    arterials: Tuple[int, ...]
    zones_per_side: int
    edges_per_zone: int
    lines: Tuple[LineDirection, ...]
    car_trips: float
    bus_person_trips: float
    profile: str
    service_date: str = '2024-03-12'
    seed: int = 20240312


def _both_ways(short_name: str, axis: str, index: int, runs: Tuple[int, int]) -> Tuple[LineDirection, ...]:
    return (LineDirection(f'{short_name}-0', short_name, axis, index, True, runs[0]),
            LineDirection(f'{short_name}-1', short_name, axis, index, False, runs[1]))


BUNDLES: Dict[str, BundleSpec] = {
    'mixeduse-grid': BundleSpec(
        name='mixeduse-grid', grid_size=23, block_m=200., arterials=(4, 11, 18), zones_per_side=4,
        edges_per_zone=6,
        lines=_both_ways('1', 'row', 4, (115, 115)) + _both_ways('2', 'row', 11, (115, 115)) +
        _both_ways('3', 'row', 18, (115, 115)) +
        (LineDirection('4-0', '4', 'col', 4, True, 115), LineDirection('5-1', '5', 'col', 11, False, 115),
         LineDirection('6-0', '6', 'col', 18, True, 115)),
        car_trips=35335., bus_person_trips=6585., profile='mixed_use'),
    'residential-grid': BundleSpec(
        name='residential-grid', grid_size=10, block_m=200., arterials=(3, 6), zones_per_side=3,
        edges_per_zone=4,
        lines=_both_ways('10A', 'row', 3, (29, 29)) + _both_ways('10C', 'col', 6, (29, 29)) +
        _both_ways('10G', 'col', 3, (29, 28)),
        car_trips=7239., bus_person_trips=982., profile='residential_bimodal'),
}


def bundle_names() -> List[str]:
    return sorted(BUNDLES)


def _node(row: int, col: int) -> str:
    return f'n{row:02d}_{col:02d}'


def _edge(row: int, col: int, row2: int, col2: int) -> str:
    return f'e{row:02d}{col:02d}_{row2:02d}{col2:02d}'


def grid_network(spec: BundleSpec) -> NetworkGraph:
    """ Two-way square grid. Arterial rows and columns are faster two-lane streets; lengths vary by a few meters
    so that equal-cost detours stay rare"""
    size = spec.grid_size
    edges, zones = [], []
    for row in range(size):
        for col in range(size):
            for drow, dcol in ((0, 1), (1, 0), (0, -1), (-1, 0)):
                row2, col2 = row + drow, col + dcol
                if not (0 <= row2 < size and 0 <= col2 < size):
                    continue
                arterial = (drow == 0 and row in spec.arterials) or (dcol == 0 and col in spec.arterials)
                jitter = (3 * row + 5 * col + 7 * (drow + 1) + 2 * (dcol + 1)) % 11 - 5
                edges.append(Edge(_edge(row, col, row2, col2), _node(row, col), _node(row2, col2),
                                  length=spec.block_m + jitter, free_speed=13.9 if arterial else 11.1,
                                  lanes=2 if arterial else 1))
    bounds = [size * ind // spec.zones_per_side for ind in range(spec.zones_per_side + 1)]
    for zrow in range(spec.zones_per_side):
        for zcol in range(spec.zones_per_side):
            rows = range(bounds[zrow], bounds[zrow + 1])
            cols = range(bounds[zcol], bounds[zcol + 1])
            candidates = sorted(edge.edge_id for edge in edges if edge.lanes == 1
                                and _inside(edge.from_node, rows, cols) and _inside(edge.to_node, rows, cols))
            picked = [candidates[k * len(candidates) // spec.edges_per_zone] for k in range(spec.edges_per_zone)]
            zones.append(Zone(f'Z{zrow}{zcol}', tuple(picked)))
    nodes = tuple(_node(row, col) for row in range(size) for col in range(size))
    return NetworkGraph(nodes, tuple(edges), tuple(zones))


def _inside(node: str, rows: range, cols: range) -> bool:
    row, col = (int(part) for part in node[1:].split('_'))
    return row in rows and col in cols


def line_path(spec: BundleSpec, line: LineDirection) -> List[str]:
    cells = list(range(spec.grid_size)) if line.forward else list(range(spec.grid_size - 1, -1, -1))
    if line.axis == 'row':
        return [_edge(line.index, a, line.index, b) for a, b in zip(cells[:-1], cells[1:])]
    return [_edge(a, line.index, b, line.index) for a, b in zip(cells[:-1], cells[1:])]


def _stop_id(edge_id: str) -> str:
    return f'stp_{edge_id}'


def write_gtfs(spec: BundleSpec, graph: NetworkGraph, directory: Path) -> Dict[str, str]:
    """ Write the feed, returns the stop to edge mapping"""
    directory.mkdir(parents=True, exist_ok=True)
    stop_to_edge: Dict[str, str] = {}
    trips, stop_times = [], []
    for line in spec.lines:
        path = line_path(spec, line)
        positions = list(range(0, len(path), STOP_SPACING))
        if positions[-1] != len(path) - 1:
            positions.append(len(path) - 1)
        offsets = [0]
        for first, second in zip(positions[:-1], positions[1:]):
            offsets.append(offsets[-1] + int(math.ceil(1.2 * path_cost(graph, path[first:second + 1]))) + 20)
        for position in positions:
            stop_to_edge[_stop_id(path[position])] = path[position]
        for run in range(line.runs):
            trip_id = f'{line.route_id}-{run:03d}'
            start = WINDOW[0] + run * (WINDOW[1] - WINDOW[0]) // line.runs
            trips.append((line.route_id, 'WKD', trip_id, int(not line.forward)))
            for sequence, (position, offset) in enumerate(zip(positions, offsets), start=1):
                clock = seconds_to_clock(start + offset)
                stop_times.append((trip_id, clock, clock, _stop_id(path[position]), sequence))

    stops = []
    for stop_id, edge_id in sorted(stop_to_edge.items()):
        row, col = (int(part) for part in graph.edge(edge_id).from_node[1:].split('_'))
        stops.append((stop_id, f'Stop {edge_id}', ORIGIN_LAT - row * spec.block_m / METERS_PER_DEGREE,
                      ORIGIN_LON + col * spec.block_m / (METERS_PER_DEGREE * math.cos(math.radians(ORIGIN_LAT)))))
    short_names = {line.route_id: line.short_name for line in spec.lines}
    tables = {
        'agency': pd.DataFrame([('grid', 'Grid Transit', 'https://example.org', 'America/New_York')],
                               columns=['agency_id', 'agency_name', 'agency_url', 'agency_timezone']),
        'stops': pd.DataFrame(stops, columns=['stop_id', 'stop_name', 'stop_lat', 'stop_lon']),
        'routes': pd.DataFrame([(route_id, 'grid', name, 3) for route_id, name in short_names.items()],
                               columns=['route_id', 'agency_id', 'route_short_name', 'route_type']),
        'trips': pd.DataFrame(trips, columns=['route_id', 'service_id', 'trip_id', 'direction_id']),
        'stop_times': pd.DataFrame(stop_times, columns=['trip_id', 'arrival_time', 'departure_time', 'stop_id',
                                                        'stop_sequence']),
        'calendar': pd.DataFrame([('WKD', 1, 1, 1, 1, 1, 0, 0, '20240101', '20241231')],
                                 columns=['service_id', 'monday', 'tuesday', 'wednesday', 'thursday', 'friday',
                                          'saturday', 'sunday', 'start_date', 'end_date']),
    }
    for name, table in tables.items():
        table.to_csv(directory.joinpath(f'{name}.txt'), index=False, float_format='%.6f', lineterminator='\n')
    return stop_to_edge


def gravity_od(spec: BundleSpec, total: float, seed_offset: int) -> ODMatrix:
    """ Gravity matrix with friction d**-1 exp(-0.3 d) on zone-center distances (zone units)"""
    side = spec.zones_per_side
    centers = np.array([(zrow + 0.5, zcol + 0.5) for zrow in range(side) for zcol in range(side)])
    distance = np.maximum(np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=-1), 0.5)
    mass = 1. + 0.5 * ((np.arange(side * side) * 3 + seed_offset) % 4) / 3.
    trips = np.outer(mass, mass[::-1]) * distance ** -1. * np.exp(-0.3 * distance)
    zones = tuple(f'Z{zrow}{zcol}' for zrow in range(side) for zcol in range(side))
    return ODMatrix(zones, trips * total / trips.sum())


def study_document(spec: BundleSpec) -> dict:
    return dict(gtfs_dir='gtfs', network='network.json', car_od='car_od.csv', bus_od='bus_od.csv',
                stop_edges='stop_edges.csv', profile=spec.profile, service_date=spec.service_date,
                window=[seconds_to_clock(value) for value in WINDOW],
                demand=dict(car_trips=spec.car_trips, bus_person_trips=spec.bus_person_trips),
                scenarios=[dict(multiplier=2.), dict(target_utilization=0.5), dict(target_utilization=0.7)],
                seed=spec.seed, output_dir='out', workers=4)


def make_bundle(name: str, directory: Union[str, Path]) -> Path:
    """ Write the named bundle into directory, returns the path of its config.json"""
    if name not in BUNDLES:
        raise ValueError(f'unknown bundle {name!r}, expected one of {bundle_names()}')
    spec = BUNDLES[name]
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    graph = grid_network(spec)
    write_network(graph, directory.joinpath('network.json'))
    stop_to_edge = write_gtfs(spec, graph, directory.joinpath('gtfs'))
    pd.DataFrame(sorted(stop_to_edge.items()), columns=['stop_id', 'edge_id']).to_csv(
        directory.joinpath('stop_edges.csv'), index=False, lineterminator='\n')
    write_od_matrix(gravity_od(spec, spec.car_trips, 0), directory.joinpath('car_od.csv'))
    write_od_matrix(gravity_od(spec, spec.bus_person_trips, 1), directory.joinpath('bus_od.csv'))
    config_file = directory.joinpath('config.json')
    write_json(study_document(spec), config_file)
    logger.info(f'bundle {name} written to {directory}: {len(graph.edges)} edges, '
                f'{sum(line.runs for line in spec.lines)} runs')
    return config_file
