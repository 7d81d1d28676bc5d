# -*- coding: utf-8 -*-
"""
Created the 14/10/2026

Trip tables generated from calibrated OD matrices and a temporal profile.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Tuple, Union

import numpy as np
import pandas as pd

from pymodaq_utils.enums import BaseEnum, enum_checker
from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift.demand.od import ODMatrix, apportion_largest_remainder, round_half_up
from transit_modeshift.demand.profiles import TemporalProfile, N_BINS, BIN_S
from transit_modeshift.errors import ReferentialIntegrityError
from transit_modeshift.network.graph import NetworkGraph

logger = set_logger(get_module_name(__file__))

DAY_S = 86400
TRIP_COLUMNS = ['trip_id', 'mode', 'depart_s', 'origin_edge', 'dest_edge', 'origin_zone', 'dest_zone']


class TripMode(BaseEnum):
    car = 0
    bus_passenger = 1


ID_PREFIX = {'car': 'car', 'bus_passenger': 'pax'}


@dataclass(frozen=True)
class Trip:
    trip_id: str
    mode: str
    depart: float
    origin_edge: str
    dest_edge: str
    origin_zone: str
    dest_zone: str


@dataclass(frozen=True)
class TripTable:
    trips: Tuple[Trip, ...] = ()

    def __post_init__(self):
        trips = tuple(self.trips)
        object.__setattr__(self, 'trips', trips)
        ids = set()
        for trip in trips:
            if not 0 <= trip.depart < DAY_S:
                raise ValueError(f'trip {trip.trip_id}: departure {trip.depart} outside [0, {DAY_S})')
            if trip.mode not in TripMode.names():
                raise ValueError(f'trip {trip.trip_id}: unknown mode {trip.mode!r}')
            ids.add(trip.trip_id)
        if len(ids) != len(trips):
            raise ValueError('trip ids must be unique within a TripTable')

    def __len__(self):
        return len(self.trips)

    def __iter__(self):
        return iter(self.trips)

    def by_mode(self, mode: Union[str, TripMode]) -> List[Trip]:
        mode = enum_checker(TripMode, mode).name
        return [trip for trip in self.trips if trip.mode == mode]

    def count(self, mode: Union[str, TripMode]) -> int:
        return len(self.by_mode(mode))

    def merged(self, other: Union['TripTable', Iterable[Trip]]) -> 'TripTable':
        return sorted_table(tuple(self.trips) + tuple(other))

    def check_zones(self, graph: NetworkGraph):
        """ Every trip edge must belong to the zone it is declared in"""
        for trip in self.trips:
            for zone_id, edge_id in ((trip.origin_zone, trip.origin_edge), (trip.dest_zone, trip.dest_edge)):
                if edge_id not in graph.zone(zone_id).edge_ids:
                    raise ReferentialIntegrityError(edge_id, f'trip {trip.trip_id}: edge {edge_id!r} is not in '
                                                             f'zone {zone_id!r}')


def sorted_table(trips: Iterable[Trip]) -> TripTable:
    return TripTable(tuple(sorted(trips, key=lambda trip: (trip.depart, trip.trip_id))))


def _zone_edges(od: ODMatrix, graph: NetworkGraph) -> List[Tuple[str, ...]]:
    edges = []
    for zone_id in od.zones:
        zone = graph.zone(zone_id)
        if not zone.edge_ids:
            raise ReferentialIntegrityError(zone_id, f'zone {zone_id!r} has an empty edge set')
        edges.append(zone.edge_ids)
    return edges


def draw_departures(rng: np.random.Generator, profile: TemporalProfile, size: int) -> np.ndarray:
    """ Departure seconds: bin drawn from the profile, then uniform within the bin (millisecond floor)"""
    bins = rng.choice(N_BINS, size=size, p=profile.weights)
    offsets = rng.uniform(0., BIN_S, size=size)
    return np.floor((bins * BIN_S + offsets) * 1000.) / 1000.


def generate_trips(od: ODMatrix, profile: TemporalProfile, graph: NetworkGraph,
                   mode: Union[str, TripMode], seed: int) -> TripTable:
    """ Turn an OD matrix into time-stamped trips

    Cell counts come from largest-remainder apportionment of round(total); departures from the profile; origin
    and destination edges uniformly from the zone edge sets. The numpy generator is seeded and owned by the call.
    """
    mode = enum_checker(TripMode, mode).name
    zone_edges = _zone_edges(od, graph)
    counts = apportion_largest_remainder(od.trips, round_half_up(od.total))
    n_trips = int(counts.sum())
    if n_trips == 0:
        return TripTable(())

    rng = np.random.default_rng(seed)
    cells = np.repeat(np.arange(counts.size), counts.ravel())
    origin_ind, dest_ind = np.divmod(cells, len(od.zones))
    departs = draw_departures(rng, profile, n_trips)
    sizes = np.array([len(edges) for edges in zone_edges])
    origin_pick = np.minimum((rng.random(n_trips) * sizes[origin_ind]).astype(int), sizes[origin_ind] - 1)
    dest_pick = np.minimum((rng.random(n_trips) * sizes[dest_ind]).astype(int), sizes[dest_ind] - 1)

    prefix = ID_PREFIX[mode]
    trips = []
    for rank, ind in enumerate(np.argsort(departs, kind='stable')):
        oi, di = origin_ind[ind], dest_ind[ind]
        trips.append(Trip(f'{prefix}{rank:07d}', mode, float(departs[ind]),
                          zone_edges[oi][origin_pick[ind]], zone_edges[di][dest_pick[ind]],
                          od.zones[oi], od.zones[di]))
    logger.info(f'{n_trips} {mode} trips generated from a {len(od.zones)}-zone OD matrix (seed {seed})')
    return TripTable(tuple(trips))


def trips_to_frame(table: TripTable) -> pd.DataFrame:
    return pd.DataFrame([(trip.trip_id, trip.mode, trip.depart, trip.origin_edge, trip.dest_edge,
                          trip.origin_zone, trip.dest_zone) for trip in table.trips], columns=TRIP_COLUMNS)


def write_trip_table(table: TripTable, file: Union[str, Path]):
    trips_to_frame(table).to_csv(file, index=False, float_format='%.3f', lineterminator='\n')


def load_trip_table(file: Union[str, Path]) -> TripTable:
    frame = pd.read_csv(file, dtype={col: str for col in TRIP_COLUMNS if col != 'depart_s'},
                        keep_default_na=False)
    return TripTable(tuple(Trip(row.trip_id, row.mode, float(row.depart_s), row.origin_edge, row.dest_edge,
                                row.origin_zone, row.dest_zone) for row in frame.itertuples(index=False)))
