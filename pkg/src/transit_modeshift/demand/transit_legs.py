# -*- coding: utf-8 -*-
"""
Created the 14/10/2026

Bus passenger legs: each person trip rides between the served stop pair closest to its origin and destination
edges. Closeness is free-flow network time (access to the boarding stop plus egress from the alighting stop);
walking time itself is not simulated.
"""
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Tuple

from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift.demand.trips import Trip
from transit_modeshift.errors import SimConfigurationError
from transit_modeshift.ingest.gtfs import BusRunTemplate, stop_patterns
from transit_modeshift.network.graph import NetworkGraph

logger = set_logger(get_module_name(__file__))


@dataclass(frozen=True)
class StopPair:
    board_stop: str
    alight_stop: str
    route_ids: Tuple[str, ...]
    cost: float


class StopPairAssigner:
    """ Caches the best stop pair per (origin edge, destination edge)"""

    def __init__(self, graph: NetworkGraph, runs: Iterable[BusRunTemplate], stop_to_edge: Mapping[str, str]):
        self._router = graph.router
        self._patterns = stop_patterns(runs)
        for sequences in self._patterns.values():
            for sequence in sequences:
                for stop_id in sequence:
                    if stop_id not in stop_to_edge:
                        raise SimConfigurationError(f'stop {stop_id!r} is not mapped to a network edge')
                    graph.edge(stop_to_edge[stop_id])
        self._stop_to_edge = dict(stop_to_edge)
        self._cache: Dict[Tuple[str, str], Optional[StopPair]] = {}

    def _routes_serving(self, board: str, alight: str) -> Tuple[str, ...]:
        serving = []
        for route_id, sequences in self._patterns.items():
            for sequence in sequences:
                if board in sequence and alight in sequence[sequence.index(board) + 1:]:
                    serving.append(route_id)
                    break
        return tuple(serving)

    def best_pair(self, origin_edge: str, dest_edge: str) -> Optional[StopPair]:
        key = (origin_edge, dest_edge)
        if key in self._cache:
            return self._cache[key]
        best = None
        for route_id, sequences in self._patterns.items():
            for sequence in sequences:
                access = [self._router.cost(origin_edge, self._stop_to_edge[stop]) for stop in sequence]
                egress = [self._router.cost(self._stop_to_edge[stop], dest_edge) for stop in sequence]
                best_ind = 0
                for ind in range(1, len(sequence)):
                    board, alight = sequence[best_ind], sequence[ind]
                    candidate = (access[best_ind] + egress[ind], board, alight)
                    if board != alight and math.isfinite(candidate[0]) and (best is None or candidate < best):
                        best = candidate
                    if (access[ind], sequence[ind]) < (access[best_ind], sequence[best_ind]):
                        best_ind = ind
        pair = None
        if best is not None:
            pair = StopPair(best[1], best[2], self._routes_serving(best[1], best[2]), best[0])
        self._cache[key] = pair
        return pair


def assign_stop_pairs(passengers: Iterable[Trip], graph: NetworkGraph, runs: Iterable[BusRunTemplate],
                      stop_to_edge: Mapping[str, str]) -> Dict[str, Optional[StopPair]]:
    """ Stop pair per passenger trip id, None when no served pair connects origin and destination"""
    assigner = StopPairAssigner(graph, runs, stop_to_edge)
    pairs = {trip.trip_id: assigner.best_pair(trip.origin_edge, trip.dest_edge) for trip in passengers}
    unserved = sum(pair is None for pair in pairs.values())
    if unserved:
        logger.warning(f'{unserved} passenger trips have no served stop pair')
    return pairs
