# -*- coding: utf-8 -*-
"""
Created the 16/10/2026

Event driven point-queue simulation of one day of cars and scheduled buses.

Each edge behaves as a point queue: a vehicle entering at t leaves at
max(t + tff (1 + alpha (V / C)**beta), previous exit + 3600 / C), V being the entries of the trailing flow window
scaled to veh/h. Exits are therefore FIFO per edge. Segments still running at the horizon are cut there. Buses
follow their GTFS runs stop to stop, dwell, and carry the bus passengers waiting at the stops.
"""
from bisect import bisect_left
from dataclasses import dataclass, asdict
from heapq import heappush, heappop
from itertools import count
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from pymodaq_utils.enums import BaseEnum
from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift import config
from transit_modeshift.demand.transit_legs import StopPairAssigner
from transit_modeshift.demand.trips import Trip, TripTable
from transit_modeshift.errors import SimConfigurationError
from transit_modeshift.ingest.gtfs import BusRunTemplate, TransitSchedule, runs_in_window
from transit_modeshift.models.emissions import EmissionCoefficients, SEGMENT_COLUMNS, default_coefficients
from transit_modeshift.network.graph import NetworkGraph
from transit_modeshift.utils import clock_to_seconds

logger = set_logger(get_module_name(__file__))


class VehicleClassId(BaseEnum):
    car = 0
    bus = 1


class EventKind(BaseEnum):
    """ Values give the processing order of simultaneous events"""
    passenger_arrive = 0
    bus_arrive = 1
    enter_edge = 2
    bus_depart = 3


@dataclass(frozen=True)
class VehicleClass:
    class_id: str
    coefficients: EmissionCoefficients
    passenger_capacity: Optional[float] = None

    def __post_init__(self):
        if self.class_id not in VehicleClassId.names():
            raise ValueError(f'unknown vehicle class {self.class_id!r}')
        if self.class_id == 'bus' and not (self.passenger_capacity is not None and self.passenger_capacity > 0):
            raise ValueError(f'a bus needs a positive passenger capacity, got {self.passenger_capacity}')


def default_vehicle_classes(bus_capacity: float = None,
                            coefficients: Mapping[str, EmissionCoefficients] = None) -> Dict[str, VehicleClass]:
    coefficients = coefficients if coefficients is not None else default_coefficients()
    bus_capacity = float(bus_capacity if bus_capacity is not None else config('fleet', 'bus_capacity'))
    return dict(car=VehicleClass('car', coefficients['car']),
                bus=VehicleClass('bus', coefficients['bus'], bus_capacity))


@dataclass(frozen=True)
class SimParams:
    bpr_alpha: float = float(config('simulation', 'bpr_alpha'))
    bpr_beta: float = float(config('simulation', 'bpr_beta'))
    flow_window_s: float = float(config('simulation', 'flow_window_s'))
    dwell_min_s: float = float(config('simulation', 'dwell_min_s'))
    board_s: float = float(config('simulation', 'board_s'))
    alight_s: float = float(config('simulation', 'alight_s'))
    window_start: int = clock_to_seconds(config('simulation', 'window_start'))
    window_end: int = clock_to_seconds(config('simulation', 'window_end'))
    cooldown_s: float = float(config('simulation', 'cooldown_s'))
    bus_capacity: float = float(config('fleet', 'bus_capacity'))

    def __post_init__(self):
        object.__setattr__(self, 'window_start', clock_to_seconds(self.window_start))
        object.__setattr__(self, 'window_end', clock_to_seconds(self.window_end))
        if not self.window_start < self.window_end:
            raise SimConfigurationError(f'simulation window start {self.window_start} must precede its end '
                                        f'{self.window_end}')
        if self.bpr_alpha < 0 or self.bpr_beta < 0:
            raise SimConfigurationError('BPR parameters must be non-negative')
        if not self.flow_window_s > 0:
            raise SimConfigurationError(f'flow window must be > 0, got {self.flow_window_s}')
        if min(self.dwell_min_s, self.board_s, self.alight_s, self.cooldown_s) < 0:
            raise SimConfigurationError('dwell, boarding, alighting and cool-down times must be non-negative')
        if not self.bus_capacity > 0:
            raise SimConfigurationError(f'bus capacity must be > 0, got {self.bus_capacity}')

    @property
    def horizon(self) -> float:
        return self.window_end + self.cooldown_s

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: Mapping) -> 'SimParams':
        unknown = set(payload) - set(cls.__dataclass_fields__)
        if unknown:
            raise SimConfigurationError(f'unknown simulation parameters {sorted(unknown)}')
        return cls(**payload)


class TrajectorySegment(NamedTuple):
    vehicle_id: str
    vehicle_class: str
    edge_id: str
    enter_s: float
    exit_s: float
    mean_speed_mps: float


@dataclass(frozen=True)
class StopVisit:
    stop_id: str
    scheduled_arrival: int
    actual_arrival: float
    scheduled_departure: int
    actual_departure: float
    boardings: int
    alightings: int
    load_factor: float


@dataclass(frozen=True)
class PassengerWait:
    trip_id: str
    run_id: str
    stop_id: str
    arrive_s: float
    board_s: float

    @property
    def wait(self) -> float:
        return self.board_s - self.arrive_s


@dataclass(frozen=True)
class BusKpi:
    run_id: str
    route_id: str
    capacity: float
    stops: Tuple[StopVisit, ...]
    waits: Tuple[PassengerWait, ...]

    @property
    def passenger_waits(self) -> List[float]:
        return [wait.wait for wait in self.waits]

    @property
    def boardings(self) -> int:
        return sum(visit.boardings for visit in self.stops)

    @property
    def alightings(self) -> int:
        return sum(visit.alightings for visit in self.stops)

    @property
    def max_load_factor(self) -> float:
        return max((visit.load_factor for visit in self.stops), default=0.)


@dataclass(frozen=True, eq=False)
class SimOutput:
    segments: Tuple[TrajectorySegment, ...]
    bus_kpis: Tuple[BusKpi, ...]
    departed: Dict[str, int]
    arrived: Dict[str, int]
    skipped: Dict[str, int]
    unserved: int
    seed: int
    horizon: float

    @property
    def unfinished(self) -> Dict[str, int]:
        return {mode: self.departed[mode] - self.arrived[mode] for mode in self.departed}

    @property
    def total_unfinished(self) -> int:
        return sum(self.unfinished.values())

    def segments_frame(self) -> pd.DataFrame:
        return pd.DataFrame.from_records(list(self.segments), columns=SEGMENT_COLUMNS)

    def travel_times(self) -> Dict[str, float]:
        """ Seconds spent on the network per vehicle (sum of its segment durations)"""
        times: Dict[str, float] = {}
        for segment in self.segments:
            times[segment.vehicle_id] = times.get(segment.vehicle_id, 0.) + segment.exit_s - segment.enter_s
        return times

    def counts(self) -> dict:
        return dict(departed=dict(self.departed), arrived=dict(self.arrived), unfinished=self.unfinished,
                    skipped=dict(self.skipped), unserved=self.unserved)


class _EdgeState:
    __slots__ = ('entries', 'last_exit')

    def __init__(self):
        self.entries: List[float] = []
        self.last_exit = -np.inf


class _Passenger:
    __slots__ = ('trip', 'board_stop', 'alight_stop', 'route_ids', 'arrive_s')

    def __init__(self, trip: Trip, board_stop: str, alight_stop: str, route_ids: Tuple[str, ...]):
        self.trip = trip
        self.board_stop = board_stop
        self.alight_stop = alight_stop
        self.route_ids = route_ids
        self.arrive_s = trip.depart


class _BusState:
    def __init__(self, run: BusRunTemplate):
        self.run = run
        self.onboard: List[_Passenger] = []
        self.stop_index = 0
        self.path: List[str] = []
        self.path_index = 0
        self.visits: List[dict] = []
        self.waits: List[PassengerWait] = []


class MesoSimulator:
    """ One simulated day. Single threaded; every event is ordered by (time, kind, vehicle id, insertion)"""

    def __init__(self, graph: NetworkGraph, params: SimParams = None):
        self.graph = graph
        self.params = params or SimParams()
        self._router = graph.router
        self._edges: Dict[str, _EdgeState] = {}
        self._events = []
        self._sequence = count()
        self.segments: List[TrajectorySegment] = []

    def _schedule(self, time: float, kind: EventKind, vehicle_id: str, payload):
        heappush(self._events, (time, kind.value, vehicle_id, next(self._sequence), payload))

    def traverse(self, vehicle_id: str, vehicle_class: str, edge_id: str, enter: float) -> float:
        """ Point-queue traversal of edge_id entered at enter, returns the exit time

        The recorded segment stops at the horizon, at the mean speed of the whole traversal.
        """
        params = self.params
        edge = self.graph.edge(edge_id)
        state = self._edges.setdefault(edge_id, _EdgeState())
        entries = state.entries
        recent = bisect_left(entries, enter) - bisect_left(entries, enter - params.flow_window_s)
        volume = recent * 3600. / params.flow_window_s
        travel = edge.free_flow_time * (1. + params.bpr_alpha * (volume / edge.capacity) ** params.bpr_beta)
        exit_ = max(enter + travel, state.last_exit + 3600. / edge.capacity)
        entries.append(enter)
        state.last_exit = exit_
        self.segments.append(TrajectorySegment(vehicle_id, vehicle_class, edge_id, enter, min(exit_, params.horizon),
                                               edge.length / (exit_ - enter)))
        return exit_


def _stop_edges(runs: Sequence[BusRunTemplate], stop_to_edge: Mapping[str, str],
                graph: NetworkGraph) -> Dict[str, str]:
    mapping = {}
    for run in runs:
        for stop_id in run.stop_ids:
            if stop_id not in stop_to_edge:
                raise SimConfigurationError(f'stop {stop_id!r} of run {run.trip_id} is not mapped to an edge')
            mapping[stop_id] = stop_to_edge[stop_id]
            graph.edge(mapping[stop_id])
    return mapping


class _DayRun(MesoSimulator):

    def __init__(self, graph: NetworkGraph, params: SimParams, runs: Sequence[BusRunTemplate],
                 stop_to_edge: Mapping[str, str]):
        super().__init__(graph, params)
        self.runs = list(runs)
        self.stop_to_edge = _stop_edges(self.runs, stop_to_edge, graph)
        self.waiting: Dict[str, List[_Passenger]] = {}
        self.departed = {mode: 0 for mode in ('car', 'bus', 'bus_passenger')}
        self.arrived = dict(self.departed)
        self.skipped = dict(self.departed)
        self.unserved = 0
        self.buses: Dict[str, _BusState] = {}

    def admitted(self, depart: float) -> bool:
        return self.params.window_start <= depart < self.params.window_end

    def load(self, trips: TripTable):
        passengers = []
        for trip in trips:
            if not self.admitted(trip.depart):
                self.skipped[trip.mode] += 1
                continue
            self.departed[trip.mode] += 1
            if trip.mode == 'car':
                path = self._router.path(trip.origin_edge, trip.dest_edge)
                self._schedule(trip.depart, EventKind.enter_edge, trip.trip_id, ('car', path, 0))
            else:
                passengers.append(trip)
        if passengers:
            assigner = StopPairAssigner(self.graph, self.runs, self.stop_to_edge)
            for trip in passengers:
                self.graph.edge(trip.origin_edge)
                self.graph.edge(trip.dest_edge)
                pair = assigner.best_pair(trip.origin_edge, trip.dest_edge)
                if pair is None:
                    self.unserved += 1
                    continue
                self._schedule(trip.depart, EventKind.passenger_arrive, trip.trip_id,
                               _Passenger(trip, pair.board_stop, pair.alight_stop, pair.route_ids))
        for run in self.runs:
            self.departed['bus'] += 1
            self.buses[run.trip_id] = _BusState(run)
            self._schedule(run.stop_events[0].arrival, EventKind.bus_arrive, run.trip_id, 0)

    def run(self):
        horizon = self.params.horizon
        handlers = {EventKind.passenger_arrive.value: self._on_passenger_arrive,
                    EventKind.bus_arrive.value: self._on_bus_arrive,
                    EventKind.enter_edge.value: self._on_enter_edge,
                    EventKind.bus_depart.value: self._on_bus_depart}
        while self._events and self._events[0][0] <= horizon:
            time, kind, vehicle_id, _, payload = heappop(self._events)
            handlers[kind](time, vehicle_id, payload)
        self.unserved += sum(len(queue) for queue in self.waiting.values())

    def _on_passenger_arrive(self, time: float, trip_id: str, passenger: _Passenger):
        self.waiting.setdefault(passenger.board_stop, []).append(passenger)

    def _on_enter_edge(self, time: float, vehicle_id: str, payload):
        vclass, path, index = payload
        exit_ = self.traverse(vehicle_id, vclass, path[index], time)
        if index + 1 < len(path):
            self._schedule(exit_, EventKind.enter_edge, vehicle_id, (vclass, path, index + 1))
        elif vclass == 'car':
            if exit_ <= self.params.horizon:
                self.arrived['car'] += 1
        else:
            bus = self.buses[vehicle_id]
            self._schedule(exit_, EventKind.bus_arrive, vehicle_id, bus.stop_index)

    def _board(self, bus: _BusState, stop_id: str, time: float) -> int:
        queue = self.waiting.get(stop_id)
        if not queue:
            return 0
        downstream = set(bus.run.stop_ids[bus.stop_index + 1:])
        room = int(np.floor(self.params.bus_capacity + 1e-9)) - len(bus.onboard)
        remaining, boarded = [], 0
        for passenger in queue:
            if room > 0 and bus.run.route_id in passenger.route_ids and passenger.alight_stop in downstream:
                bus.onboard.append(passenger)
                bus.waits.append(PassengerWait(passenger.trip.trip_id, bus.run.trip_id, stop_id,
                                               passenger.arrive_s, time))
                room -= 1
                boarded += 1
            else:
                remaining.append(passenger)
        self.waiting[stop_id] = remaining
        return boarded

    def _on_bus_arrive(self, time: float, run_id: str, stop_index: int):
        bus = self.buses[run_id]
        bus.stop_index = stop_index
        event = bus.run.stop_events[stop_index]
        staying = [passenger for passenger in bus.onboard if passenger.alight_stop != event.stop_id]
        alightings = len(bus.onboard) - len(staying)
        bus.onboard = staying
        self.arrived['bus_passenger'] += alightings
        last = stop_index == len(bus.run.stop_events) - 1
        boardings = 0 if last else self._board(bus, event.stop_id, time)
        dwell = max(self.params.dwell_min_s, self.params.board_s * boardings + self.params.alight_s * alightings)
        visit = dict(stop_id=event.stop_id, scheduled_arrival=event.arrival, actual_arrival=time,
                     scheduled_departure=event.departure, boardings=boardings, alightings=alightings)
        bus.visits.append(visit)
        if last:
            visit.update(actual_departure=time, load_factor=0.)
            self.arrived['bus'] += 1
        else:
            self._schedule(max(float(event.departure), time + dwell), EventKind.bus_depart, run_id, stop_index)

    def _on_bus_depart(self, time: float, run_id: str, stop_index: int):
        bus = self.buses[run_id]
        stop_id = bus.run.stop_ids[stop_index]
        visit = bus.visits[-1]
        visit['boardings'] += self._board(bus, stop_id, time)
        visit.update(actual_departure=time, load_factor=len(bus.onboard) / self.params.bus_capacity)
        next_edge = self.stop_to_edge[bus.run.stop_ids[stop_index + 1]]
        path = self._router.path(self.stop_to_edge[stop_id], next_edge)[1:]
        bus.stop_index = stop_index + 1
        if path:
            self._schedule(time, EventKind.enter_edge, run_id, ('bus', path, 0))
        else:
            self._schedule(time, EventKind.bus_arrive, run_id, stop_index + 1)

    def output(self, seed: int) -> SimOutput:
        kpis = []
        for run in self.runs:
            bus = self.buses[run.trip_id]
            visits = tuple(StopVisit(**dict(dict(actual_departure=np.nan, load_factor=len(bus.onboard) /
                                                 self.params.bus_capacity), **visit)) for visit in bus.visits)
            kpis.append(BusKpi(run.trip_id, run.route_id, self.params.bus_capacity, visits, tuple(bus.waits)))
        return SimOutput(segments=tuple(self.segments), bus_kpis=tuple(kpis), departed=dict(self.departed),
                         arrived=dict(self.arrived), skipped=dict(self.skipped), unserved=self.unserved,
                         seed=seed, horizon=self.params.horizon)


def run_day(graph: NetworkGraph, trips: TripTable, schedule: TransitSchedule, stop_to_edge: Mapping[str, str],
            params: SimParams = None, seed: int = 0, route_filter: Optional[Iterable[str]] = None) -> SimOutput:
    """ Simulate cars, buses and bus passengers from window start to window end plus the cool-down

    Trips departing outside the admission window are skipped (counted apart). Cars follow their free-flow shortest
    path, origin edge included. Buses run every schedule run whose first departure falls in the window. Bus
    passengers wait at the stop pair assigned to their origin and destination edges and board the first run of an
    allowed route with spare room. The outcome does not depend on seed, which is recorded for the manifest.

    Events up to the horizon (window end plus cool-down) are processed. A car counts as arrived when it leaves its
    last edge by the horizon; a traversal still under way at the horizon is recorded up to the horizon only, so
    every segment ends by it.

    Raises
    ------
    SimConfigurationError: a stop used by a simulated run has no edge
    ReferentialIntegrityError: a trip or stop references an unknown edge
    NoPathError: a car destination or the next stop of a bus is unreachable
    """
    params = params or SimParams()
    runs = runs_in_window(schedule, (params.window_start, params.window_end), route_filter)
    simulation = _DayRun(graph, params, runs, stop_to_edge)
    simulation.load(trips)
    simulation.run()
    output = simulation.output(seed)
    logger.info(f'day simulated: {len(output.segments)} segments, departed {output.departed}, '
                f'arrived {output.arrived}, {output.unserved} unserved passengers')
    return output
