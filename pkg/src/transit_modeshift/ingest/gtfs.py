# -*- coding: utf-8 -*-
"""
Created the 12/10/2026

GTFS static feed reader: resolves stops, routes, trips, stop_times and the service calendar
into the concrete bus runs of one service date.
"""
import datetime as dt
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from pymodaq_utils.enums import BaseEnum
from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift.errors import (FeedIncompleteError, FeedFormatError, ReferentialIntegrityError,
                                      ServiceDateError, UnsupportedFeatureError, UnknownRouteError,
                                      NotServedError)
from transit_modeshift.utils import parse_window

logger = set_logger(get_module_name(__file__))

WEEKDAYS = ('monday', 'tuesday', 'wednesday', 'thursday', 'friday', 'saturday', 'sunday')

REQUIRED_COLUMNS = {
    'stops': ('stop_id', 'stop_name', 'stop_lat', 'stop_lon'),
    'routes': ('route_id', 'route_short_name', 'route_type'),
    'trips': ('route_id', 'service_id', 'trip_id'),
    'stop_times': ('trip_id', 'arrival_time', 'departure_time', 'stop_id', 'stop_sequence'),
    'calendar': ('service_id',) + WEEKDAYS + ('start_date', 'end_date'),
    'calendar_dates': ('service_id', 'date', 'exception_type'),
    'frequencies': ('trip_id',),
}


class RouteType(BaseEnum):
    """ GTFS route types this package handles. Only buses are simulated"""
    bus = 3

    @classmethod
    def from_gtfs(cls, code: int) -> Optional['RouteType']:
        """ Basic type 3 and the extended bus range 700-799 map to bus, anything else to None"""
        if code == 3 or 700 <= code <= 799:
            return cls.bus
        return None


@dataclass(frozen=True)
class Stop:
    stop_id: str
    name: str
    lat: float
    lon: float

    def __post_init__(self):
        if not -90. <= self.lat <= 90.:
            raise FeedFormatError(f'stop {self.stop_id}: latitude {self.lat} out of [-90, 90]')
        if not -180. <= self.lon <= 180.:
            raise FeedFormatError(f'stop {self.stop_id}: longitude {self.lon} out of [-180, 180]')


@dataclass(frozen=True)
class RouteDef:
    route_id: str
    short_name: str
    route_type: RouteType = RouteType.bus

    def __post_init__(self):
        if not self.short_name:
            raise FeedFormatError(f'route {self.route_id} has an empty route_short_name')


@dataclass(frozen=True)
class StopEvent:
    stop_id: str
    arrival: int
    departure: int


@dataclass(frozen=True)
class BusRunTemplate:
    trip_id: str
    route_id: str
    service_id: str
    stop_events: Tuple[StopEvent, ...]

    def __post_init__(self):
        if len(self.stop_events) == 0:
            raise FeedFormatError(f'trip {self.trip_id} has no stop events')
        previous = -np.inf
        for event in self.stop_events:
            if event.arrival > event.departure:
                raise FeedFormatError(f'trip {self.trip_id}: arrival after departure at stop '
                                      f'{event.stop_id}')
            if event.arrival < previous:
                raise FeedFormatError(f'trip {self.trip_id}: times decrease at stop {event.stop_id}')
            previous = event.departure

    @property
    def first_departure(self) -> int:
        return self.stop_events[0].departure

    @property
    def stop_ids(self) -> Tuple[str, ...]:
        return tuple(event.stop_id for event in self.stop_events)


@dataclass(frozen=True)
class TransitSchedule:
    stops: Tuple[Stop, ...]
    routes: Tuple[RouteDef, ...]
    runs: Tuple[BusRunTemplate, ...]
    service_date: dt.date
    _stops_by_id: Dict[str, Stop] = field(init=False, repr=False, compare=False)
    _routes_by_id: Dict[str, RouteDef] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, '_stops_by_id', {stop.stop_id: stop for stop in self.stops})
        object.__setattr__(self, '_routes_by_id', {route.route_id: route for route in self.routes})
        if len(self._stops_by_id) != len(self.stops):
            raise FeedFormatError('duplicated stop_id in schedule')
        if len(self._routes_by_id) != len(self.routes):
            raise FeedFormatError('duplicated route_id in schedule')
        for run in self.runs:
            if run.route_id not in self._routes_by_id:
                raise ReferentialIntegrityError(run.route_id, f'trip {run.trip_id} references unknown '
                                                              f'route {run.route_id!r}')
            for event in run.stop_events:
                if event.stop_id not in self._stops_by_id:
                    raise ReferentialIntegrityError(event.stop_id, f'trip {run.trip_id} references '
                                                                   f'unknown stop {event.stop_id!r}')

    def stop(self, stop_id: str) -> Stop:
        return self._stops_by_id[stop_id]

    def route(self, route_id: str) -> RouteDef:
        return self._routes_by_id[route_id]

    @property
    def short_names(self) -> List[str]:
        return sorted({route.short_name for route in self.routes})

    def route_ids_for(self, short_name: str) -> List[str]:
        route_ids = sorted(route.route_id for route in self.routes if route.short_name == short_name)
        if not route_ids:
            raise UnknownRouteError(f'no route with short name {short_name!r}')
        return route_ids


def _read_table(feed_directory: Path, name: str, required=True) -> Optional[pd.DataFrame]:
    path = feed_directory.joinpath(f'{name}.txt')
    if not path.is_file():
        if required:
            raise FeedIncompleteError(f'{name}.txt')
        return None
    try:
        table = pd.read_csv(path, dtype=str, keep_default_na=False, encoding='utf-8-sig')
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise FeedFormatError(f'{name}.txt could not be parsed: {e}')
    except pd.errors.EmptyDataError:
        table = pd.DataFrame(columns=list(REQUIRED_COLUMNS[name]))
    table.columns = [str(col).strip() for col in table.columns]
    missing = [col for col in REQUIRED_COLUMNS[name] if col not in table.columns]
    if missing:
        raise FeedFormatError(f'{name}.txt lacks the column(s) {", ".join(missing)}')
    return table.apply(lambda col: col.str.strip())


def _parse_clock_column(values: pd.Series, what: str) -> np.ndarray:
    """ Seconds since midnight for each 'H:MM:SS' entry, NaN for blank entries"""
    seconds = np.full(len(values), np.nan)
    filled = (values != '').to_numpy()
    if filled.any():
        parts = values[filled].str.split(':', expand=True)
        try:
            if parts.shape[1] != 3:
                raise ValueError
            hms = parts.astype(int).to_numpy()
        except (ValueError, TypeError):
            bad = values[filled].iloc[0]
            raise FeedFormatError(f'stop_times.txt: malformed {what} (first value {bad!r})')
        seconds[filled] = hms[:, 0] * 3600 + hms[:, 1] * 60 + hms[:, 2]
    return seconds


def _active_services(calendar: pd.DataFrame, calendar_dates: Optional[pd.DataFrame],
                     service_date: dt.date) -> set:
    date_key = service_date.strftime('%Y%m%d')
    in_range = ((calendar['start_date'] <= date_key) & (calendar['end_date'] >= date_key)).to_numpy()
    runs_today = (calendar[WEEKDAYS[service_date.weekday()]] == '1').to_numpy()
    active = set(calendar.loc[in_range & runs_today, 'service_id'])
    covered = bool(in_range.any())
    if calendar_dates is not None:
        today = calendar_dates[calendar_dates['date'] == date_key]
        added = set(today.loc[today['exception_type'] == '1', 'service_id'])
        removed = set(today.loc[today['exception_type'] == '2', 'service_id'])
        active = (active | added) - removed
        covered = covered or bool(added)
    if not covered:
        raise ServiceDateError(f'{service_date.isoformat()} lies outside every calendar range of the feed')
    return active


def _interpolate_blank_times(times: np.ndarray, trip_id: str) -> np.ndarray:
    known = ~np.isnan(times)
    if not (known[0] and known[-1]):
        raise FeedFormatError(f'trip {trip_id}: first and last stops must carry times')
    if known.all():
        return times
    positions = np.arange(len(times))
    return np.interp(positions, positions[known], times[known])


def parse_feed(feed_directory: Union[str, Path], service_date: Union[str, dt.date]) -> TransitSchedule:
    """ Parse a GTFS static feed and keep the bus runs active on service_date

    Parameters
    ----------
    feed_directory: Path
        directory holding stops.txt, routes.txt, trips.txt, stop_times.txt, calendar.txt and optionally
        calendar_dates.txt
    service_date: date or ISO string

    Returns
    -------
    TransitSchedule
    """
    feed_directory = Path(feed_directory)
    if isinstance(service_date, str):
        service_date = dt.date.fromisoformat(service_date)

    stops_df = _read_table(feed_directory, 'stops')
    routes_df = _read_table(feed_directory, 'routes')
    trips_df = _read_table(feed_directory, 'trips')
    stop_times_df = _read_table(feed_directory, 'stop_times')
    calendar_df = _read_table(feed_directory, 'calendar')
    calendar_dates_df = _read_table(feed_directory, 'calendar_dates', required=False)
    frequencies_df = _read_table(feed_directory, 'frequencies', required=False)

    if frequencies_df is not None and len(frequencies_df) > 0:
        raise UnsupportedFeatureError('frequencies.txt based trips are not supported, only fixed schedules')

    try:
        stops = tuple(Stop(row.stop_id, row.stop_name, float(row.stop_lat), float(row.stop_lon))
                      for row in stops_df.itertuples(index=False))
    except ValueError as e:
        raise FeedFormatError(f'stops.txt: {e}')
    if stops_df['stop_id'].duplicated().any():
        raise FeedFormatError(f'stops.txt: duplicated stop_id '
                              f'{stops_df.loc[stops_df["stop_id"].duplicated(), "stop_id"].iloc[0]!r}')
    if routes_df['route_id'].duplicated().any():
        raise FeedFormatError('routes.txt: duplicated route_id')
    if trips_df['trip_id'].duplicated().any():
        raise FeedFormatError(f'trips.txt: duplicated trip_id '
                              f'{trips_df.loc[trips_df["trip_id"].duplicated(), "trip_id"].iloc[0]!r}')

    routes = []
    for row in routes_df.itertuples(index=False):
        try:
            route_type = RouteType.from_gtfs(int(row.route_type))
        except ValueError:
            raise FeedFormatError(f'routes.txt: route {row.route_id} has a non integer route_type')
        if route_type is None:
            logger.warning(f'route {row.route_id} (type {row.route_type}) is not a bus route, dropped')
            continue
        routes.append(RouteDef(row.route_id, row.route_short_name, route_type))

    all_route_ids = set(routes_df['route_id'])
    unknown_routes = sorted(set(trips_df['route_id']) - all_route_ids)
    if unknown_routes:
        raise ReferentialIntegrityError(unknown_routes[0], f'trips.txt references unknown route '
                                                           f'{unknown_routes[0]!r}')
    known_services = set(calendar_df['service_id'])
    if calendar_dates_df is not None:
        known_services |= set(calendar_dates_df['service_id'])
    unknown_services = sorted(set(trips_df['service_id']) - known_services)
    if unknown_services:
        raise ReferentialIntegrityError(unknown_services[0], f'trips.txt references unknown service '
                                                             f'{unknown_services[0]!r}')
    unknown_trips = sorted(set(stop_times_df['trip_id']) - set(trips_df['trip_id']))
    if unknown_trips:
        raise ReferentialIntegrityError(unknown_trips[0], f'stop_times.txt references unknown trip '
                                                          f'{unknown_trips[0]!r}')
    unknown_stops = sorted(set(stop_times_df['stop_id']) - set(stops_df['stop_id']))
    if unknown_stops:
        raise ReferentialIntegrityError(unknown_stops[0], f'stop_times.txt references unknown stop '
                                                          f'{unknown_stops[0]!r}')

    active_services = _active_services(calendar_df, calendar_dates_df, service_date)
    bus_route_ids = {route.route_id for route in routes}
    active_trips = trips_df[trips_df['service_id'].isin(active_services)
                            & trips_df['route_id'].isin(bus_route_ids)]

    stop_times = stop_times_df[stop_times_df['trip_id'].isin(set(active_trips['trip_id']))].copy()
    try:
        stop_times['stop_sequence'] = stop_times['stop_sequence'].astype(int)
    except ValueError:
        raise FeedFormatError('stop_times.txt: stop_sequence must be integer')
    if stop_times.duplicated(['trip_id', 'stop_sequence']).any():
        raise FeedFormatError('stop_times.txt: duplicated (trip_id, stop_sequence)')
    stop_times['arrival_s'] = _parse_clock_column(stop_times['arrival_time'], 'arrival_time')
    stop_times['departure_s'] = _parse_clock_column(stop_times['departure_time'], 'departure_time')
    stop_times['arrival_s'] = stop_times['arrival_s'].fillna(stop_times['departure_s'])
    stop_times['departure_s'] = stop_times['departure_s'].fillna(stop_times['arrival_s'])
    stop_times = stop_times.sort_values(['trip_id', 'stop_sequence'], kind='mergesort')

    grouped = {trip_id: group for trip_id, group in stop_times.groupby('trip_id', sort=True)}
    runs = []
    for trip in active_trips.sort_values('trip_id').itertuples(index=False):
        group = grouped.get(trip.trip_id)
        if group is None:
            logger.warning(f'trip {trip.trip_id} has no stop_times, dropped')
            continue
        arrivals = _interpolate_blank_times(group['arrival_s'].to_numpy(), trip.trip_id)
        departures = _interpolate_blank_times(group['departure_s'].to_numpy(), trip.trip_id)
        events = tuple(StopEvent(stop_id, int(round(arr)), int(round(dep)))
                       for stop_id, arr, dep in zip(group['stop_id'], arrivals, departures))
        runs.append(BusRunTemplate(trip.trip_id, trip.route_id, trip.service_id, events))

    schedule = TransitSchedule(stops, tuple(sorted(routes, key=lambda route: route.route_id)),
                               tuple(runs), service_date)
    logger.info(f'GTFS feed {feed_directory} parsed for {service_date.isoformat()}: '
                f'{len(schedule.runs)} runs over {len(schedule.routes)} bus routes')
    return schedule


def runs_in_window(schedule: TransitSchedule, window: Tuple[Union[int, str], Union[int, str]],
                   route_filter: Optional[Iterable[str]] = None) -> List[BusRunTemplate]:
    """ Runs whose first departure lies in the half-open window [start, end)

    Parameters
    ----------
    schedule: TransitSchedule
    window: (start, end) in seconds since midnight (or HH:MM:SS strings)
    route_filter: optional collection of route short names

    Returns
    -------
    list of BusRunTemplate ordered by first departure then trip_id
    """
    start, end = parse_window(window)
    route_ids = None
    if route_filter is not None:
        route_filter = set(route_filter)
        unknown = sorted(route_filter - set(schedule.short_names))
        if unknown:
            raise UnknownRouteError(f'unknown route short name(s): {", ".join(unknown)}')
        route_ids = {route.route_id for route in schedule.routes if route.short_name in route_filter}
    selected = [run for run in schedule.runs if start <= run.first_departure < end
                and (route_ids is None or run.route_id in route_ids)]
    return sorted(selected, key=lambda run: (run.first_departure, run.trip_id))


def headways(schedule: TransitSchedule, route: str, stop_id: str) -> List[int]:
    """ Sorted gaps (seconds) between consecutive departures of a route at a stop"""
    route_ids = set(schedule.route_ids_for(route))
    departures = sorted(event.departure for run in schedule.runs if run.route_id in route_ids
                        for event in run.stop_events if event.stop_id == stop_id)
    if not departures:
        raise NotServedError(f'stop {stop_id!r} is not served by route {route!r}')
    return [int(gap) for gap in np.diff(departures)]


def served_stops(schedule: TransitSchedule, route: str) -> List[str]:
    route_ids = set(schedule.route_ids_for(route))
    return sorted({event.stop_id for run in schedule.runs if run.route_id in route_ids
                   for event in run.stop_events})


def stop_patterns(runs: Iterable[BusRunTemplate]) -> Dict[str, List[Tuple[str, ...]]]:
    """ Distinct ordered stop sequences per route_id, sorted for reproducibility"""
    patterns: Dict[str, set] = {}
    for run in runs:
        patterns.setdefault(run.route_id, set()).add(run.stop_ids)
    return {route_id: sorted(sequences) for route_id, sequences in sorted(patterns.items())}


def schedule_summary(schedule: TransitSchedule, window, route_filter=None) -> dict:
    runs = runs_in_window(schedule, window, route_filter)
    return dict(service_date=schedule.service_date.isoformat(),
                runs=len(runs),
                routes=sorted({schedule.route(run.route_id).short_name for run in runs}),
                stops=len({stop_id for run in runs for stop_id in run.stop_ids}),
                first_departure=runs[0].first_departure if runs else None,
                last_departure=runs[-1].first_departure if runs else None)
