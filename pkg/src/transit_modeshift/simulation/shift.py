# -*- coding: utf-8 -*-
"""
Created the 16/10/2026

Turn a scenario result into a trip table: drop car trips and add the bus passengers who used to drive them.
"""
from typing import Optional

import numpy as np

from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift.demand.od import round_half_up
from transit_modeshift.demand.profiles import TemporalProfile
from transit_modeshift.demand.trips import Trip, TripTable, draw_departures, sorted_table
from transit_modeshift.errors import DemandExhaustedError
from transit_modeshift.models.mode_shift import ScenarioResult

logger = set_logger(get_module_name(__file__))

SHIFTED_PREFIX = 'pxm'


def apply_modeshift_to_trips(trips: TripTable, result: ScenarioResult, seed: int,
                             profile: Optional[TemporalProfile] = None) -> TripTable:
    """ Remove round(cars_removed) car trips and add round(delta_passengers) bus passenger trips

    Removed cars are drawn uniformly without replacement. New passengers reuse the origin and destination of the
    removed cars in draw order, cycling when there are more passengers than removed cars (or drawing from the
    remaining cars when none is removed). Their departures follow profile, or the source trip departure when no
    profile is given.

    Raises
    ------
    DemandExhaustedError: more cars to remove than the table holds, or passengers to add with no trip to copy
    """
    n_remove = round_half_up(result.cars_removed)
    n_add = round_half_up(result.delta_passengers)
    cars = trips.by_mode('car')
    if n_remove > len(cars):
        raise DemandExhaustedError(f'scenario {result.label} removes {n_remove} car trips, the table holds '
                                   f'{len(cars)}')
    if n_remove == 0 and n_add == 0:
        return trips

    rng = np.random.default_rng(seed)
    removed_ind = rng.choice(len(cars), size=n_remove, replace=False) if n_remove else np.array([], dtype=int)
    removed_ids = {cars[ind].trip_id for ind in removed_ind}
    kept = [trip for trip in trips if trip.trip_id not in removed_ids]

    added = []
    if n_add > 0:
        if n_remove:
            sources = [cars[ind] for ind in removed_ind]
        else:
            pool = cars or list(trips)
            if not pool:
                raise DemandExhaustedError(f'scenario {result.label} adds {n_add} passengers to an empty table')
            sources = [pool[ind] for ind in rng.integers(0, len(pool), size=n_add)]
        if profile is not None:
            departs = draw_departures(rng, profile, n_add)
        else:
            departs = np.array([sources[ind % len(sources)].depart for ind in range(n_add)])
        for ind in range(n_add):
            source = sources[ind % len(sources)]
            added.append(Trip(f'{SHIFTED_PREFIX}{ind:07d}', 'bus_passenger', float(departs[ind]),
                              source.origin_edge, source.dest_edge, source.origin_zone, source.dest_zone))
    logger.info(f'scenario {result.label}: {n_remove} car trips removed, {n_add} bus passenger trips added '
                f'(seed {seed})')
    return sorted_table(kept + added)
