# -*- coding: utf-8 -*-
"""
Created the 14/10/2026

Scenario arithmetic: from a baseline day (bus person trips, bus runs, car trips) to the traffic left after
raising bus utilization, either by a multiplier or to a target utilization.
"""
import math
from dataclasses import dataclass, asdict
from typing import List, Optional, Sequence

from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift import config
from transit_modeshift.errors import (InfeasibleBaselineError, OverCapacityError, DemandExhaustedError,
                                      ScenarioError)

logger = set_logger(get_module_name(__file__))


@dataclass(frozen=True)
class FleetParams:
    bus_capacity: float = float(config('fleet', 'bus_capacity'))
    car_occupancy: float = float(config('fleet', 'car_occupancy'))
    max_load: float = float(config('fleet', 'max_load'))

    def __post_init__(self):
        if not self.bus_capacity > 0:
            raise ValueError(f'bus capacity must be > 0, got {self.bus_capacity}')
        if not self.car_occupancy > 0:
            raise ValueError(f'car occupancy must be > 0, got {self.car_occupancy}')
        if not 0 < self.max_load <= 1:
            raise ValueError(f'max load must lie in (0, 1], got {self.max_load}')

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BaselineStats:
    bus_person_trips: float
    bus_run_count: int
    car_trips: float
    total_traffic: float
    utilization: float
    avg_occupancy: float

    def to_dict(self) -> dict:
        return asdict(self)


def derive_baseline(bus_person_trips: float, bus_run_count: int, car_trips: float,
                    fleet: FleetParams = None) -> BaselineStats:
    """ Baseline statistics with the current utilization U0 = P0 / (B0 x capacity)

    Parameters
    ----------
    bus_person_trips: P0, persons/day
    bus_run_count: B0, runs/day
    car_trips: C0, vehicles/day
    fleet: FleetParams
    """
    fleet = fleet or FleetParams()
    if not bus_run_count > 0:
        raise ValueError(f'the baseline needs at least one bus run, got {bus_run_count}')
    if bus_person_trips < 0 or car_trips < 0:
        raise ValueError('baseline passenger and car counts must be non-negative')
    seats = bus_run_count * fleet.bus_capacity
    if bus_person_trips > seats:
        raise InfeasibleBaselineError(f'{bus_person_trips} bus person trips exceed the {seats:g} places offered by '
                                      f'{bus_run_count} runs')
    return BaselineStats(bus_person_trips=bus_person_trips, bus_run_count=bus_run_count, car_trips=car_trips,
                         total_traffic=car_trips + bus_run_count, utilization=bus_person_trips / seats,
                         avg_occupancy=bus_person_trips / bus_run_count)


@dataclass(frozen=True)
class ScenarioSpec:
    """ Exactly one of multiplier (U1 = k U0) or target_utilization (U1 = U*)"""
    multiplier: Optional[float] = None
    target_utilization: Optional[float] = None

    def __post_init__(self):
        if (self.multiplier is None) == (self.target_utilization is None):
            raise ScenarioError('a scenario sets exactly one of multiplier or target_utilization')
        if self.multiplier is not None and not self.multiplier > 0:
            raise ScenarioError(f'multiplier must be > 0, got {self.multiplier}')
        if self.target_utilization is not None and not 0 < self.target_utilization <= 1:
            raise ScenarioError(f'target utilization must lie in (0, 1], got {self.target_utilization}')

    @property
    def label(self) -> str:
        if self.multiplier is not None:
            return f'{self.multiplier:g}X'
        return f'{self.target_utilization * 100:g}%'

    @property
    def slug(self) -> str:
        if self.multiplier is not None:
            return f'k{self.multiplier:g}'.replace('.', 'p')
        return f'u{self.target_utilization * 100:g}'.replace('.', 'p')

    def to_dict(self) -> dict:
        if self.multiplier is not None:
            return dict(multiplier=self.multiplier)
        return dict(target_utilization=self.target_utilization)

    @classmethod
    def from_dict(cls, payload: dict) -> 'ScenarioSpec':
        unknown = set(payload) - {'multiplier', 'target_utilization'}
        if unknown:
            raise ScenarioError(f'unknown scenario keys {sorted(unknown)}')
        return cls(**payload)


DEFAULT_SCENARIOS = (ScenarioSpec(multiplier=2.), ScenarioSpec(target_utilization=0.5),
                     ScenarioSpec(target_utilization=0.7))


@dataclass(frozen=True)
class ScenarioResult:
    label: str
    U0: float
    U1: float
    multiplier: float
    P0: float
    P1: float
    delta_passengers: float
    cars_removed: float
    reduction_car_basis: float
    reduction_total_basis: float
    T0: float
    T1: float
    avg_occupancy_before: float
    avg_occupancy_after: float
    required_runs: int

    def to_dict(self) -> dict:
        return asdict(self)


def apply_scenario(base: BaselineStats, spec: ScenarioSpec, fleet: FleetParams = None) -> ScenarioResult:
    """ Traffic after shifting car users onto buses until the scenario utilization is reached

    Raises
    ------
    OverCapacityError: resulting utilization above 1
    DemandExhaustedError: more cars to remove than there are car trips
    ScenarioError: target utilization below the baseline one
    """
    fleet = fleet or FleetParams()
    seats = base.bus_run_count * fleet.bus_capacity
    if spec.multiplier is not None:
        U1 = spec.multiplier * base.utilization
    else:
        U1 = spec.target_utilization
    if U1 > 1. + 1e-12:
        raise OverCapacityError(f'scenario {spec.label} needs a bus utilization of {U1:.4f} > 1')
    P1 = U1 * base.bus_run_count * fleet.bus_capacity
    delta = P1 - base.bus_person_trips
    if delta < -1e-9 * max(1., base.bus_person_trips):
        raise ScenarioError(f'scenario {spec.label} lowers bus ridership ({P1:g} < {base.bus_person_trips:g})')
    cars_removed = delta / fleet.car_occupancy
    if cars_removed > base.car_trips:
        raise DemandExhaustedError(f'scenario {spec.label} removes {cars_removed:g} cars out of '
                                   f'{base.car_trips:g}')
    result = ScenarioResult(
        label=spec.label, U0=base.utilization, U1=U1,
        multiplier=U1 / base.utilization if base.utilization > 0 else math.nan,
        P0=base.bus_person_trips, P1=P1, delta_passengers=delta, cars_removed=cars_removed,
        reduction_car_basis=cars_removed / base.car_trips if base.car_trips > 0 else 0.,
        reduction_total_basis=cars_removed / base.total_traffic,
        T0=base.total_traffic, T1=base.total_traffic - cars_removed,
        avg_occupancy_before=base.avg_occupancy, avg_occupancy_after=P1 / base.bus_run_count,
        required_runs=int(math.ceil(P1 / (fleet.bus_capacity * fleet.max_load) - 1e-9)))
    logger.debug(f'scenario {spec.label}: U1={U1:.4f}, P1={P1:g}, cars removed={cars_removed:g}, '
                 f'T1={result.T1:g} ({seats:g} seats)')
    return result


def scenario_suite(base: BaselineStats, fleet: FleetParams = None,
                   specs: Sequence[ScenarioSpec] = DEFAULT_SCENARIOS) -> List[ScenarioResult]:
    """ apply_scenario over the scenarios in order (doubling, 50 % and 70 % utilization by default)"""
    return [apply_scenario(base, spec, fleet) for spec in specs]


def scenario_table_rows(base: BaselineStats, fleet: FleetParams = None,
                        specs: Sequence[ScenarioSpec] = DEFAULT_SCENARIOS) -> List[ScenarioResult]:
    """ Base row (unchanged utilization) followed by the scenario suite"""
    base_row = apply_scenario(base, ScenarioSpec(multiplier=1.), fleet)
    return [ScenarioResult(**dict(base_row.to_dict(), label='base'))] + scenario_suite(base, fleet, specs)
