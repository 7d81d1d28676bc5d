# -*- coding: utf-8 -*-
"""
Created the 17/10/2026

Study configuration and the end to end chain: ingest, demand, baseline, scenarios, simulation, emissions, report.

A study is one JSON document; relative paths resolve against its directory::

    {"gtfs_dir": "gtfs", "network": "network.json", "car_od": "car_od.csv", "bus_od": "bus_od.csv",
     "profile": "mixed_use", "stop_edges": "stop_edges.csv", "service_date": "2024-03-12",
     "window": ["05:00:00", "21:00:00"], "route_filter": null,
     "demand": {"car_trips": 35335, "bus_person_trips": 6585},
     "baseline": {"P0": 6585, "B0": 1035, "C0": 35335},
     "fleet": {...}, "scenarios": [{"multiplier": 2}, {"target_utilization": 0.5}],
     "simulation": {...}, "emissions": {"car": [c0, c1, c2], "bus": [...], "bin_width_s": 60,
                                        "smoothing_window": 5},
     "seed": 42, "output_dir": "out", "workers": 4}

Every key but the ones needed by the command at hand is optional.
"""
import json
import shutil
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from pymodaq_utils.logger import set_logger, get_module_name

import transit_modeshift
from transit_modeshift import config
from transit_modeshift.demand import (ODMatrix, TripTable, calibrate_total, generate_trips, load_od_matrix,
                                      resolve_profile, round_half_up, write_trip_table, TemporalProfile)
from transit_modeshift.errors import (TransitModeShiftError, PipelineConfigError, PipelineStageError,
                                      ReferentialIntegrityError)
from transit_modeshift.exporters import (write_sim_output, write_ledger, write_series, write_json,
                                         write_scenario_table, series_plot_frame, write_frame, plot_series,
                                         load_series)
from transit_modeshift.ingest import TransitSchedule, parse_feed, runs_in_window
from transit_modeshift.models import (FleetParams, BaselineStats, ScenarioSpec, DEFAULT_SCENARIOS, ScenarioResult,
                                      EmissionCoefficients, default_coefficients, derive_baseline,
                                      scenario_table_rows, integrate, aggregate, series_from_values, compare,
                                      DailySeries)
from transit_modeshift.network import NetworkGraph, load_network
from transit_modeshift.simulation import SimParams, run_day, apply_modeshift_to_trips
from transit_modeshift.utils import parse_window, seconds_to_clock, file_digest, json_digest

logger = set_logger(get_module_name(__file__))

CONFIG_KEYS = {'gtfs_dir', 'network', 'car_od', 'bus_od', 'profile', 'stop_edges', 'service_date', 'window',
               'route_filter', 'demand', 'baseline', 'fleet', 'scenarios', 'simulation', 'emissions', 'seed',
               'output_dir', 'workers'}
PATH_KEYS = ('gtfs_dir', 'network', 'car_od', 'bus_od', 'stop_edges')
BASE_LABEL = 'base'
BASE_SLUG = 'base'


@dataclass(frozen=True)
class PipelineConfig:
    base_dir: Path
    document: dict
    paths: Dict[str, Path]
    profile: str
    service_date: Optional[str]
    window: Tuple[int, int]
    route_filter: Optional[Tuple[str, ...]]
    demand_targets: Dict[str, float]
    baseline: Optional[Tuple[float, int, float]]
    fleet: FleetParams
    scenarios: Tuple[ScenarioSpec, ...]
    simulation: SimParams
    coefficients: Dict[str, EmissionCoefficients]
    bin_width: float
    smoothing_window: int
    seed: int
    output_dir: Path
    workers: int

    def path(self, key: str) -> Path:
        """ Resolved path of a file key, PipelineConfigError when the study does not declare it"""
        if key not in self.paths:
            raise PipelineConfigError(f'the study configuration does not set {key!r}')
        return self.paths[key]

    def require(self, *keys: str):
        missing = [key for key in keys if key not in self.paths and self.document.get(key) is None]
        if missing:
            raise PipelineConfigError(f'the study configuration misses {", ".join(missing)}')

    def with_seed(self, seed: Optional[int]) -> 'PipelineConfig':
        if seed is None:
            return self
        return PipelineConfig(**dict(self.__dict__, seed=int(seed)))

    def materialized(self) -> dict:
        """ Every setting of the run, defaults included, with paths as written in the study"""
        return dict(paths={key: self.document[key] for key in PATH_KEYS if key in self.document},
                    profile=self.profile, service_date=self.service_date,
                    window=[seconds_to_clock(value) for value in self.window],
                    route_filter=list(self.route_filter) if self.route_filter is not None else None,
                    demand=dict(self.demand_targets),
                    baseline=dict(zip(('P0', 'B0', 'C0'), self.baseline)) if self.baseline else None,
                    fleet=self.fleet.to_dict(), scenarios=[spec.to_dict() for spec in self.scenarios],
                    simulation=self.simulation.to_dict(),
                    emissions=dict({vclass: coeffs.to_list() for vclass, coeffs in self.coefficients.items()},
                                   bin_width_s=self.bin_width, smoothing_window=self.smoothing_window),
                    seed=self.seed, workers=self.workers)


def _section(document: dict, key: str) -> dict:
    value = document.get(key) or {}
    if not isinstance(value, dict):
        raise PipelineConfigError(f'{key}: expected an object')
    return value


def pipeline_config_from_dict(document: dict, base_dir: Union[str, Path] = '.') -> PipelineConfig:
    if not isinstance(document, dict):
        raise PipelineConfigError('the study configuration must be a JSON object')
    unknown = sorted(set(document) - CONFIG_KEYS)
    if unknown:
        raise PipelineConfigError(f'unknown configuration keys {unknown}')
    base_dir = Path(base_dir).resolve()
    paths = {key: base_dir.joinpath(document[key]) for key in PATH_KEYS if document.get(key) is not None}
    try:
        window = parse_window(document.get('window', (config('simulation', 'window_start'),
                                                      config('simulation', 'window_end'))))
        fleet = FleetParams(**_section(document, 'fleet'))
        scenarios = tuple(ScenarioSpec.from_dict(item) for item in document['scenarios']) \
            if document.get('scenarios') is not None else DEFAULT_SCENARIOS
        simulation = _section(document, 'simulation')
        overridden = sorted({'window_start', 'window_end', 'bus_capacity'} & set(simulation))
        if overridden:
            raise PipelineConfigError(f'simulation: {overridden} come from the window and fleet sections')
        simulation = SimParams.from_dict(dict(simulation, window_start=window[0], window_end=window[1],
                                              bus_capacity=fleet.bus_capacity))
        emissions = _section(document, 'emissions')
        coefficients = default_coefficients()
        for vclass in ('car', 'bus'):
            if vclass in emissions:
                coefficients[vclass] = EmissionCoefficients.from_sequence(emissions[vclass])
        unknown = sorted(set(emissions) - {'car', 'bus', 'bin_width_s', 'smoothing_window'})
        if unknown:
            raise PipelineConfigError(f'emissions: unknown keys {unknown}')
        baseline = None
        if document.get('baseline') is not None:
            section = _section(document, 'baseline')
            baseline = (float(section['P0']), int(section['B0']), float(section['C0']))
        demand = _section(document, 'demand')
        unknown = sorted(set(demand) - {'car_trips', 'bus_person_trips'})
        if unknown:
            raise PipelineConfigError(f'demand: unknown keys {unknown}')
        route_filter = document.get('route_filter')
        return PipelineConfig(
            base_dir=base_dir, document=dict(document), paths=paths,
            profile=str(document.get('profile', 'mixed_use')),
            service_date=document.get('service_date'), window=window,
            route_filter=tuple(route_filter) if route_filter is not None else None,
            demand_targets={key: float(value) for key, value in demand.items()}, baseline=baseline, fleet=fleet,
            scenarios=scenarios, simulation=simulation, coefficients=coefficients,
            bin_width=float(emissions.get('bin_width_s', config('emissions', 'bin_width_s'))),
            smoothing_window=int(emissions.get('smoothing_window', config('emissions', 'smoothing_window'))),
            seed=int(document.get('seed', 0)),
            output_dir=base_dir.joinpath(document.get('output_dir', 'out')),
            workers=int(document.get('workers', config('pipeline', 'workers'))))
    except PipelineConfigError:
        raise
    except (KeyError, TypeError, ValueError, TransitModeShiftError) as e:
        raise PipelineConfigError(f'invalid study configuration: {e!r}')


def load_pipeline_config(file: Union[str, Path]) -> PipelineConfig:
    file = Path(file)
    text = file.read_text(encoding='utf-8')
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise PipelineConfigError(f'{file}: line {e.lineno}: {e.msg}')
    return pipeline_config_from_dict(document, file.parent)


def load_stop_edges(file: Union[str, Path]) -> Dict[str, str]:
    """ stop_id -> edge_id from a two column CSV"""
    table = pd.read_csv(file, dtype=str, keep_default_na=False)
    if list(table.columns[:2]) != ['stop_id', 'edge_id']:
        raise ValueError(f'{file}: expected columns stop_id, edge_id')
    if table['stop_id'].duplicated().any():
        raise ValueError(f'{file}: stop {table.loc[table["stop_id"].duplicated(), "stop_id"].iloc[0]!r} '
                         f'is mapped twice')
    return dict(zip(table['stop_id'].str.strip(), table['edge_id'].str.strip()))


def check_stop_edges(stop_to_edge: Dict[str, str], graph: NetworkGraph) -> List[str]:
    return [f'stop {stop_id!r} maps to unknown edge {edge_id!r}' for stop_id, edge_id in sorted(stop_to_edge.items())
            if not graph.has_edge(edge_id)]


def check_od_zones(od: ODMatrix, graph: NetworkGraph) -> List[str]:
    unknown = [zone for zone in od.zones if not graph.has_zone(zone)]
    return [f'unknown zone(s) {", ".join(unknown)}'] if unknown else []


@dataclass
class StudyInputs:
    schedule: TransitSchedule
    graph: NetworkGraph
    stop_to_edge: Dict[str, str]
    car_od: ODMatrix
    bus_od: ODMatrix
    profile: TemporalProfile


def load_inputs(cfg: PipelineConfig) -> StudyInputs:
    cfg.require('gtfs_dir', 'network', 'car_od', 'bus_od', 'stop_edges', 'service_date')
    schedule = parse_feed(cfg.path('gtfs_dir'), cfg.service_date)
    graph = load_network(cfg.path('network'))
    stop_to_edge = load_stop_edges(cfg.path('stop_edges'))
    car_od, bus_od = load_od_matrix(cfg.path('car_od')), load_od_matrix(cfg.path('bus_od'))
    for problems in (check_stop_edges(stop_to_edge, graph), check_od_zones(car_od, graph),
                     check_od_zones(bus_od, graph)):
        if problems:
            raise ReferentialIntegrityError('', problems[0])
    return StudyInputs(schedule, graph, stop_to_edge, car_od, bus_od, resolve_profile(cfg.profile, cfg.base_dir))


def calibrated_od(cfg: PipelineConfig, od: ODMatrix, target_key: str) -> ODMatrix:
    return calibrate_total(od, cfg.demand_targets.get(target_key, od.total))


def baseline_stats(cfg: PipelineConfig) -> BaselineStats:
    """ The study baseline, or one counted from the inputs: runs in the window and the calibrated OD totals.
    Only the feed and the OD matrices are read, never the network."""
    if cfg.baseline is not None:
        return derive_baseline(*cfg.baseline, fleet=cfg.fleet)
    cfg.require('gtfs_dir', 'car_od', 'bus_od', 'service_date')
    schedule = parse_feed(cfg.path('gtfs_dir'), cfg.service_date)
    runs = runs_in_window(schedule, cfg.window, cfg.route_filter)
    passengers = calibrated_od(cfg, load_od_matrix(cfg.path('bus_od')), 'bus_person_trips').total
    cars = calibrated_od(cfg, load_od_matrix(cfg.path('car_od')), 'car_trips').total
    return derive_baseline(float(round_half_up(passengers)), len(runs), float(round_half_up(cars)), fleet=cfg.fleet)


def child_seeds(seed: int, n: int) -> List[int]:
    """ Independent integer seeds spawned from seed"""
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(n)]


def build_trip_table(cfg: PipelineConfig, inputs: StudyInputs) -> TripTable:
    car_seed, passenger_seed = child_seeds(cfg.seed, 2)
    cars = generate_trips(calibrated_od(cfg, inputs.car_od, 'car_trips'), inputs.profile, inputs.graph, 'car',
                          car_seed)
    passengers = generate_trips(calibrated_od(cfg, inputs.bus_od, 'bus_person_trips'), inputs.profile,
                                inputs.graph, 'bus_passenger', passenger_seed)
    return cars.merged(passengers)


def scenario_trips(cfg: PipelineConfig, trips: TripTable, rows: Sequence[ScenarioResult],
                   profile: TemporalProfile) -> List[Tuple[str, str, TripTable]]:
    """ (label, directory slug, trip table) for the base day and every scenario"""
    seeds = child_seeds(cfg.seed + 1, len(rows))
    tables = [(BASE_LABEL, BASE_SLUG, trips)]
    for spec, row, seed in zip(cfg.scenarios, rows, seeds):
        tables.append((row.label, spec.slug, apply_modeshift_to_trips(trips, row, seed, profile)))
    return tables


@dataclass
class ScenarioTask:
    label: str
    slug: str
    trips: TripTable
    graph: NetworkGraph
    schedule: TransitSchedule
    stop_to_edge: Dict[str, str]
    params: SimParams
    route_filter: Optional[Tuple[str, ...]]
    coefficients: Dict[str, EmissionCoefficients]
    bin_width: float
    seed: int
    directory: Path


@dataclass
class ScenarioOutcome:
    label: str
    slug: str
    start_s: float
    values: np.ndarray
    counts: dict
    emissions_by_class: Dict[str, float]
    seconds: float


def simulate_scenario(task: ScenarioTask) -> ScenarioOutcome:
    """ Simulation and emission integration of one scenario, exports written to task.directory"""
    tic = time.perf_counter()
    output = run_day(task.graph, task.trips, task.schedule, task.stop_to_edge, task.params, task.seed,
                     task.route_filter)
    write_sim_output(output, task.directory)
    ledger = integrate(output.segments_frame(), task.coefficients, task.bin_width)
    write_ledger(ledger, task.directory.joinpath('ledger.csv'))
    series = aggregate(ledger, smoothing_window=1)
    return ScenarioOutcome(task.label, task.slug, series.start_s, series.values, output.counts(),
                           {key: float(value) for key, value in ledger.per_class().items()},
                           time.perf_counter() - tic)


def align_series(outcomes: Sequence[ScenarioOutcome], bin_width: float,
                 smoothing_window: int) -> List[DailySeries]:
    """ Zero pad every scenario to the common span of bins so that they compare bin for bin"""
    starts = [int(round(outcome.start_s / bin_width)) for outcome in outcomes]
    ends = [start + len(outcome.values) for start, outcome in zip(starts, outcomes)]
    first, last = min(starts), max(ends)
    series = []
    for start, outcome in zip(starts, outcomes):
        values = np.zeros(last - first)
        values[start - first:start - first + len(outcome.values)] = outcome.values
        series.append(series_from_values(values, bin_width, first * bin_width, smoothing_window))
    return series


def comparison_payload(labels: Sequence[str], series: Sequence[DailySeries], outcomes: Sequence[ScenarioOutcome],
                       rows: Sequence[ScenarioResult]) -> dict:
    base_vehicles = outcomes[0].counts['departed']['car'] + outcomes[0].counts['departed']['bus']
    scenarios = []
    for ind, (label, item, outcome) in enumerate(zip(labels, series, outcomes)):
        report = compare(series[0], item)
        vehicles = outcome.counts['departed']['car'] + outcome.counts['departed']['bus']
        entry = dict(label=label, emissions=report.to_dict(), emissions_by_class=outcome.emissions_by_class,
                     peak_clock=seconds_to_clock(item.peak_time),
                     simulated_traffic_reduction_pct=100. * (base_vehicles - vehicles) / base_vehicles
                     if base_vehicles else 0.,
                     counts=outcome.counts)
        if ind > 0:
            entry['traffic_reduction_total_pct'] = 100. * rows[ind - 1].reduction_total_basis
            entry['traffic_reduction_car_pct'] = 100. * rows[ind - 1].reduction_car_basis
        scenarios.append(entry)
    return dict(base=labels[0], scenarios=scenarios)


def write_report(directory: Path, labels: Sequence[str], series: Sequence[DailySeries], payload: dict) -> List[Path]:
    """ comparison.json, series_plot.csv and emissions.svg"""
    files = [directory.joinpath('comparison.json'), directory.joinpath('series_plot.csv'),
             directory.joinpath('emissions.svg')]
    write_json(payload, files[0])
    write_frame(series_plot_frame(series, labels), files[1])
    plot_series(series, labels, files[2])
    return files


@dataclass
class RunManifest:
    config_digest: str
    seed: int
    settings: dict
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)
    versions: Dict[str, str] = field(default_factory=dict)
    scenarios: List[Dict[str, str]] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def software_versions() -> Dict[str, str]:
    import matplotlib
    return dict(transit_modeshift=transit_modeshift.__version__, numpy=np.__version__, pandas=pd.__version__,
                matplotlib=matplotlib.__version__)


def input_digests(cfg: PipelineConfig) -> Dict[str, str]:
    digests = {}
    for key in PATH_KEYS:
        if key not in cfg.paths:
            continue
        path = cfg.paths[key]
        files = sorted(path.glob('*.txt')) if path.is_dir() else [path]
        for file in files:
            digests[file.relative_to(cfg.base_dir).as_posix() if file.is_relative_to(cfg.base_dir)
                    else file.as_posix()] = file_digest(file)
    profile = Path(cfg.profile)
    if profile.suffix.lower() == '.csv':
        profile = profile if profile.is_absolute() else cfg.base_dir.joinpath(profile)
        digests[cfg.profile] = file_digest(profile)
    return digests


def new_manifest(cfg: PipelineConfig) -> RunManifest:
    settings = cfg.materialized()
    return RunManifest(config_digest=json_digest(settings), seed=cfg.seed, settings=settings,
                       inputs=input_digests(cfg), versions=software_versions())


@contextmanager
def stage(name: str, timings: Dict[str, float]):
    """ Time a pipeline stage and tag its failures with the stage name"""
    tic = time.perf_counter()
    logger.info(f'stage {name} started')
    try:
        yield
    except PipelineStageError:
        raise
    except (TransitModeShiftError, OSError, ValueError, KeyError) as e:
        raise PipelineStageError(name, e) from e
    timings[name] = round(time.perf_counter() - tic, 6)


@contextmanager
def staged_output(out_dir: Path):
    """ Yield a scratch directory next to out_dir; its content replaces out_dir files only on success"""
    out_dir = Path(out_dir)
    out_dir.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=f'.{out_dir.name}-staging-', dir=out_dir.parent))
    try:
        yield staging
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    out_dir.mkdir(parents=True, exist_ok=True)
    for item in sorted(staging.iterdir()):
        target = out_dir.joinpath(item.name)
        if target.is_dir():
            shutil.rmtree(target)
        elif target.exists():
            target.unlink()
        shutil.move(str(item), str(target))
    shutil.rmtree(staging, ignore_errors=True)


def output_digests(directory: Path) -> Dict[str, str]:
    return {file.relative_to(directory).as_posix(): file_digest(file)
            for file in sorted(directory.rglob('*')) if file.is_file() and file.name != 'manifest.json'}


def run_scenario_table(cfg: PipelineConfig, out_dir: Path = None) -> List[ScenarioResult]:
    rows = scenario_table_rows(baseline_stats(cfg), cfg.fleet, cfg.scenarios)
    with staged_output(out_dir or cfg.output_dir) as staging:
        write_scenario_table(rows, staging)
    return rows


def run_gen_demand(cfg: PipelineConfig, out_dir: Path = None) -> TripTable:
    inputs = load_inputs(cfg)
    trips = build_trip_table(cfg, inputs)
    with staged_output(out_dir or cfg.output_dir) as staging:
        write_trip_table(trips, staging.joinpath('trips.csv'))
    return trips


def _run_tasks(tasks: Sequence[ScenarioTask], workers: int) -> List[ScenarioOutcome]:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as executor:
            return list(executor.map(simulate_scenario, tasks))
    return [simulate_scenario(task) for task in tasks]


def run_simulate(cfg: PipelineConfig, out_dir: Path = None, scenario: str = BASE_SLUG) -> ScenarioOutcome:
    """ Simulate a single day (base or one scenario by its slug) and write its exports and series"""
    timings: Dict[str, float] = {}
    with staged_output(out_dir or cfg.output_dir) as staging:
        with stage('ingest', timings):
            inputs = load_inputs(cfg)
        with stage('demand', timings):
            trips = build_trip_table(cfg, inputs)
        with stage('scenarios', timings):
            rows = scenario_table_rows(baseline_stats(cfg), cfg.fleet, cfg.scenarios)[1:]
            tables = {slug: (label, table) for label, slug, table in scenario_trips(cfg, trips, rows,
                                                                                     inputs.profile)}
            if scenario not in tables:
                raise PipelineConfigError(f'unknown scenario {scenario!r}, expected one of {sorted(tables)}')
        label, table = tables[scenario]
        with stage('simulate', timings):
            outcome = simulate_scenario(ScenarioTask(label, scenario, table, inputs.graph, inputs.schedule,
                                                     inputs.stop_to_edge, cfg.simulation, cfg.route_filter,
                                                     cfg.coefficients, cfg.bin_width, cfg.seed, staging))
            series = align_series([outcome], cfg.bin_width, cfg.smoothing_window)[0]
            write_series(series, staging.joinpath('series.csv'))
    return outcome


def run_pipeline(cfg: PipelineConfig, out_dir: Path = None) -> RunManifest:
    """ Base day and every scenario, simulated and compared

    Raises
    ------
    PipelineStageError: naming the failed stage; nothing is left in the output directory
    """
    out_dir = Path(out_dir or cfg.output_dir)
    manifest = new_manifest(cfg)
    timings = manifest.timings
    with staged_output(out_dir) as staging:
        with stage('ingest', timings):
            inputs = load_inputs(cfg)
        with stage('demand', timings):
            trips = build_trip_table(cfg, inputs)
            write_trip_table(trips, staging.joinpath('trips.csv'))
        with stage('scenarios', timings):
            rows = scenario_table_rows(baseline_stats(cfg), cfg.fleet, cfg.scenarios)
            write_scenario_table(rows, staging)
            tables = scenario_trips(cfg, trips, rows[1:], inputs.profile)
        with stage('simulate', timings):
            tasks = [ScenarioTask(label, slug, table, inputs.graph, inputs.schedule, inputs.stop_to_edge,
                                  cfg.simulation, cfg.route_filter, cfg.coefficients, cfg.bin_width, cfg.seed,
                                  staging.joinpath(slug)) for label, slug, table in tables]
            outcomes = _run_tasks(tasks, cfg.workers)
            for outcome in outcomes:
                timings[f'simulate:{outcome.slug}'] = round(outcome.seconds, 6)
        with stage('emissions', timings):
            labels = [outcome.label for outcome in outcomes]
            series = align_series(outcomes, cfg.bin_width, cfg.smoothing_window)
            for outcome, item in zip(outcomes, series):
                write_series(item, staging.joinpath(outcome.slug, 'series.csv'))
        with stage('report', timings):
            write_report(staging, labels, series, comparison_payload(labels, series, outcomes, rows[1:]))
        manifest.scenarios = [dict(label=outcome.label, slug=outcome.slug) for outcome in outcomes]
        manifest.outputs = output_digests(staging)
        write_json(manifest.to_dict(), staging.joinpath('manifest.json'))
    logger.info(f'pipeline finished, outputs in {out_dir}')
    return manifest


def run_report(run_dir: Union[str, Path], smoothing_window: int = None) -> List[Path]:
    """ Rebuild comparison.json, series_plot.csv and emissions.svg from a run directory's series files"""
    run_dir = Path(run_dir)
    manifest = json.loads(run_dir.joinpath('manifest.json').read_text(encoding='utf-8'))
    smoothing_window = smoothing_window or manifest['settings']['emissions']['smoothing_window']
    labels = [item['label'] for item in manifest['scenarios']]
    series = [load_series(run_dir.joinpath(item['slug'], 'series.csv'), smoothing_window)
              for item in manifest['scenarios']]
    previous = json.loads(run_dir.joinpath('comparison.json').read_text(encoding='utf-8'))
    scenarios = []
    for label, item, entry in zip(labels, series, previous['scenarios']):
        entry = dict(entry, label=label, emissions=compare(series[0], item).to_dict(),
                     peak_clock=seconds_to_clock(item.peak_time))
        scenarios.append(entry)
    return write_report(run_dir, labels, series, dict(base=labels[0], scenarios=scenarios))
