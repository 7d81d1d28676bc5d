# -*- coding: utf-8 -*-
"""
Created the 17/10/2026

CSV and JSON writers for simulation, emission and scenario outputs. Every table is written through pandas with a
fixed float format and line terminator so identical results give identical bytes.
"""
import json
import math
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import numpy as np
import pandas as pd

from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift import config
from transit_modeshift.errors import IncompatibleSeriesError
from transit_modeshift.models.emissions import DailySeries, EmissionLedger, series_from_values
from transit_modeshift.models.mode_shift import ScenarioResult
from transit_modeshift.simulation.meso import SimOutput

logger = set_logger(get_module_name(__file__))

FLOAT_FORMAT = config('pipeline', 'float_format')
SCENARIO_FLOAT_FORMAT = config('pipeline', 'scenario_float_format')

SEGMENT_HEADER = ['vehicle_id', 'class', 'edge_id', 'enter_s', 'exit_s', 'mean_speed_mps']
BUS_KPI_COLUMNS = ['run_id', 'route_id', 'stop_id', 'sched_s', 'actual_s', 'sched_dep_s', 'actual_dep_s',
                   'boardings', 'alightings', 'load_factor']
WAIT_COLUMNS = ['run_id', 'trip_id', 'stop_id', 'arrive_s', 'board_s', 'wait_s']
LEDGER_HEADER = ['vehicle_id', 'class', 'edge_id', 'bin_start_s', 'grams']
SERIES_COLUMNS = ['bin_start_s', 'grams', 'smoothed_grams']
SCENARIO_COLUMNS = ['label', 'U0', 'U1', 'multiplier', 'P0', 'P1', 'delta_passengers', 'cars_removed',
                    'reduction_car_basis', 'reduction_total_basis', 'reduction_car_pct', 'reduction_total_pct',
                    'T0', 'T1', 'avg_occupancy_before', 'avg_occupancy_after', 'required_runs']


def write_frame(frame: pd.DataFrame, file: Union[str, Path], float_format: str = FLOAT_FORMAT):
    frame.to_csv(file, index=False, float_format=float_format, lineterminator='\n')


def _finite(value):
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(item) for item in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if not math.isfinite(value) else float(value)
    return value


def write_json(payload, file: Union[str, Path]):
    """ Sorted keys, non finite numbers as null, trailing newline"""
    Path(file).write_text(json.dumps(_finite(payload), indent=1, sort_keys=True) + '\n', encoding='utf-8')


def segments_frame(output: SimOutput) -> pd.DataFrame:
    frame = output.segments_frame()
    frame.columns = SEGMENT_HEADER
    return frame


def bus_kpis_frame(output: SimOutput) -> pd.DataFrame:
    rows = [(kpi.run_id, kpi.route_id, visit.stop_id, visit.scheduled_arrival, visit.actual_arrival,
             visit.scheduled_departure, visit.actual_departure, visit.boardings, visit.alightings,
             visit.load_factor) for kpi in output.bus_kpis for visit in kpi.stops]
    return pd.DataFrame(rows, columns=BUS_KPI_COLUMNS)


def waits_frame(output: SimOutput) -> pd.DataFrame:
    rows = [(wait.run_id, wait.trip_id, wait.stop_id, wait.arrive_s, wait.board_s, wait.wait)
            for kpi in output.bus_kpis for wait in kpi.waits]
    return pd.DataFrame(rows, columns=WAIT_COLUMNS)


def write_sim_output(output: SimOutput, directory: Union[str, Path]) -> List[Path]:
    """ segments.csv, bus_kpis.csv and waits.csv"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = []
    for name, frame in (('segments.csv', segments_frame(output)), ('bus_kpis.csv', bus_kpis_frame(output)),
                        ('waits.csv', waits_frame(output))):
        write_frame(frame, directory.joinpath(name))
        files.append(directory.joinpath(name))
    return files


def write_ledger(ledger: EmissionLedger, file: Union[str, Path]):
    frame = ledger.frame.copy()
    frame.columns = LEDGER_HEADER
    write_frame(frame, file)


def write_series(series: DailySeries, file: Union[str, Path]):
    write_frame(series.to_frame()[SERIES_COLUMNS], file)


def load_series(file: Union[str, Path], smoothing_window: int = None) -> DailySeries:
    """ Rebuild a DailySeries from its CSV (the smoothed column is recomputed)"""
    frame = pd.read_csv(file)
    missing = [col for col in SERIES_COLUMNS[:2] if col not in frame.columns]
    if missing:
        raise IncompatibleSeriesError(f'{file}: missing series columns {missing}')
    starts = frame['bin_start_s'].to_numpy(dtype=float)
    widths = np.unique(np.round(np.diff(starts), 9))
    if len(widths) > 1:
        raise IncompatibleSeriesError(f'{file}: bins are not evenly spaced')
    bin_width = float(widths[0]) if len(widths) else float(config('emissions', 'bin_width_s'))
    smoothing_window = int(smoothing_window if smoothing_window is not None
                           else config('emissions', 'smoothing_window'))
    return series_from_values(frame['grams'].to_numpy(dtype=float), bin_width, starts[0], smoothing_window)


def series_plot_frame(series: Sequence[DailySeries], labels: Sequence[str]) -> pd.DataFrame:
    """ One row per bin, one smoothed column per series, clock time in hours for plotting"""
    reference = series[0]
    frame = pd.DataFrame(dict(bin_start_s=reference.bin_starts, hour=reference.bin_starts / 3600.))
    for label, item in zip(labels, series):
        if len(item.values) != len(reference.values) or item.start_s != reference.start_s:
            raise IncompatibleSeriesError(f'series {label} does not share the horizon of {labels[0]}')
        frame[label] = item.smoothed
    return frame


def scenario_table_frame(rows: Iterable[ScenarioResult]) -> pd.DataFrame:
    records = []
    for row in rows:
        record = row.to_dict()
        record.update(reduction_car_pct=100. * row.reduction_car_basis,
                      reduction_total_pct=100. * row.reduction_total_basis)
        records.append(record)
    return pd.DataFrame(records, columns=SCENARIO_COLUMNS)


def write_scenario_table(rows: Sequence[ScenarioResult], directory: Union[str, Path]) -> List[Path]:
    """ scenario_table.csv and scenario_table.json, one row per scenario in order"""
    directory = Path(directory)
    frame = scenario_table_frame(rows)
    csv_file, json_file = directory.joinpath('scenario_table.csv'), directory.joinpath('scenario_table.json')
    write_frame(frame, csv_file, SCENARIO_FLOAT_FORMAT)
    write_json(dict(rows=[dict(zip(SCENARIO_COLUMNS, record)) for record in frame.itertuples(index=False)]),
               json_file)
    logger.info(f'scenario table written to {directory} ({len(frame)} rows)')
    return [csv_file, json_file]
