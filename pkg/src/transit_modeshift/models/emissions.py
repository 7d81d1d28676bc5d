# -*- coding: utf-8 -*-
"""
Created the 15/10/2026

CO2 accounting from trajectories.

The emission rate is an average-speed curve, quadratic in the mean speed of a segment:
rate(v) = c0 + c1 v + c2 v**2 in g/s, v in m/s. Each segment emits rate(mean speed) x duration, split over fixed
time bins in proportion to the overlap.
"""
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Dict, Mapping, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift import config
from transit_modeshift.errors import SimConfigurationError, EmptySeriesError, IncompatibleSeriesError

logger = set_logger(get_module_name(__file__))

SEGMENT_COLUMNS = ['vehicle_id', 'vehicle_class', 'edge_id', 'enter_s', 'exit_s', 'mean_speed_mps']
LEDGER_COLUMNS = ['vehicle_id', 'vehicle_class', 'edge_id', 'bin_start_s', 'grams']
SPEED_RANGE = (0., 60.)


@dataclass(frozen=True)
class EmissionCoefficients:
    c0: float
    c1: float
    c2: float

    def __post_init__(self):
        self.validate()

    def validate(self, speed_range: Tuple[float, float] = SPEED_RANGE):
        """ Reject coefficient sets giving a negative rate anywhere on the speed range"""
        low, high = speed_range
        candidates = [low, high]
        if self.c2 != 0:
            vertex = -self.c1 / (2 * self.c2)
            if low < vertex < high:
                candidates.append(vertex)
        worst = min(float(self.rate(v)) for v in candidates)
        if worst < 0:
            raise ValueError(f'emission coefficients {self} give a negative rate ({worst:g} g/s) on '
                             f'[{low:g}, {high:g}] m/s')

    def rate(self, speed):
        """ grams per second at speed (m/s), scalar or array"""
        return self.c0 + self.c1 * speed + self.c2 * np.square(speed)

    def grams_per_km(self, speed: float) -> float:
        return float(self.rate(speed) / speed * 1000.)

    def scaled(self, factor: float) -> 'EmissionCoefficients':
        return EmissionCoefficients(self.c0 * factor, self.c1 * factor, self.c2 * factor)

    def to_list(self) -> list:
        return [self.c0, self.c1, self.c2]

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> 'EmissionCoefficients':
        if len(values) != 3:
            raise ValueError(f'expected (c0, c1, c2), got {values!r}')
        return cls(*(float(value) for value in values))


def default_coefficients() -> Dict[str, EmissionCoefficients]:
    """ Calibration knobs from the configuration, not measured ground truth"""
    return {vclass: EmissionCoefficients.from_sequence(config('emissions', vclass)) for vclass in ('car', 'bus')}


@dataclass(frozen=True, eq=False)
class EmissionLedger:
    frame: pd.DataFrame
    bin_width: float

    @property
    def total(self) -> float:
        return float(self.frame['grams'].sum())

    def __len__(self):
        return len(self.frame)

    def per_vehicle(self) -> pd.Series:
        return self.frame.groupby('vehicle_id', sort=True)['grams'].sum()

    def per_class(self) -> pd.Series:
        return self.frame.groupby('vehicle_class', sort=True)['grams'].sum()

    def to_csv(self, file: Union[str, Path], float_format='%.6f'):
        self.frame.to_csv(file, index=False, float_format=float_format, lineterminator='\n')


def _segments_frame(segments) -> pd.DataFrame:
    if isinstance(segments, pd.DataFrame):
        return segments
    return pd.DataFrame.from_records(list(segments), columns=SEGMENT_COLUMNS)


def integrate(segments, coefficients: Mapping[str, EmissionCoefficients] = None,
              bin_width: float = None) -> EmissionLedger:
    """ Grams of CO2 per (vehicle, edge, time bin)

    Parameters
    ----------
    segments: DataFrame with SEGMENT_COLUMNS or iterable of records in that order
    coefficients: EmissionCoefficients per vehicle class (defaults from the configuration)
    bin_width: seconds (default from the configuration)
    """
    coefficients = coefficients if coefficients is not None else default_coefficients()
    bin_width = float(bin_width if bin_width is not None else config('emissions', 'bin_width_s'))
    frame = _segments_frame(segments)
    missing = sorted(set(frame['vehicle_class']) - set(coefficients))
    if missing:
        raise SimConfigurationError(f'no emission coefficients for vehicle class(es) {", ".join(missing)}')
    if len(frame) == 0:
        return EmissionLedger(pd.DataFrame(columns=LEDGER_COLUMNS), bin_width)

    enter = frame['enter_s'].to_numpy(dtype=float)
    exit_ = frame['exit_s'].to_numpy(dtype=float)
    speed = frame['mean_speed_mps'].to_numpy(dtype=float)
    classes = frame['vehicle_class'].to_numpy()
    rate = np.empty(len(frame))
    for vclass, coeffs in coefficients.items():
        mask = classes == vclass
        rate[mask] = coeffs.rate(speed[mask])

    first = np.floor(enter / bin_width).astype(np.int64)
    last = np.maximum(np.ceil(exit_ / bin_width).astype(np.int64) - 1, first)
    n_bins = last - first + 1
    owner = np.repeat(np.arange(len(frame)), n_bins)
    offset = np.arange(owner.size) - np.repeat(np.cumsum(n_bins) - n_bins, n_bins)
    bins = first[owner] + offset
    low = np.maximum(enter[owner], bins * bin_width)
    high = np.minimum(exit_[owner], (bins + 1) * bin_width)
    keep = high > low
    owner, bins = owner[keep], bins[keep]
    grams = rate[owner] * (high[keep] - low[keep])

    ledger = pd.DataFrame({'vehicle_id': frame['vehicle_id'].to_numpy()[owner],
                           'vehicle_class': classes[owner],
                           'edge_id': frame['edge_id'].to_numpy()[owner],
                           'bin_start_s': bins * bin_width,
                           'grams': grams}, columns=LEDGER_COLUMNS)
    return EmissionLedger(ledger, bin_width)


@dataclass(frozen=True, eq=False)
class DailySeries:
    bin_width: float
    start_s: float
    values: np.ndarray
    smoothed: np.ndarray
    smoothing_window: int
    total: float
    peak_time: float
    peak_value: float

    @property
    def bin_starts(self) -> np.ndarray:
        return self.start_s + np.arange(len(self.values)) * self.bin_width

    @property
    def end_s(self) -> float:
        return self.start_s + len(self.values) * self.bin_width

    def value_at(self, seconds: float, smoothed=True) -> float:
        series = self.smoothed if smoothed else self.values
        return float(series[int((seconds - self.start_s) // self.bin_width)])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(dict(bin_start_s=self.bin_starts, grams=self.values, smoothed_grams=self.smoothed))

    def to_csv(self, file: Union[str, Path], float_format='%.6f'):
        self.to_frame().to_csv(file, index=False, float_format=float_format, lineterminator='\n')


def smooth(values: np.ndarray, window: int) -> np.ndarray:
    """ Centered moving average, averaging over the available bins at both ends

    The ends are not mass preserving: series totals are always taken on the raw bins.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f'smoothing window must be a positive odd number of bins, got {window}')
    kernel = np.ones(window)
    return np.convolve(values, kernel, mode='same') / np.convolve(np.ones(len(values)), kernel, mode='same')


def series_from_values(values: np.ndarray, bin_width: float, start_s: float, smoothing_window: int) -> DailySeries:
    values = np.asarray(values, dtype=float)
    if len(values) == 0:
        raise EmptySeriesError('cannot build a series without bins')
    smoothed = smooth(values, smoothing_window)
    peak = int(np.argmax(smoothed))
    return DailySeries(bin_width=float(bin_width), start_s=float(start_s), values=values, smoothed=smoothed,
                       smoothing_window=smoothing_window, total=float(values.sum()),
                       peak_time=float(start_s + peak * bin_width), peak_value=float(smoothed[peak]))


def aggregate(ledger: EmissionLedger, smoothing_window: int = None,
              horizon: Tuple[float, float] = None) -> DailySeries:
    """ Per-bin grams over the horizon, with the peak located on the smoothed series (earliest bin on ties)

    Parameters
    ----------
    ledger: EmissionLedger
    smoothing_window: odd number of bins (configuration default, 5 one-minute bins)
    horizon: (start, end) seconds; defaults to the bins spanned by the ledger
    """
    if len(ledger) == 0:
        raise EmptySeriesError('the emission ledger is empty')
    smoothing_window = int(smoothing_window if smoothing_window is not None
                           else config('emissions', 'smoothing_window'))
    bin_width = ledger.bin_width
    indices = np.rint(ledger.frame['bin_start_s'].to_numpy(dtype=float) / bin_width).astype(np.int64)
    if horizon is None:
        start_ind, n_bins = int(indices.min()), int(indices.max() - indices.min() + 1)
    else:
        start_ind = int(np.floor(horizon[0] / bin_width))
        n_bins = int(np.ceil(horizon[1] / bin_width)) - start_ind
        if indices.min() < start_ind or indices.max() >= start_ind + n_bins:
            raise IncompatibleSeriesError(f'ledger bins fall outside the horizon {horizon}')
    values = np.bincount(indices - start_ind, weights=ledger.frame['grams'].to_numpy(dtype=float),
                         minlength=n_bins)
    return series_from_values(values, bin_width, start_ind * bin_width, smoothing_window)


@dataclass(frozen=True)
class ReductionReport:
    total_base: float
    total_variant: float
    percent_reduction: float
    peak_time_base: float
    peak_time_variant: float
    peak_shift_s: float

    def to_dict(self) -> dict:
        return asdict(self)


def compare(base: DailySeries, variant: DailySeries) -> ReductionReport:
    """ Totals, percent reduction 100 x (base - variant) / base and the peak shift (variant - base, s)"""
    if base.bin_width != variant.bin_width or base.start_s != variant.start_s or \
            len(base.values) != len(variant.values):
        raise IncompatibleSeriesError(f'series differ in bin width or horizon: [{base.start_s}, {base.end_s}) / '
                                      f'{base.bin_width} s vs [{variant.start_s}, {variant.end_s}) / '
                                      f'{variant.bin_width} s')
    if base.total == 0:
        raise EmptySeriesError('the base series emits nothing, no reduction can be computed')
    return ReductionReport(total_base=base.total, total_variant=variant.total,
                           percent_reduction=100. * (base.total - variant.total) / base.total,
                           peak_time_base=base.peak_time, peak_time_variant=variant.peak_time,
                           peak_shift_s=variant.peak_time - base.peak_time)
