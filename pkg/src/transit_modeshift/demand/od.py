# -*- coding: utf-8 -*-
"""
Created the 13/10/2026

Origin-destination matrices: CSV with a header row and a first column of zone ids, cell (i, j) is
trips/day from zone i to zone j.
"""
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd

from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift.errors import DegenerateDemandError

logger = set_logger(get_module_name(__file__))


@dataclass(frozen=True, eq=False)
class ODMatrix:
    zones: Tuple[str, ...]
    trips: np.ndarray

    def __post_init__(self):
        trips = np.array(self.trips, dtype=float)
        object.__setattr__(self, 'zones', tuple(self.zones))
        if trips.ndim != 2 or trips.shape[0] != trips.shape[1] or trips.shape[0] != len(self.zones):
            raise ValueError(f'OD matrix must be square and match its {len(self.zones)} zones, '
                             f'got shape {trips.shape}')
        if len(set(self.zones)) != len(self.zones):
            raise ValueError('OD matrix zones must be unique')
        if not np.all(np.isfinite(trips)) or np.any(trips < 0):
            raise ValueError('OD matrix entries must be finite and non-negative')
        trips.flags.writeable = False
        object.__setattr__(self, 'trips', trips)

    def __eq__(self, other):
        if not isinstance(other, ODMatrix):
            return NotImplemented
        return self.zones == other.zones and np.array_equal(self.trips, other.trips)

    @property
    def total(self) -> float:
        return float(self.trips.sum())

    def scaled(self, factor: float) -> 'ODMatrix':
        return ODMatrix(self.zones, self.trips * factor)


def calibrate_total(od: ODMatrix, target_total: float) -> ODMatrix:
    """ Scale every cell by target_total / current total (AADT calibration)

    A matrix already at the target (to 1e-12 relative) is returned unchanged, which makes calibration
    idempotent.
    """
    if target_total < 0:
        raise ValueError(f'target total must be non-negative, got {target_total}')
    total = od.total
    if total == 0.:
        if target_total > 0:
            raise DegenerateDemandError(f'cannot calibrate an all-zero OD matrix to {target_total} trips/day')
        return od
    if math.isclose(total, target_total, rel_tol=1e-12, abs_tol=0.):
        return od
    logger.debug(f'OD calibration factor {target_total / total:.6g} ({total:.6g} -> {target_total:.6g})')
    return od.scaled(target_total / total)


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def apportion_largest_remainder(values: np.ndarray, total: int) -> np.ndarray:
    """ Integer counts summing to total, each cell floor(value) or floor(value) + 1

    Remaining units go to the largest fractional parts, ties to the lowest flat (row-major) index.
    """
    values = np.asarray(values, dtype=float)
    floors = np.floor(values)
    counts = floors.astype(np.int64)
    remaining = int(total - counts.sum())
    if remaining < 0 or remaining > values.size:
        raise ValueError(f'cannot apportion {values.sum()} into {total} units')
    if remaining:
        fractions = (values - floors).ravel()
        order = np.lexsort((np.arange(fractions.size), -fractions))
        flat = counts.ravel()
        flat[order[:remaining]] += 1
        counts = flat.reshape(values.shape)
    return counts


def load_od_matrix(file: Union[str, Path]) -> ODMatrix:
    table = pd.read_csv(file, index_col=0, dtype=str, keep_default_na=False)
    table.index = table.index.str.strip()
    table.columns = [str(col).strip() for col in table.columns]
    if list(table.index) != list(table.columns):
        raise ValueError(f'{file}: row zones {list(table.index)} differ from column zones {list(table.columns)}')
    return ODMatrix(tuple(table.columns), table.to_numpy(dtype=float))


def write_od_matrix(od: ODMatrix, file: Union[str, Path], float_format='%.6f'):
    table = pd.DataFrame(od.trips, index=pd.Index(od.zones, name='zone'), columns=list(od.zones))
    table.to_csv(file, float_format=float_format, lineterminator='\n')
