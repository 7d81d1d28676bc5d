# -*- coding: utf-8 -*-
"""
Created the 13/10/2026

Temporal departure profiles: 96 weights, one per 15 minute bin of the day.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from pymodaq_utils.enums import BaseEnum, enum_checker

from transit_modeshift.errors import UnknownProfileError

N_BINS = 96
BIN_S = 900


class ProfileName(BaseEnum):
    mixed_use = 0
    residential_bimodal = 1
    uniform = 2


@dataclass(frozen=True, eq=False)
class TemporalProfile:
    name: str
    weights: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        if weights.shape != (N_BINS,):
            raise ValueError(f'profile {self.name}: expected {N_BINS} weights, got {weights.shape}')
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise ValueError(f'profile {self.name}: weights must be finite and non-negative')
        if abs(weights.sum() - 1.) > 1e-9:
            raise ValueError(f'profile {self.name}: weights sum to {weights.sum()!r}, not 1')
        weights.flags.writeable = False
        object.__setattr__(self, 'weights', weights)

    def __eq__(self, other):
        if not isinstance(other, TemporalProfile):
            return NotImplemented
        return self.name == other.name and np.array_equal(self.weights, other.weights)

    def weight_at(self, seconds: float) -> float:
        return float(self.weights[int(seconds // BIN_S) % N_BINS])


def _bin_centers_h() -> np.ndarray:
    return (np.arange(N_BINS) * BIN_S + BIN_S / 2) / 3600.


def _normalized(name: str, shape: np.ndarray) -> TemporalProfile:
    return TemporalProfile(name, shape / shape.sum())


def _gaussian(hours: np.ndarray, center: float, sigma: float) -> np.ndarray:
    return np.exp(-0.5 * ((hours - center) / sigma) ** 2)


def builtin_profile(name: Union[str, ProfileName]) -> TemporalProfile:
    """ Shipped profiles

    * mixed_use: low night level, morning ramp from 05:00, plateau 07:00-19:00 with mild bumps at 08:00 and
      17:30, evening decay until 23:00
    * residential_bimodal: commute peaks centered 07:30 and 17:00 over a low midday level
    * uniform: 1/96 everywhere
    """
    try:
        name = enum_checker(ProfileName, name)
    except ValueError:
        raise UnknownProfileError(f'unknown profile {name!r}, expected one of {ProfileName.names()}')
    hours = _bin_centers_h()
    if name == ProfileName.uniform:
        return TemporalProfile(name.name, np.full(N_BINS, 1. / N_BINS))
    if name == ProfileName.mixed_use:
        shape = np.full(N_BINS, 0.15)
        ramp_up = (hours >= 5.) & (hours < 7.)
        shape[ramp_up] = 0.15 + 0.85 * (hours[ramp_up] - 5.) / 2.
        plateau = (hours >= 7.) & (hours < 19.)
        shape[plateau] = 1. + 0.2 * _gaussian(hours[plateau], 8., 0.75) \
            + 0.15 * _gaussian(hours[plateau], 17.5, 1.)
        ramp_down = (hours >= 19.) & (hours < 23.)
        shape[ramp_down] = 1. - 0.85 * (hours[ramp_down] - 19.) / 4.
        return _normalized(name.name, shape)
    shape = np.where((hours >= 5.) & (hours < 22.), 0.12, 0.03)
    shape = shape + _gaussian(hours, 7.5, 0.75) + _gaussian(hours, 17., 0.75)
    return _normalized(name.name, shape)


def load_profile(file: Union[str, Path], name: str = '') -> TemporalProfile:
    """ CSV of 96 rows (bin_start_seconds, weight)"""
    table = pd.read_csv(file, float_precision='round_trip')
    if list(table.columns[:2]) != ['bin_start_seconds', 'weight'] or len(table) != N_BINS:
        raise ValueError(f'{file}: expected {N_BINS} rows of (bin_start_seconds, weight)')
    if not np.array_equal(table['bin_start_seconds'].to_numpy(), np.arange(N_BINS) * BIN_S):
        raise ValueError(f'{file}: bin_start_seconds must be 0, 900, ..., {(N_BINS - 1) * BIN_S}')
    return TemporalProfile(name or Path(file).stem, table['weight'].to_numpy(dtype=float))


def write_profile(profile: TemporalProfile, file: Union[str, Path]):
    pd.DataFrame(dict(bin_start_seconds=np.arange(N_BINS) * BIN_S, weight=profile.weights)).to_csv(
        file, index=False, float_format='%.17g', lineterminator='\n')


def resolve_profile(name_or_path: Union[str, Path], base_dir: Path = None) -> TemporalProfile:
    """ Builtin profile name, or a profile CSV path (relative paths resolve against base_dir)"""
    if str(name_or_path) in ProfileName.names():
        return builtin_profile(str(name_or_path))
    path = Path(name_or_path)
    if base_dir is not None and not path.is_absolute():
        path = base_dir.joinpath(path)
    if path.suffix.lower() != '.csv':
        raise UnknownProfileError(f'unknown profile {name_or_path!r}, expected one of {ProfileName.names()} '
                                  f'or a CSV file')
    return load_profile(path)
