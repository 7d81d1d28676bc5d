# -*- coding: utf-8 -*-
"""
Created the 12/10/2026

Shared helpers: configuration, clock-time conversions and file digests
"""
import hashlib
import json
from pathlib import Path
from typing import Iterable, Tuple, Union

from pymodaq_utils.config import BaseConfig


class Config(BaseConfig):
    """Main class to deal with configuration values for this package"""
    config_template_path = Path(__file__).parent.joinpath('resources/config_template.toml')
    config_name = f"config_{__package__}"


def clock_to_seconds(clock: Union[str, int, float]) -> int:
    """ Convert a 'HH:MM:SS' (or 'H:MM:SS') clock string into seconds since midnight

    Hours may exceed 23 (GTFS convention for trips running past midnight). Numbers are
    returned as is.
    """
    if isinstance(clock, (int, float)):
        return int(clock)
    parts = clock.strip().split(':')
    if len(parts) != 3:
        raise ValueError(f'{clock!r} is not a HH:MM:SS clock time')
    hours, mins, secs = (int(part) for part in parts)
    if not (0 <= mins < 60 and 0 <= secs < 60 and hours >= 0):
        raise ValueError(f'{clock!r} is not a valid clock time')
    return hours * 3600 + mins * 60 + secs


def seconds_to_clock(seconds: float) -> str:
    seconds = int(round(seconds))
    hours, remainder = divmod(seconds, 3600)
    mins, secs = divmod(remainder, 60)
    return f'{hours:02d}:{mins:02d}:{secs:02d}'


def parse_window(window: Iterable[Union[str, int, float]]) -> Tuple[int, int]:
    start, end = (clock_to_seconds(value) for value in window)
    if not start < end:
        raise ValueError(f'window start {start} must be strictly before end {end}')
    return start, end


def file_digest(path: Union[str, Path]) -> str:
    sha = hashlib.sha256()
    with open(path, 'rb') as fid:
        for chunk in iter(lambda: fid.read(1 << 20), b''):
            sha.update(chunk)
    return f'sha256:{sha.hexdigest()}'


def json_digest(payload) -> str:
    """ Digest of the canonical (sorted keys, compact) JSON rendering of payload"""
    text = json.dumps(payload, sort_keys=True, separators=(',', ':'))
    return f'sha256:{hashlib.sha256(text.encode("utf-8")).hexdigest()}'
