# -*- coding: utf-8 -*-
"""
Created the 17/10/2026

Input checks of a study. Every violation becomes a Diagnostic; a failing input only suppresses the checks that
need its content, never the independent ones.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift.demand import load_od_matrix, resolve_profile
from transit_modeshift.errors import TransitModeShiftError
from transit_modeshift.ingest import parse_feed, runs_in_window
from transit_modeshift.models import derive_baseline, scenario_table_rows
from transit_modeshift.network import load_network
from transit_modeshift.pipeline import (PipelineConfig, PATH_KEYS, load_pipeline_config, load_stop_edges,
                                        check_stop_edges, check_od_zones, baseline_stats)

logger = set_logger(get_module_name(__file__))

LOAD_ERRORS = (TransitModeShiftError, OSError, ValueError, KeyError)


@dataclass(frozen=True)
class Diagnostic:
    source: str
    message: str

    def __str__(self):
        return f'{self.source}: {self.message}'


def validate_study(file: Union[str, Path]) -> List[Diagnostic]:
    """ Diagnostics of a study configuration, empty when every input loads and cross-references"""
    try:
        cfg = load_pipeline_config(file)
    except LOAD_ERRORS as e:
        return [Diagnostic('config', str(e))]
    return validate_config(cfg)


def _attempt(diagnostics: List[Diagnostic], source: str, loader, *args):
    try:
        return loader(*args)
    except LOAD_ERRORS as e:
        diagnostics.append(Diagnostic(source, str(e)))
        return None


def validate_config(cfg: PipelineConfig) -> List[Diagnostic]:
    diagnostics: List[Diagnostic] = []
    for key in PATH_KEYS:
        if key in cfg.paths and not cfg.paths[key].exists():
            diagnostics.append(Diagnostic(key, f'{cfg.paths[key]} does not exist'))
    missing = {diagnostic.source for diagnostic in diagnostics}

    def present(key: str) -> bool:
        return key in cfg.paths and key not in missing

    schedule = runs = None
    if present('gtfs_dir'):
        if cfg.service_date is None:
            diagnostics.append(Diagnostic('service_date', 'a service date is needed to read the feed'))
        else:
            schedule = _attempt(diagnostics, 'gtfs_dir', parse_feed, cfg.paths['gtfs_dir'], cfg.service_date)
            if schedule is not None:
                runs = _attempt(diagnostics, 'route_filter', runs_in_window, schedule, cfg.window,
                                cfg.route_filter)
    graph = _attempt(diagnostics, 'network', load_network, cfg.paths['network']) if present('network') else None
    ods = {}
    for key in ('car_od', 'bus_od'):
        if present(key):
            ods[key] = _attempt(diagnostics, key, load_od_matrix, cfg.paths[key])
            if ods[key] is not None and graph is not None:
                diagnostics.extend(Diagnostic(key, problem) for problem in check_od_zones(ods[key], graph))
    _attempt(diagnostics, 'profile', resolve_profile, cfg.profile, cfg.base_dir)

    if present('stop_edges'):
        stop_to_edge = _attempt(diagnostics, 'stop_edges', load_stop_edges, cfg.paths['stop_edges'])
        if stop_to_edge is not None:
            if graph is not None:
                diagnostics.extend(Diagnostic('stop_edges', problem)
                                   for problem in check_stop_edges(stop_to_edge, graph))
            if runs is not None:
                unmapped = sorted({stop_id for run in runs for stop_id in run.stop_ids} - set(stop_to_edge))
                if unmapped:
                    diagnostics.append(Diagnostic('stop_edges', f'stop(s) without edge: {", ".join(unmapped)}'))

    if cfg.baseline is not None:
        base = _attempt(diagnostics, 'baseline', derive_baseline, *cfg.baseline, cfg.fleet)
    elif runs is not None and all(ods.get(key) is not None for key in ('car_od', 'bus_od')):
        base = _attempt(diagnostics, 'baseline', baseline_stats, cfg)
    else:
        base = None
    if base is not None:
        _attempt(diagnostics, 'scenarios', scenario_table_rows, base, cfg.fleet, cfg.scenarios)

    for diagnostic in diagnostics:
        logger.warning(str(diagnostic))
    return diagnostics
