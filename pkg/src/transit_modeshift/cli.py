# -*- coding: utf-8 -*-
"""
Created the 18/10/2026

Command line entry point: transit-modeshift <command> --config study.json --out dir --seed n

Exit codes: 0 success, 1 runtime failure, 2 validation failure.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from pymodaq_utils.logger import set_logger, get_module_name

from transit_modeshift import __version__
from transit_modeshift.bundles import bundle_names, make_bundle
from transit_modeshift.errors import TransitModeShiftError, PipelineConfigError
from transit_modeshift.exporters import write_json
from transit_modeshift.models.derivation import derivation_report, check_fleet_defaults
from transit_modeshift.models.mode_shift import FleetParams
from transit_modeshift.pipeline import (PipelineConfig, load_pipeline_config, run_scenario_table, run_gen_demand,
                                        run_simulate, run_pipeline, run_report, BASE_SLUG)
from transit_modeshift.validation import validate_study

logger = set_logger(get_module_name(__file__))

EXIT_OK, EXIT_RUNTIME, EXIT_INVALID = 0, 1, 2


def _study(args: argparse.Namespace) -> PipelineConfig:
    if args.config is None:
        raise PipelineConfigError(f'{args.command} needs --config')
    return load_pipeline_config(args.config).with_seed(args.seed)


def _out(args: argparse.Namespace, cfg: Optional[PipelineConfig] = None) -> Path:
    if args.out is not None:
        return Path(args.out)
    if cfg is not None:
        return cfg.output_dir
    raise PipelineConfigError(f'{args.command} needs --out')


def _cmd_validate(args: argparse.Namespace) -> int:
    if args.config is None:
        raise PipelineConfigError('validate needs --config')
    diagnostics = validate_study(args.config)
    for diagnostic in diagnostics:
        print(diagnostic)
    if args.out is not None:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        write_json(dict(diagnostics=[dict(source=item.source, message=item.message) for item in diagnostics]),
                   Path(args.out).joinpath('validation.json'))
    if diagnostics:
        print(f'{len(diagnostics)} problem(s) found', file=sys.stderr)
        return EXIT_INVALID
    print('study is valid')
    return EXIT_OK


def _cmd_scenario_table(args: argparse.Namespace) -> int:
    cfg = _study(args)
    rows = run_scenario_table(cfg, _out(args, cfg))
    for row in rows:
        print(f'{row.label:>5}  U1={row.U1:.4f}  P1={row.P1:g}  cars removed={row.cars_removed:g}  T1={row.T1:g}')
    return EXIT_OK


def _cmd_gen_demand(args: argparse.Namespace) -> int:
    cfg = _study(args)
    trips = run_gen_demand(cfg, _out(args, cfg))
    print(f'{trips.count("car")} car trips, {trips.count("bus_passenger")} bus passenger trips')
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _study(args)
    outcome = run_simulate(cfg, _out(args, cfg), args.scenario)
    print(json.dumps(outcome.counts, sort_keys=True))
    return EXIT_OK


def _cmd_run_pipeline(args: argparse.Namespace) -> int:
    cfg = _study(args)
    manifest = run_pipeline(cfg, _out(args, cfg))
    print(f'{len(manifest.scenarios)} scenarios simulated, {len(manifest.outputs)} files written')
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    cfg = _study(args) if args.config is not None else None
    files = run_report(_out(args, cfg))
    for file in files:
        print(file)
    return EXIT_OK


def _cmd_make_bundle(args: argparse.Namespace) -> int:
    print(make_bundle(args.name, _out(args)))
    return EXIT_OK


def _cmd_derive_constants(args: argparse.Namespace) -> int:
    report = derivation_report()
    fleet = _study(args).fleet if args.config is not None else FleetParams()
    problems = check_fleet_defaults(fleet)
    report.update(fleet=fleet.to_dict(), problems=problems)
    if args.out is not None:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        write_json(report, Path(args.out).joinpath('derived_constants.json'))
    print(json.dumps(report, indent=1, sort_keys=True))
    return EXIT_INVALID if problems else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='transit-modeshift',
                                     description='Bus mode-shift scenarios, day simulation and CO2 comparison')
    parser.add_argument('--version', action='version', version=__version__)
    sub = parser.add_subparsers(dest='command', required=True)

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        command = sub.add_parser(name, help=help)
        command.add_argument('--config', type=str, default=None, help='study configuration (JSON)')
        command.add_argument('--out', type=str, default=None, help='output directory')
        command.add_argument('--seed', type=int, default=None, help='overrides the study seed')
        command.set_defaults(func=func)
        return command

    add('validate', _cmd_validate, 'Check that every input loads and cross-references')
    add('scenario-table', _cmd_scenario_table, 'Scenario arithmetic table, no simulation')
    add('gen-demand', _cmd_gen_demand, 'Generate the base day trip table')
    simulate = add('simulate', _cmd_simulate, 'Simulate one day (base or a scenario)')
    simulate.add_argument('--scenario', type=str, default=BASE_SLUG, help='base, or a scenario slug such as u50')
    add('run-pipeline', _cmd_run_pipeline, 'Full chain for the base day and every scenario')
    add('report', _cmd_report, 'Rebuild comparison and chart from a run-pipeline output directory')
    bundle = add('make-bundle', _cmd_make_bundle, 'Write a synthetic study bundle')
    bundle.add_argument('--name', choices=bundle_names(), required=True)
    add('derive-constants', _cmd_derive_constants, 'Re-derive bus capacity and car occupancy, check the fleet')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args))
    except PipelineConfigError as e:
        logger.error(str(e))
        print(f'error: {e}', file=sys.stderr)
        return EXIT_INVALID
    except (TransitModeShiftError, OSError, ValueError) as e:
        logger.error(str(e))
        print(f'error: {e}', file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == '__main__':
    raise SystemExit(main())
