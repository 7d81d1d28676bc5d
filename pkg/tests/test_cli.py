# -*- coding: utf-8 -*-
"""
Created the 18/10/2026
"""
import json
import shutil

import pandas as pd
import pytest

from transit_modeshift.bundles import make_bundle
from transit_modeshift.cli import main, build_parser

from conftest import edit_study


@pytest.fixture
def residential(tmp_path):
    return make_bundle('residential-grid', tmp_path.joinpath('bundle'))


def _study(tmp_path, **document):
    file = tmp_path.joinpath('study.json')
    file.write_text(json.dumps(document), encoding='utf-8')
    return file


def _diagnostics(out_dir):
    return json.loads(out_dir.joinpath('validation.json').read_text(encoding='utf-8'))['diagnostics']


def _table(out_dir):
    return pd.read_csv(out_dir.joinpath('scenario_table.csv'), dtype={'label': str}).set_index('label')


def test_parser_commands():
    parser = build_parser()
    for command in ('validate', 'scenario-table', 'gen-demand', 'simulate', 'run-pipeline', 'report',
                    'derive-constants'):
        args = parser.parse_args([command, '--config', 'a.json', '--out', 'o', '--seed', '3'])
        assert (args.config, args.out, args.seed) == ('a.json', 'o', 3)
    assert parser.parse_args(['simulate']).scenario == 'base'
    with pytest.raises(SystemExit):
        main([])


def test_validate_good_bundle(residential, tmp_path):
    assert main(['validate', '--config', str(residential), '--out', str(tmp_path.joinpath('v'))]) == 0
    assert _diagnostics(tmp_path.joinpath('v')) == []


def test_validate_missing_stop_times(residential, tmp_path, capsys):
    residential.parent.joinpath('gtfs', 'stop_times.txt').unlink()
    assert main(['validate', '--config', str(residential), '--out', str(tmp_path.joinpath('v'))]) == 2
    diagnostics = _diagnostics(tmp_path.joinpath('v'))
    assert len(diagnostics) == 1
    assert diagnostics[0]['source'] == 'gtfs_dir'
    assert 'stop_times' in diagnostics[0]['message']
    assert 'stop_times' in capsys.readouterr().out


def test_validate_lists_every_fault(residential, tmp_path):
    bundle = residential.parent
    bundle.joinpath('gtfs', 'stop_times.txt').unlink()
    car_od = bundle.joinpath('car_od.csv')
    car_od.write_text(car_od.read_text(encoding='utf-8').replace('Z22', 'Z99'), encoding='utf-8')
    stop_edges = pd.read_csv(bundle.joinpath('stop_edges.csv'), dtype=str)
    stop_edges.loc[0, 'edge_id'] = 'nowhere'
    stop_edges.to_csv(bundle.joinpath('stop_edges.csv'), index=False, lineterminator='\n')

    assert main(['validate', '--config', str(residential), '--out', str(tmp_path.joinpath('v'))]) == 2
    diagnostics = _diagnostics(tmp_path.joinpath('v'))
    assert len(diagnostics) == 3
    assert sorted(item['source'] for item in diagnostics) == ['car_od', 'gtfs_dir', 'stop_edges']
    assert any('Z99' in item['message'] for item in diagnostics)
    assert any('nowhere' in item['message'] for item in diagnostics)


def test_validate_bad_config(tmp_path):
    file = tmp_path.joinpath('study.json')
    file.write_text('{"gtfs_dir": "gtfs",\n "colour": 3}', encoding='utf-8')
    assert main(['validate', '--config', str(file), '--out', str(tmp_path.joinpath('v'))]) == 2
    diagnostics = _diagnostics(tmp_path.joinpath('v'))
    assert [item['source'] for item in diagnostics] == ['config']
    assert 'colour' in diagnostics[0]['message']
    file.write_text('{"gtfs_dir": "gtfs",\n oops}', encoding='utf-8')
    assert main(['validate', '--config', str(file)]) == 2
    assert main(['validate']) == 2


def test_validate_missing_path(residential, tmp_path):
    edit_study(residential, network='elsewhere.json')
    assert main(['validate', '--config', str(residential), '--out', str(tmp_path.joinpath('v'))]) == 2
    diagnostics = _diagnostics(tmp_path.joinpath('v'))
    assert [item['source'] for item in diagnostics] == ['network']


@pytest.mark.parametrize('baseline, row, expected', [
    (dict(P0=6585, B0=1035, C0=35335), '50%', (18112.5, 28685.)),
    (dict(P0=982, B0=173, C0=7239), '70%', (4238.5, 5241.)),
])
def test_scenario_table_with_baseline(tmp_path, baseline, row, expected):
    study = _study(tmp_path, baseline=baseline)
    out = tmp_path.joinpath('out')
    assert main(['scenario-table', '--config', str(study), '--out', str(out)]) == 0
    table = _table(out)
    assert list(table.index) == ['base', '2X', '50%', '70%']
    assert (table.loc[row, 'P1'], table.loc[row, 'T1']) == pytest.approx(expected, abs=1e-6)
    rows = json.loads(out.joinpath('scenario_table.json').read_text(encoding='utf-8'))['rows']
    assert [item['label'] for item in rows] == ['base', '2X', '50%', '70%']
    assert rows[list(table.index).index(row)]['P1'] == pytest.approx(expected[0])


def test_scenario_table_zero_passengers(tmp_path):
    study = _study(tmp_path, baseline=dict(P0=0, B0=10, C0=100),
                   scenarios=[dict(multiplier=2.), dict(multiplier=3.)])
    out = tmp_path.joinpath('out')
    assert main(['scenario-table', '--config', str(study), '--out', str(out)]) == 0
    table = _table(out)
    assert len(table) == 3
    assert (table['T1'] == 110.).all()
    assert (table['T0'] == 110.).all()
    assert (table['cars_removed'] == 0.).all()
    assert (table['P1'] == 0.).all()


def test_scenario_table_errors(tmp_path):
    study = _study(tmp_path, baseline=dict(P0=6585, B0=1035, C0=35335), scenarios=[dict(multiplier=10.)])
    assert main(['scenario-table', '--config', str(study), '--out', str(tmp_path.joinpath('out'))]) == 1
    assert not tmp_path.joinpath('out', 'scenario_table.csv').exists()
    assert main(['scenario-table', '--config', str(_study(tmp_path, demand={}))]) == 2


@pytest.mark.parametrize('name, expected', [('residential-grid', dict(P0=982., B0=173., C0=7239.)),
                                            ('mixeduse-grid', dict(P0=6585., B0=1035., C0=35335.))])
def test_scenario_table_counts_the_bundle(tmp_path, name, expected):
    config_file = make_bundle(name, tmp_path.joinpath('bundle'))
    out = tmp_path.joinpath('out')
    assert main(['scenario-table', '--config', str(config_file), '--out', str(out)]) == 0
    base = _table(out).loc['base']
    assert base['P0'] == pytest.approx(expected['P0'])
    assert base['T0'] == pytest.approx(expected['C0'] + expected['B0'])
    # full precision survives the csv round trip
    assert base['U0'] == pytest.approx(expected['P0'] / (expected['B0'] * 35.), rel=1e-12)


def test_scenario_table_ignores_network_and_emissions(residential, tmp_path):
    first, second = tmp_path.joinpath('a'), tmp_path.joinpath('b')
    assert main(['scenario-table', '--config', str(residential), '--out', str(first)]) == 0
    edit_study(residential, network='elsewhere.json', emissions=dict(car=[1., 0.2, 0.01], smoothing_window=9))
    assert main(['scenario-table', '--config', str(residential), '--out', str(second)]) == 0
    for name in ('scenario_table.csv', 'scenario_table.json'):
        assert first.joinpath(name).read_bytes() == second.joinpath(name).read_bytes()


def test_gen_demand(residential, tmp_path):
    out = tmp_path.joinpath('out')
    assert main(['gen-demand', '--config', str(residential), '--out', str(out)]) == 0
    trips = pd.read_csv(out.joinpath('trips.csv'))
    counts = trips['mode'].value_counts()
    assert (counts['car'], counts['bus_passenger']) == (7239, 982)
    assert trips['depart_s'].is_monotonic_increasing


def test_gen_demand_stage_failure_leaves_nothing(residential, tmp_path):
    residential.parent.joinpath('gtfs', 'stop_times.txt').unlink()
    out = tmp_path.joinpath('out')
    assert main(['gen-demand', '--config', str(residential), '--out', str(out)]) == 1
    assert not out.joinpath('trips.csv').exists()


def test_derive_constants(tmp_path):
    out = tmp_path.joinpath('out')
    assert main(['derive-constants', '--out', str(out)]) == 0
    report = json.loads(out.joinpath('derived_constants.json').read_text(encoding='utf-8'))
    assert report['problems'] == []
    assert report['car_occupancy_mean'] == pytest.approx(1.5, abs=0.01)
    study = _study(tmp_path, fleet=dict(bus_capacity=40.))
    assert main(['derive-constants', '--config', str(study)]) == 2


def test_make_bundle(tmp_path):
    out = tmp_path.joinpath('bundle')
    assert main(['make-bundle', '--name', 'residential-grid', '--out', str(out)]) == 0
    for name in ('config.json', 'network.json', 'stop_edges.csv', 'car_od.csv', 'bus_od.csv', 'gtfs/stops.txt',
                 'gtfs/stop_times.txt'):
        assert out.joinpath(name).is_file()
    assert main(['validate', '--config', str(out.joinpath('config.json'))]) == 0


@pytest.mark.slow
def test_simulate_single_scenario(residential, tmp_path):
    out = tmp_path.joinpath('out')
    assert main(['simulate', '--config', str(residential), '--out', str(out), '--scenario', 'u50']) == 0
    for name in ('segments.csv', 'bus_kpis.csv', 'waits.csv', 'ledger.csv', 'series.csv'):
        assert out.joinpath(name).is_file()
    kpis = pd.read_csv(out.joinpath('bus_kpis.csv'))
    assert kpis['run_id'].nunique() == 173
    assert (kpis['load_factor'] <= 1.).all()


@pytest.mark.slow
def test_pipeline_outputs_and_determinism(bundle_run):
    first = bundle_run('residential-grid')
    second = bundle_run('residential-grid', workers=1)
    for slug in ('base', 'k2', 'u50', 'u70'):
        for name in ('segments.csv', 'bus_kpis.csv', 'waits.csv', 'ledger.csv', 'series.csv'):
            assert first.joinpath(slug, name).is_file()
    for name in ('trips.csv', 'scenario_table.csv', 'scenario_table.json', 'comparison.json', 'series_plot.csv',
                 'emissions.svg', 'manifest.json'):
        assert first.joinpath(name).is_file()
    assert '<svg' in first.joinpath('emissions.svg').read_text(encoding='utf-8')

    manifests = [json.loads(run.joinpath('manifest.json').read_text(encoding='utf-8')) for run in (first, second)]
    outputs = [{name: digest for name, digest in manifest['outputs'].items()
                if name.endswith(('.csv', '.json'))} for manifest in manifests]
    assert outputs[0] == outputs[1]
    assert 'base/segments.csv' in outputs[0]
    assert manifests[0]['inputs'] == manifests[1]['inputs']
    assert [item['slug'] for item in manifests[0]['scenarios']] == ['base', 'k2', 'u50', 'u70']
    settings = manifests[0]['settings']
    assert settings['fleet']['bus_capacity'] == 35.
    assert settings['simulation']['bpr_alpha'] == 0.15
    assert settings['emissions']['smoothing_window'] == 5
    assert manifests[0]['seed'] == 20240312
    assert set(manifests[0]['timings']) >= {'ingest', 'demand', 'scenarios', 'simulate', 'emissions', 'report'}


@pytest.mark.slow
def test_seed_changes_simulation_only(bundle_run):
    first = bundle_run('residential-grid')
    other = bundle_run('residential-grid', seed=7)
    assert first.joinpath('scenario_table.csv').read_bytes() == other.joinpath('scenario_table.csv').read_bytes()
    assert first.joinpath('base', 'segments.csv').read_bytes() != other.joinpath('base', 'segments.csv').read_bytes()
    manifest = json.loads(other.joinpath('manifest.json').read_text(encoding='utf-8'))
    assert manifest['seed'] == 7


@pytest.mark.slow
def test_report_rebuilds_comparison(bundle_run, tmp_path):
    run = tmp_path.joinpath('run')
    shutil.copytree(bundle_run('residential-grid'), run)
    before = json.loads(run.joinpath('comparison.json').read_text(encoding='utf-8'))
    assert main(['report', '--out', str(run)]) == 0
    after = json.loads(run.joinpath('comparison.json').read_text(encoding='utf-8'))
    assert [item['label'] for item in after['scenarios']] == ['base', '2X', '50%', '70%']
    for old, new in zip(before['scenarios'], after['scenarios']):
        assert new['emissions']['percent_reduction'] == pytest.approx(old['emissions']['percent_reduction'],
                                                                      abs=1e-4)
        assert new['counts'] == old['counts']
    plot = pd.read_csv(run.joinpath('series_plot.csv'))
    assert list(plot.columns) == ['bin_start_s', 'hour', 'base', '2X', '50%', '70%']
