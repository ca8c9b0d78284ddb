# -*- coding: utf-8 -*-

import filecmp
import os

import numpy as np
import pytest

from pteem.discrete import DiscreteMetropolisKernel, DiscreteTarget
from pteem.engines import exchange_matrix, run_population
from pteem.errors import IngestionError
from pteem.ladders import EnergyLadder, TemperatureLadder, occupancy_table
from pteem.output import (find_runs, format_value, read_events,
                          read_manifest, read_occupancy, read_table,
                          run_manifest, run_prefix, write_manifest,
                          write_table, write_trace)
from pteem.user_commands import mixture2d


def small_trace(seed=5):
    target = DiscreteTarget([6.0, 0.2, 1.0, 0.1, 4.0])
    temps = TemperatureLadder([1.0, 2.0, 4.0])
    kernels = [DiscreteMetropolisKernel(5) for _ in temps]
    return run_population('pteem', target, temps, kernels, lambda rng: 0,
                          10, 200, seed, energy_ladder=EnergyLadder(
                              [-1.0, 0.5]))


def test_format_value():
    assert format_value(0.1) == '0.10000000000000001'
    assert format_value(np.float64(2.5)) == '2.5'
    assert format_value(True) == '1'
    assert format_value(None) == ''
    assert format_value(7) == '7'


def test_table(tmp_path):
    path = write_table(str(tmp_path / 'sub' / 't.csv'), ['a', 'b'],
                       [(1, 0.5), (2, None)])
    assert read_table(path) == (['a', 'b'], [['1', '0.5'], ['2', '']])
    with pytest.raises(IngestionError):
        read_table(str(tmp_path / 'missing.csv'))
    empty = tmp_path / 'empty.csv'
    empty.write_text(u'')
    with pytest.raises(IngestionError):
        read_table(str(empty))


def test_trace_files(tmp_path):
    trace = small_trace()
    prefix = run_prefix(str(tmp_path), 'pteem', 1)
    assert prefix.endswith('pteem_run001')
    files = write_trace(prefix, trace, plot=True)
    assert [os.path.basename(f) for f in files] == [
        'pteem_run001_samples.csv', 'pteem_run001_events.csv',
        'pteem_run001_occupancy.csv', 'pteem_run001_exchanges.csv',
        'pteem_run001_plot.csv']

    assert read_events(prefix + '_events.csv') == list(trace.events)
    labels, table = read_occupancy(prefix + '_occupancy.csv')
    assert labels == trace.energy_ladder.ring_labels()
    assert np.array_equal(table, occupancy_table(trace))
    assert table.sum() == 3 * 200

    header, rows = read_table(prefix + '_exchanges.csv')
    assert header == ['chain', 'chain_1', 'chain_2', 'chain_3']
    assert np.allclose(np.array(rows, dtype=float)[:, 1:],
                       exchange_matrix(trace), equal_nan=True)

    header, rows = read_table(prefix + '_samples.csv')
    assert header == ['iteration', 'state']
    assert len(rows) == 200
    assert rows[0][0] == '10'


def test_not_an_events_file(tmp_path):
    path = write_table(str(tmp_path / 'x.csv'), ['chain', 'ring'], [])
    with pytest.raises(IngestionError):
        read_events(path)
    bad = write_table(str(tmp_path / 'y.csv'), ['ring'], [(1,)])
    with pytest.raises(IngestionError):
        read_occupancy(bad)


def test_find_runs(tmp_path):
    for algorithm, run in (('pt', 2), ('pt', 1), ('ees', 1)):
        write_table(run_prefix(str(tmp_path), algorithm, run)
                    + '_occupancy.csv', ['chain'], [])
    assert [os.path.basename(p) for p in find_runs(str(tmp_path))] == [
        'ees_run001', 'pt_run001', 'pt_run002']
    assert find_runs(str(tmp_path / 'nothing')) == []


def test_manifest(tmp_path):
    path = write_manifest(str(tmp_path / 'm' / 'manifest.json'), {
        'seed': np.int64(3), 'rate': np.float32(0.5),
        'moments': np.array([1.0, 2.0])})
    assert read_manifest(path) == {'seed': 3, 'rate': 0.5,
                                   'moments': [1.0, 2.0]}
    with pytest.raises(TypeError):
        write_manifest(str(tmp_path / 'bad.json'), {'x': object()})
    with pytest.raises(IngestionError):
        read_manifest(str(tmp_path / 'none.json'))


def test_same_seed_same_files(tmp_path):
    for name in ('first', 'second'):
        mixture2d(algorithm='pteem', runs='2', iterations='30', burnin='10',
                  seed='77', out=str(tmp_path / name))
    first = sorted(f for f in os.listdir(str(tmp_path / 'first'))
                   if f.endswith('.csv'))
    assert 'pteem_runs.csv' in first
    assert 'pteem_run002_modes.csv' in first
    assert sorted(f for f in os.listdir(str(tmp_path / 'second'))
                  if f.endswith('.csv')) == first
    match, mismatch, errors = filecmp.cmpfiles(
        str(tmp_path / 'first'), str(tmp_path / 'second'), first,
        shallow=False)
    assert mismatch == [] and errors == []

    manifest = read_manifest(str(tmp_path / 'first'
                                 / 'pteem_manifest.json'))
    assert manifest['seed'] == 77
    assert manifest['seed_generated'] is False
    assert manifest['move_budget']['local_moves'] == 20 * 40
    assert 'pteem_run001_events.csv' in manifest['files']
    assert run_manifest(str(tmp_path / 'first' / 'pteem_run002')) == \
        manifest
    assert run_manifest(str(tmp_path / 'first' / 'ees_run001')) is None
