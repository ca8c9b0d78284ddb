# -*- coding: utf-8 -*-
'''
Result files.

Every table is a CSV file with a header row; reals are written with 17
significant digits so that two runs with the same seed produce identical
files. Each command also writes a JSON manifest describing the run.
'''
from __future__ import absolute_import, division, print_function

import csv
import glob
import json
import os

import numpy as np

from pteem.defaults import float_digits
from pteem.engines import ExchangeEvent, exchange_matrix
from pteem.errors import IngestionError
from pteem.ladders import occupancy_table

real_format = '%.{0}g'.format(float_digits)


def format_value(value):
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return real_format % value
    if value is None:
        return ''
    return str(value)


def write_table(path, header, rows):
    directory = os.path.dirname(path)
    if directory and not os.path.isdir(directory):
        os.makedirs(directory)
    with open(path, 'w') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def read_table(path):
    '''
    Return ``(header, rows)`` of a CSV file, cells left as strings.
    '''
    if not os.path.exists(path):
        raise IngestionError('file not found: {0}'.format(path))
    with open(path) as f:
        rows = list(csv.reader(f))
    if not rows:
        raise IngestionError('empty CSV file: {0}'.format(path))
    return rows[0], rows[1:]


def run_prefix(out, algorithm, run):
    return os.path.join(out, '{0}_run{1:03d}'.format(algorithm, run))


def write_samples(prefix, trace):
    samples = trace.chain_samples(1)
    header = ['iteration'] + list(trace.coordinate_names)
    rows = ([t] + list(x) for t, x in zip(trace.sample_iterations, samples))
    return write_table(prefix + '_samples.csv', header, rows)


def write_plot_data(prefix, trace):
    '''
    Recorded samples of every recorded chain with the energy ring of each
    sample.
    '''
    header = (['chain', 'iteration', 'ring']
              + list(trace.coordinate_names))
    rows = []
    for chain in sorted(trace.samples):
        samples = trace.samples[chain]
        for kept, (t, x) in enumerate(zip(trace.sample_iterations, samples)):
            rows.append([chain, t, int(trace.rings[chain - 1, kept])]
                        + list(x))
    return write_table(prefix + '_plot.csv', header, rows)


def write_events(prefix, trace):
    header = list(ExchangeEvent._fields)
    return write_table(prefix + '_events.csv', header, trace.events)


def read_events(path):
    header, rows = read_table(path)
    if header != list(ExchangeEvent._fields):
        raise IngestionError('not an events file: {0}'.format(path))
    events = []
    for row in rows:
        iteration, move, chain_a, chain_b, accepted, probability = row
        events.append(ExchangeEvent(
            int(iteration), move,
            int(chain_a) if chain_a else None,
            int(chain_b) if chain_b else None,
            accepted == '1', float(probability)))
    return events


def write_occupancy(prefix, table, ring_labels):
    header = ['chain'] + list(ring_labels)
    rows = ([i + 1] + [int(v) for v in row] for i, row in enumerate(table))
    return write_table(prefix + '_occupancy.csv', header, rows)


def read_occupancy(path):
    '''
    Return ``(ring_labels, table)`` of an occupancy file.
    '''
    header, rows = read_table(path)
    if not header or header[0] != 'chain':
        raise IngestionError('not an occupancy file: {0}'.format(path))
    try:
        table = np.array([[int(v) for v in row[1:]] for row in rows],
                         dtype=np.int64)
    except ValueError as e:
        raise IngestionError('invalid occupancy file {0}: {1}'.format(
            path, e))
    return header[1:], table


def write_exchange_matrix(prefix, matrix):
    n = matrix.shape[0]
    header = ['chain'] + ['chain_{0}'.format(j + 1) for j in range(n)]
    rows = ([i + 1] + [float(v) for v in row] for i, row in enumerate(matrix))
    return write_table(prefix + '_exchanges.csv', header, rows)


def write_trace(prefix, trace, plot=False):
    '''
    Write samples, events, occupancy and exchange matrix of a run (and the
    plot data when ``plot`` is true). Returns the written file names.
    '''
    files = [write_samples(prefix, trace), write_events(prefix, trace),
             write_occupancy(prefix, occupancy_table(trace),
                             trace.energy_ladder.ring_labels()),
             write_exchange_matrix(prefix, exchange_matrix(trace))]
    if plot:
        files.append(write_plot_data(prefix, trace))
    return files


def find_runs(directory):
    '''
    Prefixes of the runs stored in ``directory``, in name order.
    '''
    suffix = '_occupancy.csv'
    return sorted(path[:-len(suffix)] for path in
                  glob.glob(os.path.join(directory, '*' + suffix)))


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError('cannot write {0!r} in JSON'.format(value))


def write_manifest(path, manifest):
    directory = os.path.dirname(path)
    if directory and not os.path.isdir(directory):
        os.makedirs(directory)
    with open(path, 'w') as f:
        json.dump(manifest, f, indent=4, separators=(',', ': '),
                  default=_json_default)
    return path


def read_manifest(path):
    if not os.path.exists(path):
        raise IngestionError('manifest not found: {0}'.format(path))
    with open(path) as f:
        return json.load(f)


def run_manifest(prefix):
    '''
    Manifest of the command that wrote the run ``prefix`` (for instance
    ``out/pteem_run001`` reads ``out/pteem_manifest.json``), or None when
    the directory holds no such manifest.
    '''
    algorithm = os.path.basename(prefix).rsplit('_run', 1)[0]
    path = os.path.join(os.path.dirname(prefix),
                        algorithm + '_manifest.json')
    if not os.path.exists(path):
        return None
    return read_manifest(path)
