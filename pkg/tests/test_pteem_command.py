# -*- coding: utf-8 -*-

import filecmp
import os
import subprocess

import pytest


# Use an empty temporary HOME and unset PTEEM_* variables (see conftest.py)
pytestmark = pytest.mark.usefixtures("isolate_from_home")


def run(command, *args):
    p = subprocess.Popen(command + list(args), stdout=subprocess.PIPE,
                         stderr=subprocess.PIPE, bufsize=-1,
                         universal_newlines=True)
    stdoutdata, stderrdata = p.communicate()
    return p.returncode, stdoutdata, stderrdata


def test_help(pteem_command):
    retval = subprocess.call(pteem_command + ['--help'])
    assert retval == 0


def test_version(pteem_command):
    returncode, stdoutdata, _ = run(pteem_command, '--version')
    assert returncode == 0
    assert 'pteem version' in stdoutdata


@pytest.mark.parametrize("subcommand", [
    'help',
    'mixture2d',
    'galaxy',
    'tfbs',
    'diagnose',
    'budget',
    'calibrate',
])
def test_help_of_subcommands(pteem_command, subcommand):
    returncode, stdoutdata, _ = run(pteem_command, 'help', subcommand)
    assert returncode == 0
    assert subcommand in stdoutdata
    assert '{indent}' not in stdoutdata


def test_budget(pteem_command):
    returncode, stdoutdata, _ = run(pteem_command, 'budget')
    assert returncode == 0
    assert 'local moves: 100000' in stdoutdata
    assert 'global moves: 5000' in stdoutdata


def test_ees_budget(pteem_command):
    returncode, stdoutdata, _ = run(pteem_command, 'budget',
                                    'algorithm=ees', '--chains', '6')
    assert returncode == 0
    assert 'local moves (formula): 69500' in stdoutdata
    assert 'global moves (formula): 5500' in stdoutdata
    assert 'local moves (samples): 72250' in stdoutdata
    assert 'global moves (samples): 5750' in stdoutdata


def test_invalid_configuration(pteem_command, tmp_path):
    returncode, _, stderrdata = run(pteem_command, 'mixture2d', 'burnin=0',
                                    'out=' + str(tmp_path))
    assert returncode == 2
    assert 'ERROR SUMMARY' in stderrdata
    returncode, _, _ = run(pteem_command, 'diagnose', 'color=blue')
    assert returncode == 2
    bad = tmp_path / 'bad.json'
    bad.write_text(u'{"run": {"runz": 2}}')
    returncode, _, stderrdata = run(pteem_command, 'budget',
                                    'config=' + str(bad))
    assert returncode == 2
    assert 'runz' in stderrdata


def test_diagnose_without_runs(pteem_command, tmp_path):
    returncode, _, _ = run(pteem_command, 'diagnose', str(tmp_path))
    assert returncode == 3


def test_mixture_run_then_diagnose(pteem_command, tmp_path):
    out = str(tmp_path / 'mixture')
    returncode, stdoutdata, _ = run(
        pteem_command, 'mixture2d', 'algorithm=pteem', 'runs=1',
        'iterations=20', 'burnin=5', 'seed=3', 'out=' + out)
    assert returncode == 0
    assert 'pteem visited_modes' in stdoutdata
    assert os.path.exists(os.path.join(out, 'pteem_manifest.json'))
    returncode, stdoutdata, _ = run(pteem_command, 'diagnose', out)
    assert returncode == 0
    assert 'pteem_run001' in stdoutdata
    assert 'experiment: mixture2d, seed: 3' in stdoutdata
    assert 'ring occupancy' in stdoutdata
    assert 'exchanges' in stdoutdata


def test_tfbs_run(pteem_command, tmp_path):
    out = str(tmp_path / 'tfbs')
    returncode, _, stderrdata = run(
        pteem_command, 'tfbs', '--algorithm', 'ees', '--ring-construction',
        '2', 'runs=1', 'iterations=4', 'burnin=2', 'sequences=2',
        'background_length=30', 'seed=1', 'out=' + out)
    assert returncode == 0, stderrdata
    for suffix in ('sequences.fa', 'posterior.csv', 'sites.csv',
                   'counts.csv', 'chains.csv', 'true_sites.csv'):
        assert os.path.exists(os.path.join(out, 'ees_run001_' + suffix))
    returncode, _, _ = run(pteem_command, 'tfbs', 'input=' + str(
        tmp_path / 'missing.fa'), 'out=' + out)
    assert returncode == 3


def test_calibrate(pteem_command):
    returncode, stdoutdata, _ = run(
        pteem_command, 'calibrate', 'levels=3', 'iterations=200',
        'burnin=50', 'seed=1')
    assert returncode == 0
    assert stdoutdata.startswith('"levels": [')


def test_results_do_not_depend_on_workers(pteem_command, tmp_path):
    directories = []
    for workers in (1, 2):
        out = str(tmp_path / 'workers{0}'.format(workers))
        returncode, _, stderrdata = run(
            pteem_command, 'mixture2d', 'algorithm=pteem', 'runs=2',
            'iterations=15', 'burnin=5', 'seed=21',
            'workers={0}'.format(workers), 'out=' + out)
        assert returncode == 0, stderrdata
        directories.append(out)
    files = sorted(f for f in os.listdir(directories[0])
                   if f.endswith('.csv'))
    assert len(files) > 4
    _, mismatch, errors = filecmp.cmpfiles(directories[0], directories[1],
                                           files, shallow=False)
    assert mismatch == [] and errors == []
