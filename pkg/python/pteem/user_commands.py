# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function

from collections import OrderedDict
import json
import os.path as osp
import sys
import time

import numpy as np

from pteem import algorithms as known_algorithms
from pteem.command import command, check_boolean
from pteem.configuration import load_default_config, parse_config
from pteem.defaults import (default_output_directory,
                            repartition_overlap_threshold)
from pteem.engines import (ees_storage, exchange_matrix_from_events,
                           move_budget)
from pteem.errors import ConfigurationError, IngestionError
from pteem.galaxy import (calibration_chain as galaxy_chain,
                          run_galaxy_study)
from pteem.info import __version__
from pteem.ladders import calibrate_energy_ladder, check_repartition
from pteem.log import verbose_file
from pteem.mixture2d import (calibration_chain as mixture_chain,
                             moment_names, ratio_table, run_mixture_study)
from pteem.output import (find_runs, read_events, read_occupancy,
                          run_manifest, run_prefix, write_manifest,
                          write_table, write_trace)
from pteem.tfbs import (SequenceSet, alphabet,
                        calibration_chain as tfbs_chain, run_tfbs_study,
                        write_fasta)


def command_flags(parameters, **named):
    '''
    Configuration flags of a command: named parameters that were given,
    then any other ``name=value`` parameter.
    '''
    flags = OrderedDict((k, v) for k, v in named.items() if v is not None)
    flags.update(parameters)
    return flags


def int_parameter(name, value):
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigurationError(
            'invalid integer for {0}: {1!r}'.format(name, value))


def selected_algorithms(experiment, algorithm):
    if algorithm != 'all':
        return [algorithm]
    available = load_default_config(experiment)
    return [a for a in known_algorithms if a in available]


def config_budget(config, chains=None):
    '''
    Local and global move counts of one run of ``config``, with the number
    of states held in memory to produce the last target iteration. EES
    counts are given for both readings of the iteration count.
    '''
    n = chains or len(config.temperatures())
    if config.algorithm == 'ees':
        r = config.section['ring_construction']
        p_ee = config.section['p_ee']
        result = OrderedDict()
        for reading in ('formula', 'samples'):
            try:
                result[reading] = move_budget(
                    'ees', config.burnin, r, config.iterations, n, p_ee,
                    reading=reading)._asdict()
            except ConfigurationError:
                result[reading] = None
        result['storage'] = ees_storage(n, r, config.iterations - 1, p_ee)
        return result
    result = move_budget(config.algorithm, config.burnin, 0,
                         config.iterations, n)._asdict()
    result['storage'] = n
    return result


def write_run_manifest(config, wall_time, files, pooled, seed_generated):
    manifest = OrderedDict([
        ('pteem_version', __version__),
        ('experiment', config.experiment),
        ('algorithm', config.algorithm),
        ('seed', config.seed),
        ('seed_generated', seed_generated),
        ('move_budget', config_budget(config)),
        ('wall_time', wall_time),
        ('config', config.as_dict()),
        ('files', [osp.relpath(f, config.out) for f in files]),
        ('summary', pooled),
    ])
    return write_manifest(
        osp.join(config.out, config.algorithm + '_manifest.json'), manifest)


def run_experiment(experiment, study, write_run, write_study, config, flags,
                   algorithm, plot, verbose):
    '''
    Run ``study`` for each selected algorithm, write every result file and
    a manifest per algorithm. Returns ``{algorithm: (config, pooled)}``.

    All algorithms use the same seed; when none is given the seed drawn
    for the first algorithm is reused.
    '''
    results = OrderedDict()
    seed = None
    seed_generated = False
    for name in selected_algorithms(experiment, algorithm):
        algorithm_flags = dict(flags)
        if name is not None:
            algorithm_flags['algorithm'] = name
        if seed is not None:
            algorithm_flags.setdefault('seed', seed)
        run_config = parse_config(experiment, config, algorithm_flags,
                                  verbose=verbose)
        if seed is None:
            seed = run_config.seed
            seed_generated = bool(run_config.run.get('seed_generated'))
        start = time.time()
        traces, runs, pooled = study(run_config, verbose=verbose)
        wall_time = time.time() - start
        files = []
        for index, (trace, summary) in enumerate(zip(traces, runs), 1):
            prefix = run_prefix(run_config.out, run_config.algorithm, index)
            files += write_trace(prefix, trace, plot=plot)
            files += write_run(run_config, prefix, summary)
        files += write_study(run_config, runs, pooled)
        write_run_manifest(run_config, wall_time, files, pooled,
                           seed_generated)
        if verbose:
            print('{0} {1}: {2} runs in {3:.1f} s, results in {4}'.format(
                experiment, run_config.algorithm, run_config.runs,
                wall_time, run_config.out), file=verbose)
        results[run_config.algorithm] = (run_config, pooled)
    return results


def print_pooled(algorithm, pooled, keys, file=sys.stdout):
    for key in keys:
        value = pooled.get(key)
        if isinstance(value, dict):
            value = ', '.join('{0}={1:.4g}'.format(k, v)
                              for k, v in value.items())
        elif isinstance(value, float):
            value = '{0:.4g}'.format(value)
        print('{0} {1}: {2}'.format(algorithm, key, value), file=file)


def study_path(config, suffix):
    return osp.join(config.out, '{0}_{1}'.format(config.algorithm, suffix))


def write_mixture_run(config, prefix, summary):
    rows = [(m + 1, c, f, e) for m, (c, f, e) in enumerate(zip(
        summary['counts'], summary['frequencies'], summary['errors']))]
    return [write_table(prefix + '_modes.csv',
                        ['mode', 'count', 'frequency', 'error'], rows)]


def write_mixture_study(config, runs, pooled):
    header = (['run', 'visited_modes'] + list(moment_names)
              + ['local_acceptance', 'exchange_acceptance'])
    rows = ([i + 1, r['visited_modes']] + list(r['moments'])
            + [r['acceptance']['local'], r['acceptance']['exchange']]
            for i, r in enumerate(runs))
    mode_rows = ((m + 1, med, mx) for m, (med, mx) in enumerate(zip(
        pooled['err_median'], pooled['err_max'])))
    return [write_table(study_path(config, 'runs.csv'), header, rows),
            write_table(study_path(config, 'mode_errors.csv'),
                        ['mode', 'err_median', 'err_max'], mode_rows)]


def write_ratio_table(out, table):
    n_modes = len(table[0][3])
    header = (['numerator', 'denominator', 'statistic']
              + ['mode_{0}'.format(m + 1) for m in range(n_modes)]
              + ['mean'])
    rows = ([a, b, statistic] + [float(v) for v in ratios] + [mean]
            for a, b, statistic, ratios, mean in table)
    return write_table(osp.join(out, 'ratios.csv'), header, rows)


def write_galaxy_run(config, prefix, summary):
    return []


def write_galaxy_study(config, runs, pooled):
    header = ['run', 'visited_modes', 'err_mean', 'err_median',
              'local_acceptance', 'exchange_acceptance']
    rows = ([i + 1, r['visited_modes'], r['err_mean'], r['err_median'],
             r['acceptance']['local'], r['acceptance']['exchange']]
            for i, r in enumerate(runs))
    return [write_table(study_path(config, 'runs.csv'), header, rows)]


def write_tfbs_run(config, prefix, summary):
    names = [name for name, _ in summary['sequences']]
    sequences = SequenceSet([s for _, s in summary['sequences']],
                            config.model['width'], names=names)
    files = [
        write_fasta(prefix + '_sequences.fa', sequences),
        write_table(
            prefix + '_posterior.csv',
            ['position', 'sequence', 'offset', 'probability'],
            ((i + 1, sequences.sequence_of[i] + 1,
              sequences.offset_of[i] + 1, float(p))
             for i, p in enumerate(summary['probabilities']))),
        write_table(prefix + '_sites.csv',
                    ['position', 'probability', 'sequence', 'offset',
                     'status'], summary['sites']),
        write_table(prefix + '_counts.csv', ['motif_position'] +
                    list(alphabet),
                    ([k + 1] + list(row)
                     for k, row in enumerate(summary['counts']))),
        write_table(
            prefix + '_chains.csv',
            ['chain', 'temperature', 'local_acceptance', 'jump_acceptance'],
            ((c + 1, t, local, jump) for c, (t, (local, jump)) in enumerate(
                zip(config.temperatures(), summary['chain_acceptance'])))),
    ]
    if summary['true_positions'] is not None:
        files.append(write_table(
            prefix + '_true_sites.csv', ['position', 'sequence', 'offset'],
            ((p, sequences.sequence_of[p - 1] + 1,
              sequences.offset_of[p - 1] + 1)
             for p in summary['true_positions'])))
    return files


def write_tfbs_study(config, runs, pooled):
    header = ['run', 'detected', 'true_found', 'true_exact',
              'local_acceptance', 'exchange_acceptance']
    rows = ([i + 1, len(r['sites']), r.get('found'), r.get('exact'),
             r['acceptance']['local'], r['acceptance']['exchange']]
            for i, r in enumerate(runs))
    return [write_table(study_path(config, 'runs.csv'), header, rows)]


@command
def mixture2d(config=None, algorithm=None, variant=None, runs=None,
              iterations=None, burnin=None, seed=None, workers=None,
              out=None, plot='no', verbose=None, **parameters):
    """
    Sample a 20-component bivariate Gaussian mixture with random walk local
    moves.

    Chains start uniformly in [0, 1]^2. For each algorithm the output
    directory receives, per run, the target chain samples, the global move
    events, the ring occupancy, the exchange matrix and the visits to each
    mode; then a table of per-run statistics, the per-mode frequency errors
    and a manifest. With ``algorithm=all`` the ratios of frequency errors
    between algorithms are written in ``ratios.csv``.

    Parameters
    ----------
    {config}
    {algorithm}
        ``all`` runs PT, EES and PTEEM in turn.
    variant
        ``equal`` (all standard deviations 0.1) or ``unequal``
        (0.4, 0.1 and 0.05); ``unequal`` also switches to its own ladders.
    {runs}
    {iterations}
    {burnin}
    {seed}
    {workers}
    {out}
    plot
        default={plot_default}

        If ``yes``, also write the samples of chains 1, 7, 14 and 20 (all
        chains for EES) with their energy ring, to draw scatter plots.
    {verbose}
    {parameters}
    """
    verbose = verbose_file(verbose)
    plot = check_boolean('plot', plot)
    flags = command_flags(parameters, variant=variant, runs=runs,
                          iterations=iterations, burnin=burnin, seed=seed,
                          workers=workers, out=out)
    results = run_experiment('mixture2d', run_mixture_study,
                             write_mixture_run, write_mixture_study, config,
                             flags, algorithm, plot, verbose)
    for name, (run_config, pooled) in results.items():
        print_pooled(name, pooled, ('visited_modes', 'moments_mean',
                                    'local_acceptance',
                                    'exchange_acceptance'))
    if len(results) > 1:
        table = ratio_table(dict((name, pooled) for name, (_, pooled)
                                 in results.items()))
        if table:
            out_dir = list(results.values())[0][0].out
            write_ratio_table(out_dir, table)
            for a, b, statistic, _, mean in table:
                print('mean {0} {1}/{2}: {3:.3g}'.format(statistic, a, b,
                                                         mean))
    return 0


@command
def galaxy(config=None, algorithm=None, data=None, k=None, runs=None,
           iterations=None, burnin=None, seed=None, workers=None, out=None,
           plot='no', verbose=None, **parameters):
    """
    Fit a k-component Gaussian mixture to the Galaxy velocities with
    tempered Gibbs local moves, and count the label orders (modes) the
    target chain visits.

    Parameters
    ----------
    {config}
    {algorithm}
        ``all`` runs PT and PTEEM in turn.
    data
        File with one velocity per line (in 1000 km/s). The bundled Galaxy
        data are used by default.
    k
        Number of mixture components.
    {runs}
    {iterations}
    {burnin}
    {seed}
    {workers}
    {out}
    plot
        default={plot_default}

        If ``yes``, write the parameters of the recorded chains with their
        energy ring.
    {verbose}
    {parameters}
    """
    verbose = verbose_file(verbose)
    plot = check_boolean('plot', plot)
    flags = command_flags(parameters, data=data, k=k, runs=runs,
                          iterations=iterations, burnin=burnin, seed=seed,
                          workers=workers, out=out)
    results = run_experiment('galaxy', run_galaxy_study, write_galaxy_run,
                             write_galaxy_study, config, flags, algorithm,
                             plot, verbose)
    for name, (_, pooled) in results.items():
        print_pooled(name, pooled, ('visited_modes', 'err_median',
                                    'local_acceptance',
                                    'exchange_acceptance'))
    return 0


@command
def tfbs(config=None, algorithm=None, generate=None, input=None, width=None,
         runs=None, iterations=None, burnin=None, seed=None, workers=None,
         out=None, verbose=None, **parameters):
    """
    Look for transcription factor binding sites of one motif of known
    width.

    For each run the output directory receives the posterior probability
    of a site at each position, the detected sites (probability above the
    threshold) with their status against the true sites when the data were
    generated, the nucleotide counts of the detected sites (as used to draw
    a sequence logo), the sequences and per-chain acceptance rates.

    Parameters
    ----------
    {config}
    {algorithm}
        ``all`` runs EES and PTEEM in turn.
    generate
        If ``yes`` (default), every run generates its own data: background
        sequences from the Markov model with motif sites inserted.
    input
        File of sequences, each introduced by a ``>name`` line.
    width
        Motif width.
    {runs}
    {iterations}
    {burnin}
    {seed}
    {workers}
    {out}
    {verbose}
    {parameters}
    """
    verbose = verbose_file(verbose)
    if input is not None and generate is None:
        generate = 'no'
    flags = command_flags(parameters, generate=generate, input=input,
                          width=width, runs=runs, iterations=iterations,
                          burnin=burnin, seed=seed, workers=workers, out=out)
    results = run_experiment('tfbs', run_tfbs_study, write_tfbs_run,
                             write_tfbs_study, config, flags, algorithm,
                             False, verbose)
    for name, (_, pooled) in results.items():
        print_pooled(name, pooled, ('detected', 'found', 'exact',
                                    'local_acceptance',
                                    'exchange_acceptance'))
    return 0


def print_table(header, rows, file=sys.stdout):
    rows = [[str(v) for v in row] for row in rows]
    widths = [max(len(str(h)), *(len(r[j]) for r in rows)) if rows
              else len(str(h)) for j, h in enumerate(header)]
    print('  '.join(str(h).rjust(w) for h, w in zip(header, widths)),
          file=file)
    for row in rows:
        print('  '.join(v.rjust(w) for v, w in zip(row, widths)), file=file)


@command
def diagnose(directory=None, threshold=repartition_overlap_threshold,
             verbose=None):
    """
    Check the energy ladder of finished runs.

    For each run found in the directory, print its ring occupancy table
    (how many recorded iterations each chain spent in each energy ring),
    the repartition verdict (an energy gap between adjacent chains means
    the ladder must be changed) and the matrix of exchange percentages
    between chains. The experiment and seed are read from the manifest
    of the command that wrote the run, when present.

    Parameters
    ----------
    directory
        Output directory of an experiment command.
    threshold
        default={threshold_default}

        Adjacent chains sharing less than this part of their mass in their
        best common ring are reported as weakly connected.
    {verbose}
    """
    verbose = verbose_file(verbose)
    directory = directory or default_output_directory()
    try:
        threshold = float(threshold)
    except ValueError:
        raise ConfigurationError('invalid threshold {0!r}'.format(threshold))
    prefixes = find_runs(directory)
    if not prefixes:
        raise IngestionError('no run found in {0}'.format(directory))
    for prefix in prefixes:
        labels, table = read_occupancy(prefix + '_occupancy.csv')
        events = read_events(prefix + '_events.csv')
        n = table.shape[0]
        matrix = exchange_matrix_from_events(events, n)
        repartition = check_repartition(table, threshold)
        name = osp.basename(prefix)
        print(name)
        print('=' * len(name))
        manifest = run_manifest(prefix)
        if manifest is not None:
            print('experiment: {0}, seed: {1}'.format(
                manifest.get('experiment'), manifest.get('seed')))
        print('ring occupancy:')
        print_table(['chain'] + labels,
                    ([i + 1] + row.tolist() for i, row in enumerate(table)))
        if repartition.ok:
            print('repartition: ok')
        for i, k in repartition.gaps:
            print('repartition: energy gap between chains {0} and {1}'
                  .format(i, k))
        for i, k, overlap in repartition.weak:
            print('repartition: chains {0} and {1} share {2:.2%} of their '
                  'mass'.format(i, k, overlap))
        print('exchanges (% of accepted exchanges of each chain):')
        print_table(['chain'] + [str(j + 1) for j in range(n)],
                    ([i + 1] + ['%.1f' % v for v in row]
                     for i, row in enumerate(matrix)))
        if verbose:
            print('{0} global move events read'.format(len(events)),
                  file=verbose)
        print()
    return 0


def format_count(value):
    return '{0:.10g}'.format(value)


@command
def budget(experiment='mixture2d', config=None, algorithm=None, chains=None,
           burnin=None, iterations=None, verbose=None, **parameters):
    """
    Print the number of local and global moves of one run, and the number
    of states kept in memory, without running anything.

    EES counts are printed for the two readings of the sample size: with
    ``formula`` the target chain produces M - R iterations after the ring
    construction, with ``samples`` it produces M iterations after burn-in
    and ring construction (which is what the ees sampler does).

    Parameters
    ----------
    experiment
        default={experiment_default}

        ``mixture2d``, ``galaxy`` or ``tfbs``.
    {config}
    {algorithm}
    chains
        Number of chains, when different from the configured ladder.
    {burnin}
    {iterations}
    {verbose}
    {parameters}
    """
    verbose = verbose_file(verbose)
    flags = command_flags(parameters, algorithm=algorithm, burnin=burnin,
                          iterations=iterations)
    run_config = parse_config(experiment, config, flags, verbose=verbose)
    n = (int_parameter('chains', chains) if chains is not None
         else len(run_config.temperatures()))
    if n < 1:
        raise ConfigurationError('chains must be >= 1')
    result = config_budget(run_config, n)
    name = run_config.algorithm
    if name == 'ees':
        section = run_config.section
        print('ees: K={0} chains, burn-in B={1}, ring construction R={2}, '
              'sample M={3}, p_ee={4}'.format(
                  n, run_config.burnin, section['ring_construction'],
                  run_config.iterations, section['p_ee']))
        for reading in ('formula', 'samples'):
            counts = result[reading]
            if counts is None:
                print('  {0}: ring construction exceeds the sample size'
                      .format(reading))
                continue
            print('  local moves ({0}): {1}'.format(
                reading, format_count(counts['local_moves'])))
            print('  global moves ({0}): {1}'.format(
                reading, format_count(counts['global_moves'])))
        print('  stored states for the last target iteration: {0}'.format(
            format_count(result['storage'])))
    else:
        print('{0}: N={1} chains, burn-in B={2}, sample M={3}'.format(
            name, n, run_config.burnin, run_config.iterations))
        print('  local moves: {0}'.format(format_count(
            result['local_moves'])))
        print('  global moves: {0}'.format(format_count(
            result['global_moves'])))
        print('  stored states: {0}'.format(n))
    return 0


calibration_chains = {
    'mixture2d': mixture_chain,
    'galaxy': galaxy_chain,
    'tfbs': tfbs_chain,
}


@command
def calibrate(experiment='mixture2d', config=None, algorithm=None, levels=5,
              iterations=2000, burnin=500, early=10, scheme='log_levels',
              seed=None, verbose=None, **parameters):
    """
    Choose energy levels from a pilot chain targeting the untempered
    model.

    The highest level is the energy reached after a few iterations, the
    lowest one the smallest energy seen after the pilot burn-in; the levels
    in between are spaced with the given scheme. The result is printed as a
    ``levels`` entry to paste in a configuration file.

    Parameters
    ----------
    experiment
        default={experiment_default}

        ``mixture2d``, ``galaxy`` or ``tfbs``.
    {config}
    {algorithm}
    levels
        default={levels_default}

        Number of energy levels.
    iterations
        default={iterations_default}

        Length of the pilot chain.
    burnin
        default={burnin_default}

        Pilot iterations ignored when looking for the lowest energy.
    early
        default={early_default}

        Iteration whose energy gives the highest level.
    scheme
        default={scheme_default}

        ``log_levels`` (levels evenly spaced on a log scale) or
        ``log_increments`` (geometrically growing gaps).
    {seed}
    {verbose}
    {parameters}
    """
    verbose = verbose_file(verbose)
    if experiment not in calibration_chains:
        raise ConfigurationError('unknown experiment {0!r}'.format(
            experiment))
    flags = command_flags(parameters, algorithm=algorithm, seed=seed)
    run_config = parse_config(experiment, config, flags, verbose=verbose)
    rng = np.random.Generator(np.random.Philox(
        np.random.SeedSequence(run_config.seed)))
    model, kernel, x0 = calibration_chains[experiment](run_config, rng)
    ladder = calibrate_energy_ladder(
        model, kernel, x0, int_parameter('levels', levels), rng,
        iterations=int_parameter('iterations', iterations),
        burnin=int_parameter('burnin', burnin),
        early=int_parameter('early', early), scheme=scheme)
    if verbose:
        print('pilot chain of {0} iterations with seed {1}'.format(
            iterations, run_config.seed), file=verbose)
    print('"levels": {0}'.format(json.dumps(
        [float('%.4g' % h) for h in ladder.levels])))
    return 0
