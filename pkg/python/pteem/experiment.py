# -*- coding: utf-8 -*-
'''
Running an experiment: dispatch of one run to the right population
driver, and independent runs spread over a pool of worker processes.

Run ``r`` always uses the ``r``-th child of ``SeedSequence(seed)``, so the
results do not depend on the number of workers.
'''
from __future__ import absolute_import, division, print_function

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from pteem.engines import ees_run, run_population
from pteem.ladders import check_chain_count


def run_seeds(seed, runs):
    return np.random.SeedSequence(seed).spawn(runs)


def run_many(function, config, verbose=None):
    '''
    Call ``function(config, seed)`` once per run and return the results in
    run order. ``function`` must be a module level function so that it can
    be sent to worker processes.
    '''
    seeds = run_seeds(config.seed, config.runs)
    workers = min(config.workers, config.runs)
    if workers <= 1:
        results = []
        for index, seed in enumerate(seeds):
            results.append(function(config, seed))
            if verbose:
                print('{0} {1}: run {2}/{3} done'.format(
                    config.experiment, config.algorithm, index + 1,
                    config.runs), file=verbose)
        return results
    if verbose:
        print('{0} {1}: {2} runs on {3} workers'.format(
            config.experiment, config.algorithm, config.runs, workers),
            file=verbose)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(function, config, seed) for seed in seeds]
        return [future.result() for future in futures]


def run_trace(config, model, kernels, initial_state, seed, verbose=None):
    '''
    Run the algorithm selected in ``config`` on ``model`` and return its
    :class:`~pteem.engines.Trace`.
    '''
    section = config.section
    temps = config.temperatures()
    ladder = config.energy_ladder()
    record_chains = section.get('record_chains') or ()
    if config.algorithm == 'ees':
        return ees_run(model, temps, ladder, kernels, initial_state,
                       config.burnin, section['ring_construction'],
                       config.iterations, section['p_ee'], seed,
                       record_chains=record_chains,
                       config=config.as_dict(), verbose=verbose)
    if config.algorithm == 'pteem':
        check_chain_count(len(temps), ladder)
    return run_population(config.algorithm, model, temps, kernels,
                          initial_state, config.burnin, config.iterations,
                          seed, energy_ladder=ladder,
                          record_chains=record_chains,
                          config=config.as_dict(), verbose=verbose)


def describe(values):
    '''
    Mean, standard deviation, minimum and maximum of per-run values.
    '''
    values = np.asarray(values, dtype=float)
    return {
        'mean': float(values.mean()),
        'sd': float(values.std(ddof=1)) if values.size > 1 else 0.0,
        'min': float(values.min()),
        'max': float(values.max()),
    }


def acceptance_summary(trace):
    '''
    Acceptance rates of a run: local moves of all chains and of the
    target chain, and global moves.
    '''
    return {
        'local': trace.local_acceptance_rate(),
        'local_chain1': trace.local_acceptance_rate([0]),
        'exchange': trace.exchange_acceptance_rate(),
        'global_moves': trace.global_moves(),
        'skipped_moves': trace.skipped_moves(),
    }


def chain_acceptance(trace):
    '''
    Per chain ``(local rate, jump rate)``; the jump rate of EES chain i
    counts the jumps it proposed towards chain i+1.
    '''
    rates = []
    for chain in range(trace.n_chains):
        jumps = [e for e in trace.events
                 if e.move == 'ees_jump' and e.chain_a == chain + 1]
        jump_rate = (sum(1 for e in jumps if e.accepted) / float(len(jumps))
                     if jumps else float('nan'))
        rates.append((trace.local_acceptance_rate([chain]), jump_rate))
    return rates


def nan_mean(values):
    values = np.asarray(values, dtype=float)
    if values.size == 0 or np.all(np.isnan(values)):
        return float('nan')
    return float(np.nanmean(values))
