# -*- coding: utf-8 -*-
'''
Twenty-component bivariate Gaussian mixture sampled with random walk
Metropolis-Hastings local moves.

The modes are far apart (most are more than 15 standard deviations from
their nearest neighbour) and the chains start in ``[0, 1]^2``, away from
all of them, so the number of modes the target chain visits measures how
well a sampler explores the space.
'''
from __future__ import absolute_import, division, print_function

from collections import namedtuple
import math

import numpy as np
from scipy.special import logsumexp

from pteem.errors import ConfigurationError
from pteem.experiment import (acceptance_summary, describe, nan_mean,
                              run_many, run_trace)
from pteem.kernels import RandomWalkKernel
from pteem.model import TargetModel

MEANS = np.array([
    [2.18, 5.76], [8.67, 9.59], [4.24, 8.48], [8.41, 1.68], [3.93, 8.82],
    [3.25, 3.47], [1.70, 0.50], [4.59, 5.60], [6.91, 5.81], [6.87, 5.40],
    [5.41, 2.65], [2.70, 7.88], [4.98, 3.70], [1.14, 2.39], [8.33, 9.50],
    [4.93, 1.50], [1.83, 0.09], [2.26, 0.31], [5.54, 6.86], [1.69, 8.11],
])

EQUAL_SIGMAS = [0.1] * 20
UNEQUAL_SIGMAS = [0.4] * 5 + [0.1] * 8 + [0.05] * 7

#: E(X1), E(X2), E(X1^2), E(X2^2) of the equal-variance mixture
TRUE_MOMENTS = (4.478, 4.905, 25.605, 33.920)

moment_names = ('E(X1)', 'E(X2)', 'E(X1^2)', 'E(X2^2)')

#: a sample is in a mode when closer than this many standard deviations
capture_radius = 4.0

variants = ('equal', 'unequal')

# Pairs of algorithms compared in ratio tables, numerator first
ratio_pairs = (('pt', 'ees'), ('pt', 'pteem'), ('ees', 'pteem'))


class GaussianMixture2D(TargetModel):
    '''
    Mixture of isotropic bivariate Gaussians with weights ``w_i``, means
    ``mu_i`` and standard deviations ``sigma_i``, each component scaled by
    ``w_i / (sigma_i sqrt(2 pi))``. The probability mass of component i
    is therefore proportional to ``w_i sigma_i``.
    '''
    state_descriptor = 2

    def __init__(self, means=MEANS, sigmas=EQUAL_SIGMAS, weights=None):
        means = np.asarray(means, dtype=float)
        if means.ndim != 2 or means.shape[1] != 2:
            raise ConfigurationError('mixture means must be 2-D points')
        n = means.shape[0]
        sigmas = np.asarray(sigmas, dtype=float)
        if sigmas.shape != (n,) or np.any(sigmas <= 0):
            raise ConfigurationError(
                'one positive standard deviation per component is needed')
        if weights is None:
            weights = np.full(n, 1.0 / n)
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (n,) or np.any(weights <= 0) \
                or abs(weights.sum() - 1.0) > 1e-12:
            raise ConfigurationError(
                'mixture weights must be positive and sum to 1')
        self.means = means
        self.sigmas = sigmas
        self.weights = weights
        self.log_weights = np.log(weights)
        self._log_norms = self.log_weights - np.log(
            sigmas * math.sqrt(2 * math.pi))
        masses = weights * sigmas
        self.masses = masses / masses.sum()

    @property
    def n_components(self):
        return len(self.weights)

    def log_density(self, x):
        return mixture_log_density(self, x)

    def coordinate_names(self):
        return ['x1', 'x2']


def mixture_log_density(m, x):
    '''
    Log density of the mixture at point ``x`` by log-sum-exp over the
    weighted component terms.
    '''
    x = np.asarray(x, dtype=float)
    d2 = ((m.means - x) ** 2).sum(axis=1)
    return float(logsumexp(m._log_norms - d2 / (2.0 * m.sigmas ** 2)))


def assign_modes(points, m):
    '''
    Nearest mean (1-based) of every point and whether the point lies within
    ``capture_radius`` standard deviations of it.
    '''
    points = np.atleast_2d(np.asarray(points, dtype=float))
    distances = np.sqrt(((points[:, None, :] - m.means[None, :, :]) ** 2)
                        .sum(axis=2))
    nearest = np.argmin(distances, axis=1)
    closest = distances[np.arange(len(points)), nearest]
    visited = closest < capture_radius * m.sigmas[nearest]
    return nearest + 1, visited


def assign_mode(x, m):
    modes, visited = assign_modes([x], m)
    return int(modes[0]), bool(visited[0])


ModeStats = namedtuple('ModeStats', ['counts', 'frequencies', 'errors'])
ModeStats.__doc__ = '''\
Visits of the target chain to each mode. Frequencies are computed over the
samples lying in a mode and errors are ``|f_i - p_i|`` where ``p_i`` is the
mass of component i, ``1/n_modes`` when every ``w_i sigma_i`` is equal.'''


def mode_stats(samples, m):
    modes, visited = assign_modes(samples, m)
    counts = np.bincount(modes[visited] - 1, minlength=m.n_components)
    total = counts.sum()
    if total:
        frequencies = counts / float(total)
    else:
        frequencies = np.zeros(m.n_components)
    errors = np.abs(frequencies - m.masses)
    return ModeStats(counts, frequencies, errors)


def visited_mode_count(stats):
    return int(np.count_nonzero(stats.counts))


def moments(samples):
    '''
    Estimates of ``E(X1), E(X2), E(X1^2), E(X2^2)``.
    '''
    samples = np.asarray(samples, dtype=float)
    return np.concatenate([samples.mean(axis=0),
                           (samples ** 2).mean(axis=0)])


def true_moments(m):
    first = m.masses.dot(m.means)
    second = m.masses.dot(m.means ** 2 + (m.sigmas ** 2)[:, None])
    return np.concatenate([first, second])


def sample_mixture(m, size, rng):
    '''
    Independent draws from the mixture.
    '''
    components = rng.choice(m.n_components, size=size, p=m.masses)
    noise = rng.standard_normal((size, 2))
    return m.means[components] + m.sigmas[components, None] * noise


def configure_unequal_variances():
    '''
    Mixture with standard deviations 0.4 (components 1-5), 0.1 (6-13) and
    0.05 (14-20), and the ladders used with it: six energy levels, the
    first at 0.5 and five log-evenly spaced in ``[1.5, 20]``; PTEEM keeps
    its 20 chains, EES gets six chains log-evenly spaced up to 60.
    '''
    levels = {
        'levels': None,
        'first_levels': [0.5],
        'h1': 1.5,
        'hd': 20.0,
        'rings': 5,
        'energy_scheme': 'log_levels',
    }
    ladders = {
        'pt': dict(levels),
        'pteem': dict(levels),
        'ees': dict(levels, temperatures=None, chains=6, t_max=60.0,
                    temperature_scheme='log_even'),
    }
    return GaussianMixture2D(sigmas=UNEQUAL_SIGMAS), ladders


def variant_config(variant):
    if variant in (None, 'equal'):
        return None
    if variant == 'unequal':
        return configure_unequal_variances()[1]
    raise ConfigurationError('unknown mixture variant {0!r}, expected one '
                             'of {1}'.format(variant, ', '.join(variants)))


def model_from_config(model_config):
    variant = model_config.get('variant', 'equal')
    if variant == 'unequal':
        return configure_unequal_variances()[0]
    variant_config(variant)
    return GaussianMixture2D()


def uniform_initial_state(rng):
    return rng.uniform(0.0, 1.0, size=2)


def run_mixture2d(config, seed, verbose=None):
    '''
    One run; returns ``(trace, summary)``.
    '''
    model = model_from_config(config.model)
    kernels = RandomWalkKernel.for_temperatures(
        config.temperatures(), config.section['step_scale'])
    trace = run_trace(config, model, kernels, uniform_initial_state, seed,
                      verbose=verbose)
    return trace, summarize_run(trace, model)


def summarize_run(trace, model):
    samples = trace.chain_samples(1)
    stats = mode_stats(samples, model)
    return {
        'visited_modes': visited_mode_count(stats),
        'counts': stats.counts.tolist(),
        'frequencies': stats.frequencies.tolist(),
        'errors': stats.errors.tolist(),
        'moments': moments(samples).tolist(),
        'acceptance': acceptance_summary(trace),
    }


def summarize_study(runs, model):
    '''
    Pool per-run summaries: visited modes, per-mode median and maximum of
    the frequency errors, moment estimates and acceptance rates.
    '''
    errors = np.array([r['errors'] for r in runs])
    estimates = np.array([r['moments'] for r in runs])
    return {
        'runs': len(runs),
        'visited_modes': describe([r['visited_modes'] for r in runs]),
        'err_median': np.median(errors, axis=0).tolist(),
        'err_max': errors.max(axis=0).tolist(),
        'moments_mean': estimates.mean(axis=0).tolist(),
        'moments_sd': (estimates.std(axis=0, ddof=1) if len(runs) > 1
                       else np.zeros(4)).tolist(),
        'true_moments': true_moments(model).tolist(),
        'local_acceptance': nan_mean(
            [r['acceptance']['local'] for r in runs]),
        'exchange_acceptance': nan_mean(
            [r['acceptance']['exchange'] for r in runs]),
    }


def run_mixture_study(config, verbose=None):
    '''
    All runs of one algorithm. Returns ``(traces, run summaries, pooled
    summary)``.
    '''
    results = run_many(run_mixture2d, config, verbose=verbose)
    traces = [trace for trace, _ in results]
    runs = [summary for _, summary in results]
    model = model_from_config(config.model)
    return traces, runs, summarize_study(runs, model)


def ratio_table(studies):
    '''
    Per-mode ratios of the median (``R_med``) and maximal (``R_max``)
    frequency errors between pairs of algorithms.

    ``studies`` maps an algorithm name to its pooled summary. Returns a
    list of ``(numerator, denominator, statistic, ratios, mean ratio)``.
    '''
    table = []
    for a, b in ratio_pairs:
        if a not in studies or b not in studies:
            continue
        for statistic, key in (('R_med', 'err_median'), ('R_max', 'err_max')):
            num = np.asarray(studies[a][key], dtype=float)
            den = np.asarray(studies[b][key], dtype=float)
            with np.errstate(divide='ignore', invalid='ignore'):
                ratios = num / den
            finite = ratios[np.isfinite(ratios)]
            mean = float(finite.mean()) if finite.size else float('nan')
            table.append((a, b, statistic, ratios, mean))
    return table


def calibration_chain(config, rng):
    '''
    Model, untempered local kernel and starting point of a pilot chain.
    '''
    model = model_from_config(config.model)
    kernel = RandomWalkKernel(config.section['step_scale'])
    return model, kernel, uniform_initial_state(rng)
