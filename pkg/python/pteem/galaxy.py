# -*- coding: utf-8 -*-
'''
Gaussian mixture with a known number ``k`` of components fitted to the
Galaxy velocities (82 values, in 1000 km/s) by Gibbs sampling.

Priors::

    mu_j ~ N(xi, 1/kappa)      1/sigma_j^2 ~ Gamma(alpha, rate=beta)
    beta ~ Gamma(g, rate=h)    w ~ Dirichlet(delta, ..., delta)
    P(c_l = j) = w_j

Only the likelihood is tempered: chain i targets ``p(y|x)^(1/T_i) p(x)``.
The energy used to file states in rings is ``-log p(y|x) p(x)``.
'''
from __future__ import absolute_import, division, print_function

from collections import namedtuple
import math

import numpy as np
from scipy.special import gammaln, logsumexp

from pteem import find_share_file
from pteem.errors import ConfigurationError, EvaluationError, IngestionError
from pteem.experiment import (acceptance_summary, describe, nan_mean,
                              run_many, run_trace)
from pteem.kernels import GibbsKernel
from pteem.model import TargetModel, acceptance_probability

_log_2pi = math.log(2 * math.pi)


def load_galaxy_data(path=None):
    '''
    Read one velocity per line (blank lines and ``#`` comments are
    ignored). Without ``path``, the data shipped with pteem is used.
    '''
    if path is None:
        path = find_share_file('data', 'galaxy.txt')
        if path is None:
            raise IngestionError('the Galaxy data file is not installed')
    try:
        with open(path) as f:
            lines = f.readlines()
    except (IOError, OSError) as e:
        raise IngestionError('cannot read Galaxy data {0}: {1}'.format(
            path, e))
    values = []
    for number, line in enumerate(lines, 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise IngestionError('{0}:{1}: not a number: {2!r}'.format(
                path, number, line))
    if not values:
        raise IngestionError('no data in {0}'.format(path))
    return np.array(values)


class GalaxyHyper(namedtuple('GalaxyHyper', ['k', 'xi', 'kappa', 'alpha',
                                             'g', 'h', 'delta'])):
    __slots__ = ()

    def __new__(cls, k=6, xi=20.0, kappa=None, alpha=3.0, g=0.2, h=None,
                delta=1.0, data_range=10.0):
        '''
        ``kappa`` and ``h`` default to ``1/R^2`` and ``10/R^2`` where ``R``
        is ``data_range``.
        '''
        if kappa is None:
            kappa = 1.0 / data_range ** 2
        if h is None:
            h = 10.0 / data_range ** 2
        self = super(GalaxyHyper, cls).__new__(
            cls, int(k), float(xi), float(kappa), float(alpha), float(g),
            float(h), float(delta))
        for name in ('kappa', 'alpha', 'g', 'h', 'delta'):
            if not getattr(self, name) > 0:
                raise ConfigurationError('{0} must be > 0'.format(name))
        if self.k < 1:
            raise ConfigurationError('k must be >= 1')
        return self

    @classmethod
    def from_config(cls, model):
        return cls(k=model['k'], xi=model['xi'], kappa=model.get('kappa'),
                   alpha=model['alpha'], g=model['g'], h=model.get('h'),
                   delta=model['delta'], data_range=model['range'])


MixtureParamState = namedtuple('MixtureParamState',
                               ['mu', 'precision', 'weights', 'labels',
                                'beta'])
MixtureParamState.__doc__ = '''\
Means, precisions ``1/sigma^2`` and weights of the ``k`` components,
0-based component label of each observation and prior rate ``beta``.
Updates build new states, so a state is never modified in place.'''


def component_counts(x, k):
    return np.bincount(x.labels, minlength=k)


def _check_precisions(x):
    if not np.all(np.isfinite(x.precision)) or np.any(x.precision <= 0):
        raise EvaluationError('degenerate precision {0}'.format(x.precision))


def log_likelihood(x, y):
    '''
    ``log p(y | mu, sigma^-2, c)``.
    '''
    _check_precisions(x)
    precision = x.precision[x.labels]
    residual = y - x.mu[x.labels]
    return float(0.5 * (np.log(precision) - _log_2pi).sum()
                 - 0.5 * (precision * residual ** 2).sum())


def log_prior(x, hyper):
    '''
    ``log p(mu, sigma^-2, w, c, beta)`` with all normalizing constants.
    '''
    _check_precisions(x)
    k = hyper.k
    mu_term = (0.5 * k * (math.log(hyper.kappa) - _log_2pi)
               - 0.5 * hyper.kappa * ((x.mu - hyper.xi) ** 2).sum())
    precision_term = (k * (hyper.alpha * math.log(x.beta)
                           - gammaln(hyper.alpha))
                      + ((hyper.alpha - 1) * np.log(x.precision)).sum()
                      - x.beta * x.precision.sum())
    with np.errstate(divide='ignore'):
        log_w = np.log(x.weights)
    weight_term = (gammaln(k * hyper.delta) - k * gammaln(hyper.delta)
                   + ((hyper.delta - 1) * log_w).sum())
    label_term = log_w[x.labels].sum()
    beta_term = (hyper.g * math.log(hyper.h) - gammaln(hyper.g)
                 + (hyper.g - 1) * math.log(x.beta) - hyper.h * x.beta)
    return float(mu_term + precision_term + weight_term + label_term
                 + beta_term)


def tempered_posterior_log(x, y, temperature, hyper):
    '''
    ``log p(y|x) / T + log p(x)``.
    '''
    return log_likelihood(x, y) / temperature + log_prior(x, hyper)


def sample_means(x, y, temperature, hyper, rng):
    m = component_counts(x, hyper.k)
    sums = np.bincount(x.labels, weights=y, minlength=hyper.k)
    scaled = x.precision / temperature
    precision = m * scaled + hyper.kappa
    mean = (scaled * sums + hyper.xi * hyper.kappa) / precision
    mu = mean + rng.standard_normal(hyper.k) / np.sqrt(precision)
    return x._replace(mu=mu)


def sample_precisions(x, y, temperature, hyper, rng):
    m = component_counts(x, hyper.k)
    squares = np.bincount(x.labels, weights=(y - x.mu[x.labels]) ** 2,
                          minlength=hyper.k)
    shape = hyper.alpha + m / (2.0 * temperature)
    rate = x.beta + squares / (2.0 * temperature)
    return x._replace(precision=rng.gamma(shape, 1.0 / rate))


def sample_weights(x, y, temperature, hyper, rng):
    m = component_counts(x, hyper.k)
    return x._replace(weights=rng.dirichlet(hyper.delta + m))


def label_probabilities(x, y, temperature):
    '''
    n x k matrix of the tempered allocation probabilities.
    '''
    with np.errstate(divide='ignore'):
        log_w = np.log(x.weights)
    log_p = (0.5 * np.log(x.precision) / temperature
             - 0.5 * x.precision * (y[:, None] - x.mu) ** 2 / temperature
             + log_w)
    return np.exp(log_p - logsumexp(log_p, axis=1, keepdims=True))


def sample_labels(x, y, temperature, hyper, rng):
    p = label_probabilities(x, y, temperature)
    cumulative = np.cumsum(p, axis=1)
    u = rng.random((len(y), 1)) * cumulative[:, -1:]
    labels = np.minimum((cumulative < u).sum(axis=1), hyper.k - 1)
    return x._replace(labels=labels)


def sample_beta(x, y, temperature, hyper, rng):
    shape = hyper.g + hyper.k * hyper.alpha
    rate = hyper.h + x.precision.sum()
    return x._replace(beta=float(rng.gamma(shape, 1.0 / rate)))


#: blocks of a sweep, in update order
sweep_order = (('mu', sample_means), ('precision', sample_precisions),
               ('weights', sample_weights), ('labels', sample_labels),
               ('beta', sample_beta))


def galaxy_gibbs_sweep(x, y, temperature, hyper, rng):
    '''
    Draw every block once from its tempered full conditional.
    '''
    for _name, sample in sweep_order:
        x = sample(x, y, temperature, hyper, rng)
    return x


def galaxy_ee_acceptance(x_i, x_j, t_i, t_j, y):
    '''
    Acceptance probability of exchanging ``x_i`` (chain at ``t_i``) and
    ``x_j`` (chain at ``t_j``); the priors cancel.
    '''
    if t_i == t_j:
        return 1.0
    log_ratio = ((1.0 / t_j - 1.0 / t_i)
                 * (log_likelihood(x_i, y) - log_likelihood(x_j, y)))
    return acceptance_probability(log_ratio, 0.0)


def permutation_rank(permutation):
    '''
    1-based rank of a permutation of ``0..k-1`` in lexicographic order.
    '''
    permutation = list(permutation)
    k = len(permutation)
    rank = 0
    for i, value in enumerate(permutation):
        smaller = sum(1 for v in permutation[i + 1:] if v < value)
        rank += smaller * math.factorial(k - 1 - i)
    return rank + 1


def label_mode_of(x):
    '''
    Which of the ``k!`` symmetric labelings ``x`` lies in: the rank of the
    permutation sorting ``mu`` ascending (ties kept in index order).
    '''
    mu = x.mu if isinstance(x, MixtureParamState) else x
    return permutation_rank(np.argsort(np.asarray(mu), kind='stable'))


def label_modes(mu_samples):
    return np.array([label_mode_of(mu) for mu in np.asarray(mu_samples)])


class GalaxyModel(TargetModel):

    def __init__(self, y, hyper):
        self.y = np.asarray(y, dtype=float)
        self.hyper = hyper
        self.state_descriptor = 'galaxy mixture k={0} n={1}'.format(
            hyper.k, len(self.y))

    def log_density(self, x):
        return log_likelihood(x, self.y) + log_prior(x, self.hyper)

    def tempered_log_density(self, x, temperature):
        return tempered_posterior_log(x, self.y, temperature, self.hyper)

    def conditionals(self):
        def block(sample):
            def draw(x, temperature, rng):
                return sample(x, self.y, temperature, self.hyper, rng)
            return draw
        return [(name, block(sample)) for name, sample in sweep_order]

    def kernel(self):
        return GibbsKernel(self.conditionals())

    def initial_state(self, rng):
        '''
        Means drawn among the data, common precision ``1/var(y)``, equal
        weights; labels and ``beta`` are then drawn from their conditionals.
        '''
        k = self.hyper.k
        x = MixtureParamState(
            mu=rng.choice(self.y, size=k, replace=len(self.y) < k),
            precision=np.full(k, 1.0 / self.y.var()),
            weights=np.full(k, 1.0 / k),
            labels=np.zeros(len(self.y), dtype=int),
            beta=self.hyper.alpha * self.y.var())
        x = sample_labels(x, self.y, 1.0, self.hyper, rng)
        return sample_beta(x, self.y, 1.0, self.hyper, rng)

    def coordinates(self, x):
        return np.concatenate([x.mu, x.precision, x.weights, [x.beta]])

    def coordinate_names(self):
        k = self.hyper.k
        return (['mu_%d' % (j + 1) for j in range(k)]
                + ['precision_%d' % (j + 1) for j in range(k)]
                + ['weight_%d' % (j + 1) for j in range(k)]
                + ['beta'])


def model_from_config(model):
    return GalaxyModel(load_galaxy_data(model.get('data')),
                       GalaxyHyper.from_config(model))


def label_mode_stats(modes, k):
    '''
    Visited labelings and frequency errors ``|f_i - 1/k!|`` over the
    ``k!`` labelings.
    '''
    n_modes = math.factorial(k)
    counts = np.bincount(np.asarray(modes) - 1, minlength=n_modes)
    frequencies = counts / float(counts.sum())
    return counts, np.abs(frequencies - 1.0 / n_modes)


def run_galaxy(config, seed, verbose=None):
    '''
    One run; returns ``(trace, summary)``.
    '''
    model = model_from_config(config.model)
    kernels = [model.kernel() for _ in config.temperatures()]
    trace = run_trace(config, model, kernels, model.initial_state, seed,
                      verbose=verbose)
    return trace, summarize_run(trace, model.hyper.k)


def summarize_run(trace, k):
    modes = label_modes(trace.chain_samples(1)[:, :k])
    counts, errors = label_mode_stats(modes, k)
    return {
        'visited_modes': int(np.count_nonzero(counts)),
        'err_mean': float(errors.mean()),
        'err_median': float(np.median(errors)),
        'errors': errors,
        'acceptance': acceptance_summary(trace),
    }


def summarize_study(runs):
    errors = np.concatenate([r['errors'] for r in runs])
    return {
        'runs': len(runs),
        'visited_modes': describe([r['visited_modes'] for r in runs]),
        'err_mean': float(errors.mean()),
        'err_median': float(np.median(errors)),
        'exchange_acceptance': nan_mean(
            [r['acceptance']['exchange'] for r in runs]),
        'local_acceptance': nan_mean(
            [r['acceptance']['local'] for r in runs]),
    }


def run_galaxy_study(config, verbose=None):
    '''
    All runs of one algorithm. Returns ``(traces, run summaries, pooled
    summary)``.
    '''
    results = run_many(run_galaxy, config, verbose=verbose)
    traces = [trace for trace, _ in results]
    runs = [summary for _, summary in results]
    return traces, runs, summarize_study(runs)


def calibration_chain(config, rng):
    model = model_from_config(config.model)
    return model, model.kernel(), model.initial_state(rng)
