# -*- coding: utf-8 -*-
'''
Target densities, energies and the tempered / truncated-tempered family
shared by all samplers.

Every density is handled in log space and is unnormalized: the energy of a
state is ``h(x) = -log pi~(x)`` and acceptance ratios only ever use
differences of log densities, so normalizing constants are never needed.
'''
from __future__ import absolute_import, division, print_function

import math

import numpy as np

from pteem.errors import ConfigurationError, EvaluationError


class TargetModel(object):
    '''
    Unnormalized target density on a state space.

    Subclasses implement :meth:`log_density`, which must be deterministic,
    finite on the support and ``-inf`` outside of it. Models whose tempered
    family is not ``pi~^(1/T)`` (for instance when only a likelihood is
    tempered) override :meth:`tempered_log_density`.
    '''

    #: dimension (int) or description of a discrete structure
    state_descriptor = None

    def log_density(self, x):
        raise NotImplementedError(
            '{0} does not define log_density'.format(type(self).__name__))

    def tempered_log_density(self, x, temperature):
        return self.log_density(x) / temperature

    def energy(self, x):
        return energy(self, x)

    def copy_state(self, x):
        '''
        Return a copy of ``x`` that later in-place updates of ``x`` cannot
        alter. States of the base class are treated as immutable.
        '''
        return x

    def coordinates(self, x):
        '''
        Flat real vector describing ``x``, written to sample files.
        '''
        return np.atleast_1d(np.asarray(x, dtype=float)).ravel()

    def coordinate_names(self):
        if isinstance(self.state_descriptor, int):
            return ['x%d' % (i + 1) for i in range(self.state_descriptor)]
        return ['x1']


def _describe(x, limit=200):
    text = repr(x)
    if len(text) > limit:
        text = text[:limit] + '...'
    return text


def check_log_value(value, x):
    if math.isnan(value):
        raise EvaluationError(
            'log density is NaN for state {0}'.format(_describe(x)))
    return value


def energy(model, x):
    '''
    Energy ``h(x) = -log pi~(x)`` of a state; ``+inf`` off the support.
    '''
    value = check_log_value(float(model.log_density(x)), x)
    if value == -np.inf:
        return np.inf
    return -value


class TemperedDensity(object):
    '''
    ``pi~^(1/T)`` when ``truncation`` is None, otherwise the truncated
    density ``exp(-max{h(x), H}/T)`` of the equi-energy sampler.
    '''

    def __init__(self, model, temperature=1.0, truncation=None):
        temperature = float(temperature)
        if not temperature >= 1.0:
            raise ConfigurationError(
                'temperature must be >= 1, got {0}'.format(temperature))
        self.model = model
        self.temperature = temperature
        self.truncation = (None if truncation is None
                           else float(truncation))

    def log_density(self, x):
        if self.truncation is None:
            return check_log_value(
                float(self.model.tempered_log_density(x, self.temperature)),
                x)
        h = energy(self.model, x)
        return -max(h, self.truncation) / self.temperature

    def __repr__(self):
        return 'TemperedDensity(T={0}, H={1})'.format(self.temperature,
                                                      self.truncation)


def tempered_log_density(td, x):
    return td.log_density(x)


def acceptance_probability(numerator, denominator):
    '''
    ``min{1, exp(numerator - denominator)}`` for two log densities.

    When the denominator is null (``-inf``) the numerator is null as well
    and the move is refused: the probability is 0.
    '''
    if denominator == -np.inf or numerator == -np.inf:
        return 0.0
    delta = numerator - denominator
    if math.isnan(delta):
        return 0.0
    if delta >= 0.0:
        return 1.0
    return math.exp(delta)


def metropolis_accept(numerator, denominator, rng):
    '''
    Draw the Metropolis decision; returns ``(accepted, probability)``.
    '''
    probability = acceptance_probability(numerator, denominator)
    if probability >= 1.0:
        return True, 1.0
    if probability <= 0.0:
        return False, 0.0
    return bool(rng.random() < probability), probability
