# -*- coding: utf-8 -*-
'''
Local moves: random-walk Metropolis-Hastings and Gibbs sweeps.

A local kernel is any object with a ``step(x, td, rng)`` method returning
``(new_state, accepted)`` and leaving the tempered density ``td``
invariant. Kernels keep no state between calls: each call draws only from
the random generator it receives.
'''
from __future__ import absolute_import, division, print_function

from collections import namedtuple
import math

import numpy as np

from pteem.errors import ConfigurationError
from pteem.model import metropolis_accept


class RWProposal(namedtuple('RWProposal', ['step_scale'])):
    '''
    Isotropic Gaussian random-walk proposal of standard deviation
    ``step_scale``.
    '''
    __slots__ = ()

    def __new__(cls, step_scale):
        step_scale = float(step_scale)
        if not step_scale > 0:
            raise ConfigurationError(
                'random walk step scale must be > 0, got {0}'.format(
                    step_scale))
        return super(RWProposal, cls).__new__(cls, step_scale)


def rw_mh_step(x, td, prop, rng):
    '''
    One Metropolis-Hastings step ``x' = x + tau z`` with ``z`` standard
    Gaussian; the old state is returned on rejection.
    '''
    x = np.asarray(x, dtype=float)
    candidate = x + prop.step_scale * rng.standard_normal(x.shape)
    accepted, _ = metropolis_accept(td.log_density(candidate),
                                    td.log_density(x), rng)
    if accepted:
        return candidate, True
    return x, False


def gibbs_sweep(x, temperature, conditionals, rng):
    '''
    Resample every block of ``x`` once, in the order of ``conditionals``.

    ``conditionals`` is a sequence of ``(name, sample)`` pairs where
    ``sample(x, temperature, rng)`` returns ``x`` with its block drawn from
    the tempered full conditional.
    '''
    for _name, sample in conditionals:
        x = sample(x, temperature, rng)
    return x


class LocalKernel(object):
    #: True when every step is accepted (Gibbs kernels)
    always_accepts = False

    def step(self, x, td, rng):
        raise NotImplementedError


class RandomWalkKernel(LocalKernel):

    def __init__(self, step_scale):
        self.proposal = RWProposal(step_scale)

    def step(self, x, td, rng):
        return rw_mh_step(x, td, self.proposal, rng)

    @classmethod
    def for_temperatures(cls, temperatures, base_scale=0.25):
        '''
        One kernel per chain with ``tau_i = base_scale * sqrt(T_i)``.
        '''
        return [cls(base_scale * math.sqrt(t)) for t in temperatures]

    def __repr__(self):
        return 'RandomWalkKernel({0})'.format(self.proposal.step_scale)


class GibbsKernel(LocalKernel):
    '''
    Gibbs sweep over the blocks given by ``conditionals``. The sweep
    targets ``pi^(1/T)`` (or the model's own tempered family); an energy
    truncation carried by the tempered density is not used.
    '''
    always_accepts = True

    def __init__(self, conditionals):
        self.conditionals = list(conditionals)

    def step(self, x, td, rng):
        return gibbs_sweep(x, td.temperature, self.conditionals, rng), True

    def __repr__(self):
        return 'GibbsKernel({0})'.format(
            ', '.join(name for name, _ in self.conditionals))
