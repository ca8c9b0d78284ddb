# -*- coding: utf-8 -*-
'''
Finite-state targets whose tempered laws can be enumerated exactly; used
to check the samplers against their stationary distributions.
'''
from __future__ import absolute_import, division, print_function

import numpy as np

from pteem.kernels import LocalKernel
from pteem.model import TargetModel, metropolis_accept


class DiscreteTarget(TargetModel):
    '''
    Target on ``{0, ..., K-1}`` given by unnormalized weights (zero weights
    lie off the support).
    '''

    def __init__(self, weights):
        weights = np.asarray(weights, dtype=float)
        if weights.ndim != 1 or np.any(weights < 0) or not weights.any():
            raise ValueError('weights must be a nonnegative, nonzero vector')
        self.weights = weights
        with np.errstate(divide='ignore'):
            self.log_weights = np.log(weights)
        self.state_descriptor = len(weights)

    def log_density(self, x):
        return float(self.log_weights[int(x)])

    def coordinates(self, x):
        return np.array([float(x)])

    def coordinate_names(self):
        return ['state']

    def exact_distribution(self, temperature=1.0, truncation=None):
        '''
        Normalized law of the tempered (optionally truncated) target.
        '''
        with np.errstate(divide='ignore'):
            energies = -self.log_weights
        if truncation is not None:
            energies = np.maximum(energies, truncation)
        log_p = -energies / temperature
        finite = np.isfinite(log_p)
        p = np.zeros_like(log_p)
        p[finite] = np.exp(log_p[finite] - log_p[finite].max())
        return p / p.sum()


class DiscreteMetropolisKernel(LocalKernel):
    '''
    Metropolis kernel proposing a uniformly chosen different state.
    '''

    def __init__(self, n_states):
        self.n_states = int(n_states)

    def step(self, x, td, rng):
        shift = 1 + int(rng.integers(self.n_states - 1))
        candidate = (int(x) + shift) % self.n_states
        accepted, _ = metropolis_accept(td.log_density(candidate),
                                        td.log_density(x), rng)
        return (candidate if accepted else x), accepted


def empirical_distribution(samples, n_states):
    samples = np.asarray(samples, dtype=int).ravel()
    return np.bincount(samples, minlength=n_states) / float(len(samples))


def flow_z_scores(flows):
    '''
    Standardized asymmetry of observed moves between states.

    ``flows`` maps ``(a, b)`` to the number of moves from ``a`` to ``b``.
    Returns ``{(a, b): z}`` for every unordered pair of distinct states
    with some flow, where ``z = (F(a, b) - F(b, a)) / sqrt(F(a, b) +
    F(b, a))``. When moves start from the stationary law of a reversible
    kernel each ``z`` is approximately standard normal.
    '''
    scores = {}
    for (a, b) in flows:
        if a == b:
            continue
        pair = min((a, b), (b, a))
        if pair in scores:
            continue
        forward = flows.get(pair, 0)
        backward = flows.get(pair[::-1], 0)
        if forward + backward:
            scores[pair] = (forward - backward) / np.sqrt(forward + backward)
    return scores
