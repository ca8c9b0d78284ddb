# -*- coding: utf-8 -*-
'''
Temperature and energy ladders, energy rings and the ring-occupancy
diagnostics used to check a ladder calibration.
'''
from __future__ import absolute_import, division, print_function

from bisect import bisect_right
from collections import namedtuple
import math

import numpy as np

from pteem.defaults import (energy_schemes, repartition_overlap_threshold,
                            temperature_schemes)
from pteem.errors import ConfigurationError
from pteem.log import calibration_warning
from pteem.model import TemperedDensity, energy


class TemperatureLadder(object):
    '''
    Ordered temperatures ``T_1 = 1 < T_2 < ... < T_N``.
    '''

    def __init__(self, temperatures):
        temperatures = tuple(float(t) for t in temperatures)
        if not temperatures:
            raise ConfigurationError('empty temperature ladder')
        if temperatures[0] != 1.0:
            raise ConfigurationError(
                'first temperature must be exactly 1, got {0}'.format(
                    temperatures[0]))
        if any(b <= a for a, b in zip(temperatures, temperatures[1:])):
            raise ConfigurationError(
                'temperatures must be strictly increasing: {0}'.format(
                    temperatures))
        self.temperatures = temperatures

    def __len__(self):
        return len(self.temperatures)

    def __getitem__(self, index):
        return self.temperatures[index]

    def __iter__(self):
        return iter(self.temperatures)

    def __eq__(self, other):
        return (isinstance(other, TemperatureLadder)
                and self.temperatures == other.temperatures)

    def __repr__(self):
        return 'TemperatureLadder({0})'.format(list(self.temperatures))


class EnergyLadder(object):
    '''
    Energy levels ``H_1 < ... < H_d`` (``H_{d+1} = inf`` is implicit).

    Ring ``j`` is ``[H_j, H_{j+1})`` except ring 1 which extends to
    ``-inf``: ``D_1 = (-inf, H_2)``.
    '''

    def __init__(self, levels):
        levels = tuple(float(h) for h in levels)
        if len(levels) < 1:
            raise ConfigurationError('an energy ladder needs at least one '
                                     'level')
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ConfigurationError(
                'energy levels must be strictly increasing: {0}'.format(
                    levels))
        if any(math.isnan(h) or math.isinf(h) for h in levels):
            raise ConfigurationError('energy levels must be finite')
        self.levels = levels

    @property
    def d(self):
        return len(self.levels)

    def __len__(self):
        return len(self.levels)

    def __eq__(self, other):
        return (isinstance(other, EnergyLadder)
                and self.levels == other.levels)

    def ring_index(self, h):
        return ring_index(self, h)

    def ring_bounds(self):
        '''
        List of ``(lower, upper)`` bounds of each ring.
        '''
        lowers = [-np.inf] + list(self.levels[1:])
        uppers = list(self.levels[1:]) + [np.inf]
        return list(zip(lowers, uppers))

    def ring_labels(self):
        labels = []
        for lower, upper in self.ring_bounds():
            labels.append('{0}{1}:{2})'.format(
                '(' if lower == -np.inf else '[', lower, upper))
        return labels

    def __repr__(self):
        return 'EnergyLadder({0})'.format(list(self.levels))


def build_temperature_ladder(t_max, n, scheme='log_even'):
    '''
    Temperatures from 1 to ``t_max`` for ``n`` chains.

    ``log_even`` spaces ``log T`` evenly, ``inverse_even`` spaces ``1/T``
    evenly and ``inverse_geometric`` spaces ``1/T`` geometrically (which
    yields the same ladder as ``log_even`` up to rounding).
    '''
    t_max = float(t_max)
    n = int(n)
    if not t_max > 1.0:
        raise ConfigurationError(
            'maximal temperature must be > 1, got {0}'.format(t_max))
    if n < 2:
        raise ConfigurationError(
            'a temperature ladder needs at least 2 chains, got {0}'.format(n))
    if scheme == 'log_even':
        temperatures = np.exp(np.linspace(0.0, math.log(t_max), n))
    elif scheme == 'inverse_even':
        temperatures = 1.0 / np.linspace(1.0, 1.0 / t_max, n)
    elif scheme == 'inverse_geometric':
        temperatures = 1.0 / np.geomspace(1.0, 1.0 / t_max, n)
    else:
        raise ConfigurationError(
            'unknown temperature scheme {0!r}, expected one of {1}'.format(
                scheme, ', '.join(temperature_schemes)))
    temperatures = [float(t) for t in temperatures]
    temperatures[0] = 1.0
    temperatures[-1] = t_max
    return TemperatureLadder(temperatures)


def build_energy_ladder(h1, hd, d, scheme='log_levels', ratio=2.0):
    '''
    ``d`` energy levels between ``h1`` and ``hd``.

    ``log_levels`` spaces ``ln H_j`` evenly; ``log_increments`` spaces
    ``ln(H_{j+1} - H_j)`` evenly, the increments growing by ``ratio``.
    '''
    h1 = float(h1)
    hd = float(hd)
    d = int(d)
    if d < 2:
        raise ConfigurationError(
            'an energy ladder built from bounds needs d >= 2, got {0}'.format(
                d))
    if not h1 < hd:
        raise ConfigurationError(
            'energy bounds must satisfy h1 < hd, got {0} and {1}'.format(
                h1, hd))
    if scheme == 'log_levels':
        if h1 <= 0:
            raise ConfigurationError(
                'log_levels needs positive levels, got h1={0}'.format(h1))
        levels = np.exp(np.linspace(math.log(h1), math.log(hd), d))
    elif scheme == 'log_increments':
        ratio = float(ratio)
        if not ratio > 1.0:
            raise ConfigurationError('increment ratio must be > 1')
        steps = ratio ** np.arange(d - 1)
        levels = h1 + (hd - h1) * np.concatenate(
            [[0.0], np.cumsum(steps)]) / steps.sum()
    else:
        raise ConfigurationError(
            'unknown energy scheme {0!r}, expected one of {1}'.format(
                scheme, ', '.join(energy_schemes)))
    levels = [float(h) for h in levels]
    levels[0] = h1
    levels[-1] = hd
    return EnergyLadder(levels)


def ring_index(ladder, h):
    '''
    Index (1 to d) of the ring containing energy ``h``. Infinite energies
    fall in the top ring.
    '''
    if math.isnan(h):
        raise ValueError('cannot assign a ring to a NaN energy')
    return max(bisect_right(ladder.levels, h), 1)


def check_chain_count(n_chains, ladder):
    '''
    Emit a calibration warning when fewer than ``3 d`` chains share ``d``
    rings.
    '''
    if n_chains < 3 * ladder.d:
        calibration_warning(
            '{0} chains for {1} energy rings: at least {2} chains are '
            'advised'.format(n_chains, ladder.d, 3 * ladder.d))
        return False
    return True


def occupancy_from_rings(rings, d):
    '''
    Chains x rings count table from an array of 1-based ring indices of
    shape (chains, iterations).
    '''
    rings = np.asarray(rings, dtype=int)
    if rings.ndim != 2 or rings.shape[1] == 0:
        raise ValueError('occupancy needs at least one recorded iteration')
    table = np.zeros((rings.shape[0], d), dtype=np.int64)
    for chain in range(rings.shape[0]):
        table[chain] = np.bincount(rings[chain] - 1, minlength=d)[:d]
    return table


def occupancy_table(trace):
    '''
    Number of recorded iterations each chain spent in each energy ring.
    '''
    if trace.rings is None or np.size(trace.rings) == 0:
        raise ValueError('empty trace: no ring occupancy recorded')
    return occupancy_from_rings(trace.rings, trace.energy_ladder.d)


Repartition = namedtuple('Repartition', ['ok', 'gaps', 'weak', 'overlaps'])


def check_repartition(table, threshold=repartition_overlap_threshold):
    '''
    Look for energy gaps between adjacent chains of an occupancy table.

    A gap is reported between chains ``i`` and ``i+1`` (1-based) when they
    have no ring with nonzero counts in both rows. A pair whose best common
    ring holds less than ``threshold`` of the mass of both rows is reported
    as weak and triggers a :class:`~pteem.log.CalibrationWarning`.
    '''
    table = np.asarray(table, dtype=float)
    totals = table.sum(axis=1, keepdims=True)
    shares = np.divide(table, totals, out=np.zeros_like(table),
                       where=totals > 0)
    gaps = []
    weak = []
    overlaps = []
    for i in range(table.shape[0] - 1):
        common = np.minimum(shares[i], shares[i + 1])
        overlap = float(common.max()) if common.size else 0.0
        overlaps.append(overlap)
        if not np.any((table[i] > 0) & (table[i + 1] > 0)):
            gaps.append((i + 1, i + 2))
        elif overlap < threshold:
            weak.append((i + 1, i + 2, overlap))
    for i, k, overlap in weak:
        calibration_warning(
            'chains {0} and {1} share only {2:.2%} of their mass in a common '
            'energy ring'.format(i, k, overlap))
    return Repartition(not gaps, gaps, weak, overlaps)


def calibrate_energy_ladder(model, kernel, x0, d, rng, iterations=2000,
                            burnin=500, early=10, scheme='log_levels'):
    '''
    Choose energy levels from a pilot chain targeting the untempered model.

    ``H_d`` is the energy reached after ``early`` iterations and ``H_1`` the
    lowest energy observed after ``burnin`` iterations; the ``d`` levels are
    then spaced with ``scheme``.
    '''
    if not 0 < early < burnin < iterations:
        raise ConfigurationError(
            'pilot run needs 0 < early < burnin < iterations')
    td = TemperedDensity(model)
    x = x0
    energies = []
    for _ in range(iterations):
        x, _accepted = kernel.step(x, td, rng)
        energies.append(energy(model, x))
    energies = np.asarray(energies)
    hd = energies[early - 1]
    after = energies[burnin:]
    h1 = float(after[np.isfinite(after)].min())
    if not np.isfinite(hd) or hd <= h1:
        hd = float(energies[np.isfinite(energies)].max())
    return build_energy_ladder(h1, hd, d, scheme=scheme)
