# -*- coding: utf-8 -*-
'''
Population drivers: Parallel Tempering (PT), Parallel Tempering with
Equi-Energy Moves (PTEEM) and the Equi-Energy Sampler (EES).

Random numbers come from counter-based (Philox) streams spawned from one
seed: one stream per chain and, for PT/PTEEM, one dedicated stream for the
exchange decisions. The draws of a chain therefore never depend on the
order in which chains are stepped.
'''
from __future__ import absolute_import, division, print_function

from bisect import bisect_left
from collections import namedtuple

import numpy as np

from pteem.errors import ConfigurationError
from pteem.ladders import ring_index
from pteem.log import calibration_warning
from pteem.model import TemperedDensity, acceptance_probability, energy


ExchangeEvent = namedtuple('ExchangeEvent', ['iteration', 'move', 'chain_a',
                                             'chain_b', 'accepted',
                                             'probability'])
ExchangeEvent.__doc__ = '''\
A proposed global move. Chains are 1-based; ``move`` is one of
``pteem_exchange``, ``pt_swap``, ``ees_jump`` or ``skipped`` (no ring held
two chains).'''

MoveBudget = namedtuple('MoveBudget', ['local_moves', 'global_moves'])

exchange_moves = ('pteem_exchange', 'pt_swap', 'ees_jump')


def make_streams(seed, count):
    '''
    ``count`` independent Philox generators derived from ``seed`` (an int
    or a :class:`numpy.random.SeedSequence`).
    '''
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.Philox(child))
            for child in seed.spawn(count)]


def decide(probability, rng):
    if probability >= 1.0:
        return True
    if probability <= 0.0:
        return False
    return bool(rng.random() < probability)


class Population(object):
    '''
    Current states of the N chains with their energies and energy rings.
    '''

    def __init__(self, model, states, energy_ladder=None):
        self.model = model
        self.energy_ladder = energy_ladder
        self.states = list(states)
        self.energies = np.empty(len(self.states))
        self.ring_of = np.ones(len(self.states), dtype=int)
        for i in range(len(self.states)):
            self.refresh(i)

    def __len__(self):
        return len(self.states)

    def refresh(self, i):
        h = energy(self.model, self.states[i])
        self.energies[i] = h
        if self.energy_ladder is not None:
            self.ring_of[i] = ring_index(self.energy_ladder, h)

    def swap(self, i, k):
        self.states[i], self.states[k] = self.states[k], self.states[i]
        self.energies[[i, k]] = self.energies[[k, i]]
        self.ring_of[[i, k]] = self.ring_of[[k, i]]

    def exchangeable_rings(self):
        '''
        Map ring -> sorted chain indices (0-based) for the rings holding at
        least two chains of finite energy.
        '''
        members = {}
        for i, (ring, h) in enumerate(zip(self.ring_of, self.energies)):
            if np.isfinite(h):
                members.setdefault(int(ring), []).append(i)
        return dict((ring, chains) for ring, chains in sorted(members.items())
                    if len(chains) >= 2)


def exchange_probability(model, x_i, x_k, t_i, t_k):
    '''
    Acceptance probability of swapping the states of chains at temperatures
    ``t_i`` and ``t_k``.
    '''
    if t_i == t_k:
        return 1.0
    numerator = (model.tempered_log_density(x_k, t_i)
                 + model.tempered_log_density(x_i, t_k))
    denominator = (model.tempered_log_density(x_i, t_i)
                   + model.tempered_log_density(x_k, t_k))
    return acceptance_probability(numerator, denominator)


def pteem_exchange(pop, ladder, temps, rng, iteration=None):
    '''
    Equi-energy exchange: a ring holding at least two chains is chosen
    uniformly, then two distinct chains of that ring, and their states are
    swapped with the tempered Metropolis ratio.
    '''
    if pop.energy_ladder is None:
        pop.energy_ladder = ladder
    rings = pop.exchangeable_rings()
    if not rings:
        return pop, ExchangeEvent(iteration, 'skipped', None, None, False,
                                  0.0)
    ring_ids = list(rings)
    members = rings[ring_ids[int(rng.integers(len(ring_ids)))]]
    picked = rng.choice(len(members), size=2, replace=False)
    i, k = sorted(members[int(j)] for j in picked)
    probability = exchange_probability(pop.model, pop.states[i],
                                       pop.states[k], temps[i], temps[k])
    accepted = decide(probability, rng)
    if accepted:
        pop.swap(i, k)
    return pop, ExchangeEvent(iteration, 'pteem_exchange', i + 1, k + 1,
                              accepted, probability)


def pt_swap(pop, temps, rng, iteration=None):
    '''
    Swap proposal between a uniformly chosen pair of adjacent temperatures.
    '''
    n = len(pop)
    if n < 2:
        raise ConfigurationError('parallel tempering needs at least 2 chains')
    i = int(rng.integers(n - 1))
    k = i + 1
    probability = exchange_probability(pop.model, pop.states[i],
                                       pop.states[k], temps[i], temps[k])
    accepted = decide(probability, rng)
    if accepted:
        pop.swap(i, k)
    return pop, ExchangeEvent(iteration, 'pt_swap', i + 1, k + 1, accepted,
                              probability)


class Trace(object):
    '''
    Record of a run: recorded samples (post burn-in), ring occupancy of
    every chain, global-move events and local acceptance counts.
    '''

    def __init__(self, algorithm, temperatures, energy_ladder=None,
                 seed=None, config=None, coordinate_names=None):
        self.algorithm = algorithm
        self.temperatures = tuple(temperatures)
        self.energy_ladder = energy_ladder
        self.seed = seed
        self.config = dict(config or {})
        self.coordinate_names = list(coordinate_names or [])
        n = len(self.temperatures)
        self.local_proposed = np.zeros(n, dtype=np.int64)
        self.local_accepted = np.zeros(n, dtype=np.int64)
        self.jump_fallbacks = np.zeros(n, dtype=np.int64)
        self.events = []
        self.samples = {}
        self.sample_iterations = []
        self.rings = None
        self.energies = None
        self.burnin = 0
        self.kept = 0

    @property
    def n_chains(self):
        return len(self.temperatures)

    def count_local(self, chain, accepted):
        self.local_proposed[chain] += 1
        if accepted:
            self.local_accepted[chain] += 1

    def chain_samples(self, chain=1):
        return np.asarray(self.samples[chain])

    def move_counts(self):
        '''
        ``{category: (proposed, accepted, rejected)}`` for local moves and
        each kind of global move.
        '''
        proposed = int(self.local_proposed.sum())
        accepted = int(self.local_accepted.sum())
        counts = {'local': (proposed, accepted, proposed - accepted)}
        for move in exchange_moves + ('skipped',):
            events = [e for e in self.events if e.move == move]
            if events:
                n_accepted = sum(1 for e in events if e.accepted)
                counts[move] = (len(events), n_accepted,
                                len(events) - n_accepted)
        return counts

    def local_acceptance_rate(self, chains=None):
        if chains is None:
            chains = range(self.n_chains)
        chains = list(chains)
        proposed = self.local_proposed[chains].sum()
        if proposed == 0:
            return float('nan')
        return float(self.local_accepted[chains].sum()) / proposed

    def exchange_acceptance_rate(self):
        events = [e for e in self.events if e.move in exchange_moves]
        if not events:
            return float('nan')
        return sum(1 for e in events if e.accepted) / float(len(events))

    def global_moves(self):
        return sum(1 for e in self.events if e.move in exchange_moves)

    def skipped_moves(self):
        return sum(1 for e in self.events if e.move == 'skipped')


def exchange_matrix(trace):
    '''
    N x N matrix whose entry (i, j) is the percentage of the accepted
    exchanges of chain i that were made with chain j. Rows with no
    accepted exchange are zero.
    '''
    return exchange_matrix_from_events(trace.events, trace.n_chains)


def exchange_matrix_from_events(events, n_chains):
    counts = np.zeros((n_chains, n_chains))
    for event in events:
        if event.move in exchange_moves and event.accepted:
            a, b = event.chain_a - 1, event.chain_b - 1
            counts[a, b] += 1
            counts[b, a] += 1
    totals = counts.sum(axis=1, keepdims=True)
    return 100.0 * np.divide(counts, totals, out=np.zeros_like(counts),
                             where=totals > 0)


def _record_chains(record_chains, n):
    chains = {1}
    for chain in record_chains or ():
        if 1 <= chain <= n:
            chains.add(int(chain))
    return sorted(chains)


def _step_chains(pop, densities, kernels, rngs, trace):
    for i in range(len(pop)):
        x, accepted = kernels[i].step(pop.states[i], densities[i], rngs[i])
        pop.states[i] = x
        pop.refresh(i)
        trace.count_local(i, accepted)


def pteem_iteration(pop, ladder, temps, kernels, rngs, exchange_rng,
                    trace, iteration=None, densities=None):
    '''
    One local step per chain (chain i targets ``pi^(1/T_i)``) followed by
    one equi-energy exchange.
    '''
    if densities is None:
        densities = [TemperedDensity(pop.model, t) for t in temps]
    _step_chains(pop, densities, kernels, rngs, trace)
    pop, event = pteem_exchange(pop, ladder, temps, exchange_rng, iteration)
    trace.events.append(event)
    return pop


def pt_iteration(pop, temps, kernels, rngs, exchange_rng, trace,
                 iteration=None, densities=None):
    '''
    One local step per chain followed by one adjacent swap proposal.
    '''
    if densities is None:
        densities = [TemperedDensity(pop.model, t) for t in temps]
    _step_chains(pop, densities, kernels, rngs, trace)
    pop, event = pt_swap(pop, temps, exchange_rng, iteration)
    trace.events.append(event)
    return pop


def run_population(algorithm, model, temps, kernels, initial_state, burnin,
                   iterations, seed, energy_ladder=None, record_chains=(),
                   config=None, verbose=None):
    '''
    Run PT or PTEEM for ``burnin + iterations`` iterations and return the
    :class:`Trace`.

    ``initial_state(rng)`` draws the initial state of a chain from that
    chain's stream. ``energy_ladder`` is required by PTEEM; for PT it is
    only used to record ring occupancy.
    '''
    if algorithm not in ('pt', 'pteem'):
        raise ConfigurationError(
            'run_population handles pt and pteem, not {0!r}'.format(
                algorithm))
    if algorithm == 'pteem' and energy_ladder is None:
        raise ConfigurationError('pteem needs an energy ladder')
    n = len(temps)
    if len(kernels) != n:
        raise ConfigurationError('one local kernel per chain is needed')
    if burnin < 0 or iterations < 1:
        raise ConfigurationError('burn-in must be >= 0 and iterations >= 1')
    streams = make_streams(seed, n + 1)
    rngs, exchange_rng = streams[:n], streams[n]
    pop = Population(model, [initial_state(rng) for rng in rngs],
                     energy_ladder)
    densities = [TemperedDensity(model, t) for t in temps]
    trace = Trace(algorithm, temps, energy_ladder, seed=config_seed(seed),
                  config=config,
                  coordinate_names=model.coordinate_names())
    trace.burnin = burnin
    trace.kept = iterations
    chains = _record_chains(record_chains, n)
    samples = dict((c, []) for c in chains)
    trace.rings = np.zeros((n, iterations), dtype=np.int16)
    trace.energies = np.zeros((n, iterations))
    total = burnin + iterations
    for t in range(total):
        if algorithm == 'pteem':
            pteem_iteration(pop, energy_ladder, temps, kernels, rngs,
                            exchange_rng, trace, t, densities)
        else:
            pt_iteration(pop, temps, kernels, rngs, exchange_rng, trace, t,
                         densities)
        if t >= burnin:
            kept = t - burnin
            trace.rings[:, kept] = pop.ring_of
            trace.energies[:, kept] = pop.energies
            for c in chains:
                samples[c].append(model.coordinates(pop.states[c - 1]))
            trace.sample_iterations.append(t)
        if verbose and (t + 1) % max(1, total // 10) == 0:
            print('{0}: iteration {1}/{2}'.format(algorithm, t + 1, total),
                  file=verbose)
    trace.samples = dict((c, np.asarray(s)) for c, s in samples.items())
    skipped = trace.skipped_moves()
    if skipped:
        calibration_warning(
            '{0} of {1} global moves skipped: no energy ring held two '
            'chains'.format(skipped, total))
    return trace


def config_seed(seed):
    '''
    JSON-friendly description of a seed: an int, or the entropy followed
    by the spawn key of a spawned :class:`numpy.random.SeedSequence`.
    '''
    if isinstance(seed, np.random.SeedSequence):
        if seed.spawn_key:
            return [int(seed.entropy)] + [int(k) for k in seed.spawn_key]
        return int(seed.entropy)
    return seed


class EnergyRingStore(object):
    '''
    Past states of one EES chain filed by energy ring, with the global time
    at which each one was produced.
    '''

    def __init__(self, energy_ladder):
        self.energy_ladder = energy_ladder
        self.times = dict((j, []) for j in range(1, energy_ladder.d + 1))
        self.states = dict((j, []) for j in range(1, energy_ladder.d + 1))

    def add(self, time, state, h):
        ring = ring_index(self.energy_ladder, h)
        self.times[ring].append(time)
        self.states[ring].append(state)
        return ring

    def available(self, ring, before):
        '''
        Number of states of ``ring`` produced strictly before ``before``.
        '''
        return bisect_left(self.times[ring], before)

    def draw(self, ring, before, rng):
        count = self.available(ring, before)
        if count == 0:
            return None
        return self.states[ring][int(rng.integers(count))]

    def __len__(self):
        return sum(len(s) for s in self.states.values())


def ees_jump_probability(td_low, td_high, x, y):
    '''
    Acceptance probability of replacing state ``x`` of the chain targeting
    ``td_low`` by ``y``, stored by the chain targeting ``td_high``.
    '''
    numerator = td_low.log_density(y) + td_high.log_density(x)
    denominator = td_low.log_density(x) + td_high.log_density(y)
    return acceptance_probability(numerator, denominator)


def ees_schedule(n_chains, burnin, ring_construction, iterations):
    '''
    Start time and iteration count of each EES chain (0-based, target
    chain first). Chain i starts once chain i+1 has completed its burn-in
    and ring construction; all chains stop when the target chain has
    produced ``iterations`` samples after both periods.
    '''
    span = burnin + ring_construction
    starts = [(n_chains - 1 - i) * span for i in range(n_chains)]
    end = (n_chains - 1) * span + span + iterations
    return starts, [end - s for s in starts]


def ees_run(model, temps, energy_ladder, kernels, initial_state, burnin,
            ring_construction, iterations, p_ee, seed, record_chains=(),
            config=None, verbose=None):
    '''
    Equi-energy sampler. Chain K (hottest) runs local moves only and files
    its post burn-in states in energy rings; chains K-1 down to 1 then run
    in turn, each iteration making with probability ``p_ee`` an equi-energy
    jump to a stored state of the next hotter chain lying in the ring of the
    current state, and a local move otherwise (also when that ring is still
    empty). Chain i > 1 targets ``exp(-max{h, H_i}/T_i)``; chain 1 targets
    ``pi~^(1/T_1)`` untruncated, which is the same law when ``H_1 <= min h``
    and a :class:`~pteem.log.CalibrationWarning` reports target chain
    energies found below ``H_1``.
    '''
    k = len(temps)
    if k < 2:
        raise ConfigurationError('EES needs at least 2 chains, got {0}'
                                 .format(k))
    if not 0.0 < p_ee < 1.0:
        raise ConfigurationError('p_ee must lie in (0, 1), got {0}'
                                 .format(p_ee))
    if energy_ladder.d != k:
        raise ConfigurationError(
            'EES needs one energy level per chain: {0} chains, {1} levels'
            .format(k, energy_ladder.d))
    if len(kernels) != k:
        raise ConfigurationError('one local kernel per chain is needed')
    if burnin < 0 or ring_construction < 1 or iterations < 1:
        raise ConfigurationError(
            'EES needs burnin >= 0, ring construction >= 1, iterations >= 1')
    streams = make_streams(seed, k)
    densities = [TemperedDensity(model, temps[0])]
    densities += [TemperedDensity(model, t, h)
                  for t, h in zip(temps[1:], energy_ladder.levels[1:])]
    below_first_level = 0
    starts, lengths = ees_schedule(k, burnin, ring_construction, iterations)
    end = starts[0] + lengths[0]
    trace = Trace('ees', temps, energy_ladder, seed=config_seed(seed),
                  config=config, coordinate_names=model.coordinate_names())
    trace.burnin = burnin + ring_construction
    trace.kept = iterations
    trace.rings = np.zeros((k, iterations), dtype=np.int16)
    trace.energies = np.zeros((k, iterations))
    chains = _record_chains(record_chains, k)
    samples = dict((c, []) for c in chains)
    events = []
    upper_store = None
    for i in reversed(range(k)):
        rng = streams[i]
        store = EnergyRingStore(energy_ladder) if i > 0 else None
        x = initial_state(rng)
        h = energy(model, x)
        record_from = end - iterations
        for t in range(lengths[i]):
            time = starts[i] + t
            jumped = False
            if upper_store is not None and rng.random() < p_ee:
                ring = ring_index(energy_ladder, h)
                y = upper_store.draw(ring, time, rng)
                if y is None:
                    trace.jump_fallbacks[i] += 1
                else:
                    jumped = True
                    probability = ees_jump_probability(
                        densities[i], densities[i + 1], x, y)
                    accepted = decide(probability, rng)
                    if accepted:
                        x = model.copy_state(y)
                        h = energy(model, x)
                    events.append(ExchangeEvent(time, 'ees_jump', i + 1,
                                                i + 2, accepted, probability))
            if not jumped:
                x, accepted = kernels[i].step(x, densities[i], rng)
                h = energy(model, x)
                trace.count_local(i, accepted)
            if store is not None and t >= burnin:
                store.add(time, model.copy_state(x), h)
            elif store is None and h < energy_ladder.levels[0]:
                below_first_level += 1
            if time >= record_from:
                kept = time - record_from
                trace.rings[i, kept] = ring_index(energy_ladder, h)
                trace.energies[i, kept] = h
                if (i + 1) in samples:
                    samples[i + 1].append(model.coordinates(x))
        if verbose:
            print('ees: chain {0} done ({1} iterations, {2} stored states)'
                  .format(i + 1, lengths[i], len(store) if store else 0),
                  file=verbose)
        upper_store = store
    trace.events = sorted(events, key=lambda e: (e.iteration, e.chain_a))
    trace.sample_iterations = list(range(end - iterations, end))
    trace.samples = dict((c, np.asarray(s)) for c, s in samples.items())
    if below_first_level:
        calibration_warning(
            '{0} of {1} target chain energies lie below the first energy '
            'level {2:g}'.format(below_first_level, lengths[0],
                                 energy_ladder.levels[0]))
    return trace


def move_budget(algorithm, burnin, ring_construction, iterations, n_chains,
                p_ee=0.0, reading='formula'):
    '''
    Total number of local and global moves of a run.

    For EES, ``reading='formula'`` evaluates the counts with ``M - R``
    iterations after ring construction; ``reading='samples'`` counts ``M``
    iterations after burn-in and ring construction, which is how
    :func:`ees_run` schedules its chains.
    '''
    b, r, m, n = burnin, ring_construction, iterations, n_chains
    if min(b, r, m, n) < 0:
        raise ConfigurationError('move budget needs nonnegative counts')
    if algorithm in ('pt', 'pteem'):
        return MoveBudget(n * (m + b), m + b)
    if algorithm != 'ees':
        raise ConfigurationError('unknown algorithm {0!r}'.format(algorithm))
    if reading == 'formula':
        if r > m:
            raise ConfigurationError(
                'ring construction ({0}) exceeds the sample size ({1})'
                .format(r, m))
        after = m - r
    elif reading == 'samples':
        after = m
    else:
        raise ConfigurationError('unknown budget reading {0!r}'.format(
            reading))
    mixed = (n - 1) * n / 2.0 * (b + r) + (n - 1) * after
    return MoveBudget(n * (b + r) + after + (1.0 - p_ee) * mixed,
                      p_ee * mixed)


def ees_storage(n_chains, ring_construction, i, p_ee):
    '''
    Number of stored states an EES run holds to produce iteration ``i + 1``
    of the target chain (PTEEM only ever holds its N current states).
    '''
    k, r = n_chains, ring_construction
    return k * r + i + (1.0 - p_ee) * ((k - 1) * k * r / 2.0 + (k - 1) * i)
