# -*- coding: utf-8 -*-
'''
Transcription factor binding site (TFBS) discovery.

The ``M`` sequences (without their last ``w - 1`` bases) are seen as one
long sequence of ``L*`` possible site starts. A state is an
:class:`Allocation`, the binary vector ``A`` of site starts, with the
nucleotide count matrix ``C`` of its sites. Sites follow a product
multinomial motif ``Theta`` and the rest of the sequences an order one
Markov background ``theta0``. ``Theta`` and the site abundance ``p0`` are
integrated out (Dirichlet and Beta priors), leaving the collapsed
posterior ``pi(A | S)``.

Sites never overlap: an activation that would overlap an active site of
the same sequence is refused.
'''
from __future__ import absolute_import, division, print_function

from collections import namedtuple

import numpy as np
from scipy.special import betaln, expit, gammaln

from pteem.errors import ConfigurationError, IngestionError
from pteem.experiment import (acceptance_summary, chain_acceptance,
                              nan_mean, run_many, run_trace)
from pteem.kernels import LocalKernel
from pteem.model import TargetModel, metropolis_accept

alphabet = 'ACGT'
_codes = dict((c, i) for i, c in enumerate(alphabet))

#: motif used to generate data, one row per motif position (A, C, G, T)
DEFAULT_MOTIF = np.array([
    [0.6, 0.0, 0.0, 0.4],
    [0.1, 0.0, 0.2, 0.7],
    [0.0, 0.8, 0.0, 0.2],
    [0.6, 0.0, 0.1, 0.3],
    [0.1, 0.0, 0.8, 0.1],
    [0.0, 0.0, 0.7, 0.3],
    [0.3, 0.0, 0.0, 0.7],
    [0.0, 0.0, 0.9, 0.1],
    [0.2, 0.2, 0.0, 0.6],
    [0.0, 0.5, 0.0, 0.5],
    [0.5, 0.25, 0.25, 0.0],
    [0.0, 0.7, 0.2, 0.1],
])


def encode(sequence):
    try:
        return np.array([_codes[c] for c in sequence.upper()], dtype=np.int8)
    except KeyError as e:
        raise IngestionError('invalid nucleotide {0} in sequence'.format(e))


def decode(codes):
    return ''.join(alphabet[int(c)] for c in codes)


class SequenceSet(object):
    '''
    Sequences with the possible site starts of motifs of width ``width``.

    Attributes computed from the sequences, all indexed by global site
    start ``i`` in ``0..L*-1``: ``sequence_of`` (sequence index),
    ``offset_of`` (start within the sequence), ``windows`` (``L* x w``
    nucleotide codes of the w-mer starting at ``i``) and ``first``/``stop``
    (global range of the starts of the same sequence).
    '''

    def __init__(self, sequences, width, names=None):
        width = int(width)
        if width < 1:
            raise ConfigurationError('motif width must be >= 1')
        self.sequences = [s.upper() for s in sequences]
        if not self.sequences:
            raise ConfigurationError('no sequence')
        self.names = list(names or ['seq%d' % (m + 1)
                                    for m in range(len(self.sequences))])
        self.width = width
        self.codes = [encode(s) for s in self.sequences]
        self.lengths = [len(c) for c in self.codes]
        short = [m + 1 for m, n in enumerate(self.lengths) if n < width]
        if short:
            raise ConfigurationError(
                'sequences {0} are shorter than the motif width {1}'.format(
                    short, width))
        self.starts = [n - width + 1 for n in self.lengths]
        self.n_positions = sum(self.starts)
        bounds = np.concatenate([[0], np.cumsum(self.starts)])
        self.sequence_of = np.repeat(np.arange(len(self.codes)), self.starts)
        self.first = bounds[self.sequence_of]
        self.stop = bounds[self.sequence_of + 1]
        self.offset_of = np.arange(self.n_positions) - self.first
        self.windows = np.concatenate([
            np.lib.stride_tricks.sliding_window_view(c, width)
            for c in self.codes]).astype(np.intp)
        self._background = {}

    @property
    def n_sequences(self):
        return len(self.codes)

    def position(self, sequence, offset):
        '''
        Global site start of ``offset`` (0-based) in ``sequence``.
        '''
        return int(np.flatnonzero(self.sequence_of == sequence)[0] + offset)

    def site_log_background(self, background):
        '''
        Log probability of each w-mer under the background, including the
        transition from the preceding base (the stationary law at a
        sequence start).
        '''
        key = background.key()
        if key not in self._background:
            values = np.empty(self.n_positions)
            log_t = np.log(background.transitions)
            log_init = np.log(background.stationary)
            i = 0
            for c in self.codes:
                inner = np.concatenate([[0.0], np.cumsum(log_t[c[:-1],
                                                               c[1:]])])
                for offset in range(len(c) - self.width + 1):
                    if offset == 0:
                        entry = log_init[c[0]]
                    else:
                        entry = log_t[c[offset - 1], c[offset]]
                    values[i] = (entry + inner[offset + self.width - 1]
                                 - inner[offset])
                    i += 1
            self._background[key] = values
        return self._background[key]


class BackgroundModel(object):
    '''
    Order one Markov background: row-stochastic 4 x 4 transitions and
    their stationary law.
    '''

    def __init__(self, transitions):
        transitions = np.asarray(transitions, dtype=float)
        if transitions.shape != (4, 4) or np.any(transitions <= 0):
            raise ConfigurationError(
                'background transitions must be a positive 4 x 4 matrix')
        if np.any(np.abs(transitions.sum(axis=1) - 1.0) > 1e-12):
            raise ConfigurationError(
                'background transition rows must sum to 1')
        self.transitions = transitions
        system = np.vstack([transitions.T - np.eye(4), np.ones((1, 4))])
        rhs = np.concatenate([np.zeros(4), [1.0]])
        self.stationary = np.linalg.lstsq(system, rhs, rcond=None)[0]

    @classmethod
    def symmetric(cls, alpha=0.12):
        '''
        ``1 - 3 alpha`` on the diagonal and ``alpha`` elsewhere.
        '''
        if not 0 < alpha < 1.0 / 3:
            raise ConfigurationError('alpha must lie in (0, 1/3)')
        transitions = np.full((4, 4), float(alpha))
        np.fill_diagonal(transitions, 1.0 - 3.0 * alpha)
        return cls(transitions)

    def key(self):
        return self.transitions.tobytes()

    def sample(self, length, rng):
        codes = np.empty(length, dtype=np.int8)
        codes[0] = rng.choice(4, p=self.stationary)
        for j in range(1, length):
            codes[j] = rng.choice(4, p=self.transitions[codes[j - 1]])
        return codes


class MotifModel(object):
    '''
    Product multinomial motif: row ``k`` is the nucleotide law of motif
    position ``k``.
    '''

    def __init__(self, theta=DEFAULT_MOTIF):
        theta = np.asarray(theta, dtype=float)
        if theta.ndim != 2 or theta.shape[1] != 4 or np.any(theta < 0):
            raise ConfigurationError('motif must be a w x 4 matrix')
        if np.any(np.abs(theta.sum(axis=1) - 1.0) > 1e-12):
            raise ConfigurationError('motif positions must sum to 1')
        self.theta = theta

    @property
    def width(self):
        return self.theta.shape[0]

    def sample(self, rng):
        return np.array([rng.choice(4, p=p) for p in self.theta],
                        dtype=np.int8)


class TfbsPriors(namedtuple('TfbsPriors', ['beta', 'a', 'b'])):
    '''
    Dirichlet pseudocounts ``beta`` (``w x 4``) of the motif and Beta
    ``(a, b)`` prior of the site abundance.
    '''
    __slots__ = ()

    def __new__(cls, beta, a=1.0, b=99.0):
        beta = np.asarray(beta, dtype=float)
        if beta.ndim != 2 or beta.shape[1] != 4 or np.any(beta <= 0):
            raise ConfigurationError('pseudocounts must be a positive w x 4 '
                                     'matrix')
        if not (a > 0 and b > 0):
            raise ConfigurationError('site abundance prior needs a, b > 0')
        return super(TfbsPriors, cls).__new__(cls, beta, float(a), float(b))

    @classmethod
    def uniform(cls, width, pseudocount=1.0, a=1.0, b=99.0):
        return cls(np.full((width, 4), float(pseudocount)), a, b)

    @property
    def beta_sums(self):
        return self.beta.sum(axis=1)


class Allocation(object):
    '''
    Site starts ``active`` with the count matrix ``counts`` (``w x 4``) and
    the number of sites ``size``, maintained incrementally.
    '''

    def __init__(self, sequences, active=None):
        self.sequences = sequences
        n = sequences.n_positions
        if active is None:
            self.active = np.zeros(n, dtype=bool)
        else:
            self.active = np.asarray(active, dtype=bool).copy()
            if self.active.shape != (n,):
                raise ConfigurationError(
                    'allocation length {0} differs from L*={1}'.format(
                        self.active.shape, n))
        self.counts, self.size = count_sites(sequences, self.active)

    @classmethod
    def from_positions(cls, sequences, positions):
        active = np.zeros(sequences.n_positions, dtype=bool)
        active[list(positions)] = True
        return cls(sequences, active)

    def copy(self):
        other = Allocation.__new__(Allocation)
        other.sequences = self.sequences
        other.active = self.active.copy()
        other.counts = self.counts.copy()
        other.size = self.size
        return other

    def positions(self):
        return np.flatnonzero(self.active)

    def add(self, i):
        if self.active[i]:
            return
        self.active[i] = True
        self.counts[np.arange(self.sequences.width),
                    self.sequences.windows[i]] += 1
        self.size += 1

    def remove(self, i):
        if not self.active[i]:
            return
        self.active[i] = False
        self.counts[np.arange(self.sequences.width),
                    self.sequences.windows[i]] -= 1
        self.size -= 1

    def overlaps(self, i):
        '''
        True when a site starting at ``i`` would overlap an active site
        other than ``i``.
        '''
        w = self.sequences.width
        lo = max(self.sequences.first[i], i - w + 1)
        hi = min(self.sequences.stop[i], i + w)
        return bool(self.active[lo:i].any() or self.active[i + 1:hi].any())

    def is_valid(self):
        return not has_overlap(self.sequences, self.active)

    def __eq__(self, other):
        return (isinstance(other, Allocation)
                and np.array_equal(self.active, other.active))

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'Allocation({0})'.format(self.positions().tolist())


def count_sites(sequences, active):
    '''
    Count matrix and number of sites of a binary site-start vector.
    '''
    w = sequences.width
    counts = np.zeros((w, 4), dtype=np.int64)
    windows = sequences.windows[np.asarray(active, dtype=bool)]
    for k in range(w):
        counts[k] = np.bincount(windows[:, k], minlength=4)
    return counts, int(np.count_nonzero(active))


def has_overlap(sequences, active):
    positions = np.flatnonzero(active)
    if len(positions) < 2:
        return False
    same = (sequences.sequence_of[positions[1:]]
            == sequences.sequence_of[positions[:-1]])
    close = np.diff(positions) < sequences.width
    return bool(np.any(same & close))


def collapsed_log_posterior(allocation, sequences, background, priors):
    '''
    Log of the collapsed posterior ``pi(A | S)`` up to a constant.
    '''
    if not allocation.is_valid():
        raise ValueError('overlapping sites in {0!r}'.format(allocation))
    n = allocation.size
    total = sequences.n_positions
    site_bg = sequences.site_log_background(background)
    value = -site_bg[allocation.active].sum()
    value += (gammaln(n + priors.a) + gammaln(total - n + priors.b)
              - gammaln(total + priors.a + priors.b))
    value += (gammaln(allocation.counts + priors.beta).sum()
              - gammaln(n + priors.beta_sums).sum())
    return float(value)


def log_predictive_odds(i, allocation, sequences, background, priors,
                        temperature=1.0):
    '''
    ``log[p(a_i = 1 | A[-i], S) / p(a_i = 0 | A[-i], S)] / T``.
    '''
    counts = allocation.counts
    n = allocation.size
    window = sequences.windows[i]
    k = np.arange(sequences.width)
    if allocation.active[i]:
        counts = counts.copy()
        counts[k, window] -= 1
        n -= 1
    log_odds = (-sequences.site_log_background(background)[i]
                + np.log(n + priors.a)
                - np.log(sequences.n_positions - n - 1 + priors.b)
                + np.log(counts[k, window] + priors.beta[k, window]).sum()
                - np.log(n + priors.beta_sums).sum())
    return float(log_odds) / temperature


def predictive_update_odds(i, allocation, sequences, background, priors,
                           temperature=1.0):
    return float(np.exp(log_predictive_odds(i, allocation, sequences,
                                            background, priors,
                                            temperature)))


def tfbs_gibbs_sweep(allocation, sequences, background, priors, temperature,
                     rng):
    '''
    Resample ``a_1 .. a_L*`` in order from their tempered predictive
    odds. Returns a new allocation.
    '''
    allocation = allocation.copy()
    site_bg = sequences.site_log_background(background)
    windows = sequences.windows
    k = np.arange(sequences.width)
    beta = priors.beta
    beta_sums = priors.beta_sums
    total = sequences.n_positions
    counts = allocation.counts
    uniforms = rng.random(total)
    for i in range(total):
        allocation.remove(i)
        if allocation.overlaps(i):
            continue
        n = allocation.size
        window = windows[i]
        log_odds = (-site_bg[i] + np.log(n + priors.a)
                    - np.log(total - n - 1 + priors.b)
                    + np.log(counts[k, window] + beta[k, window]).sum()
                    - np.log(n + beta_sums).sum())
        if uniforms[i] < expit(log_odds / temperature):
            allocation.add(i)
    return allocation


def tfbs_ee_log_ratio(first, second, sequences, background, priors):
    '''
    ``log[pi(A2 | S) / pi(A1 | S)]`` expanded in Beta and Gamma function
    ratios.
    '''
    site_bg = sequences.site_log_background(background)
    total = sequences.n_positions
    n1, n2 = first.size, second.size
    return float(
        site_bg[first.active].sum() - site_bg[second.active].sum()
        + betaln(n2 + priors.a, total - n2 + priors.b)
        - betaln(n1 + priors.a, total - n1 + priors.b)
        + (gammaln(second.counts + priors.beta)
           - gammaln(first.counts + priors.beta)).sum()
        + (gammaln(n1 + priors.beta_sums)
           - gammaln(n2 + priors.beta_sums)).sum())


def tfbs_ee_acceptance(first, second, t_first, t_second, sequences,
                       background, priors):
    '''
    Acceptance probability of exchanging ``first`` (chain at ``t_first``)
    and ``second`` (chain at ``t_second``).
    '''
    if t_first == t_second or first == second:
        return 1.0
    log_ratio = ((1.0 / t_first - 1.0 / t_second)
                 * tfbs_ee_log_ratio(first, second, sequences, background,
                                     priors))
    return float(min(1.0, np.exp(min(log_ratio, 0.0))))


def site_proposal_probabilities(allocation, sequences, background, priors,
                                temperature=1.0):
    '''
    Probability of each position to be proposed as a site start: the motif
    is estimated by frequency counting over the current sites, the site
    abundance likewise, and each position is scored against the
    background by Bayes rule, tempered.
    '''
    theta = ((allocation.counts + priors.beta)
             / (allocation.size + priors.beta_sums)[:, None])
    total = sequences.n_positions
    p0 = (allocation.size + priors.a) / (total + priors.a + priors.b)
    k = np.arange(sequences.width)
    scores = (np.log(theta)[k, sequences.windows].sum(axis=1)
              - sequences.site_log_background(background)
              + np.log(p0) - np.log1p(-p0))
    return expit(scores / temperature)


def _log_proposal(active, probabilities):
    with np.errstate(divide='ignore'):
        return float(np.where(active, np.log(probabilities),
                              np.log1p(-probabilities)).sum())


def ees_tfbs_local_move(allocation, sequences, background, priors, td, rng):
    '''
    Independence proposal from :func:`site_proposal_probabilities`
    accepted by Metropolis-Hastings against the (truncated) tempered
    density ``td``. Proposals with overlapping sites are rejected.
    '''
    forward = site_proposal_probabilities(allocation, sequences, background,
                                          priors, td.temperature)
    active = rng.random(sequences.n_positions) < forward
    if has_overlap(sequences, active):
        return allocation, False
    candidate = Allocation(sequences, active)
    if candidate == allocation:
        return allocation, True
    backward = site_proposal_probabilities(candidate, sequences, background,
                                           priors, td.temperature)
    numerator = td.log_density(candidate) + _log_proposal(
        allocation.active, backward)
    denominator = td.log_density(allocation) + _log_proposal(active,
                                                             forward)
    accepted, _ = metropolis_accept(numerator, denominator, rng)
    return (candidate if accepted else allocation), accepted


class TfbsGibbsKernel(LocalKernel):
    always_accepts = True

    def __init__(self, model):
        self.model = model

    def step(self, allocation, td, rng):
        m = self.model
        return tfbs_gibbs_sweep(allocation, m.sequences, m.background,
                                m.priors, td.temperature, rng), True


class SiteProposalKernel(LocalKernel):

    def __init__(self, model):
        self.model = model

    def step(self, allocation, td, rng):
        m = self.model
        return ees_tfbs_local_move(allocation, m.sequences, m.background,
                                   m.priors, td, rng)


class TfbsModel(TargetModel):

    def __init__(self, sequences, background, priors):
        if priors.beta.shape[0] != sequences.width:
            raise ConfigurationError(
                'pseudocounts have width {0}, sequences width {1}'.format(
                    priors.beta.shape[0], sequences.width))
        self.sequences = sequences
        self.background = background
        self.priors = priors
        self.state_descriptor = 'site allocation of length {0}'.format(
            sequences.n_positions)

    def log_density(self, allocation):
        return collapsed_log_posterior(allocation, self.sequences,
                                       self.background, self.priors)

    def copy_state(self, allocation):
        return allocation.copy()

    def coordinates(self, allocation):
        return allocation.active.astype(np.int8)

    def coordinate_names(self):
        return ['a_%d' % (i + 1) for i in range(self.sequences.n_positions)]

    def empty_allocation(self, rng=None):
        return Allocation(self.sequences)

    def kernels(self, algorithm, n_chains):
        '''
        Gibbs sweeps for every chain, except EES chains above the first
        which use the site proposal move.
        '''
        if algorithm == 'ees':
            return ([TfbsGibbsKernel(self)]
                    + [SiteProposalKernel(self) for _ in range(n_chains - 1)])
        return [TfbsGibbsKernel(self) for _ in range(n_chains)]


def generate_dataset(background, motif, n_sequences, background_length,
                     sites_per_sequence, rng):
    '''
    Background sequences with ``sites_per_sequence`` motif sites inserted
    at uniform non-overlapping places. Returns the
    :class:`SequenceSet` and the true :class:`Allocation`.
    '''
    if n_sequences < 1 or background_length < 1 or sites_per_sequence < 0:
        raise ConfigurationError(
            'cannot generate {0} sequences of background length {1} with {2}'
            ' sites each'.format(n_sequences, background_length,
                                 sites_per_sequence))
    w = motif.width
    sequences = []
    offsets = []
    for _ in range(n_sequences):
        codes = background.sample(background_length, rng)
        cuts = np.sort(rng.integers(0, background_length + 1,
                                    size=sites_per_sequence))
        pieces = []
        previous = 0
        starts = []
        for j, cut in enumerate(cuts):
            pieces.append(codes[previous:cut])
            starts.append(int(cut) + j * w)
            pieces.append(motif.sample(rng))
            previous = cut
        pieces.append(codes[previous:])
        sequences.append(decode(np.concatenate(pieces)))
        offsets.append(starts)
    result = SequenceSet(sequences, w)
    positions = [result.position(m, offset)
                 for m, starts in enumerate(offsets) for offset in starts]
    return result, Allocation.from_positions(result, positions)


def read_fasta(path):
    '''
    Read ``>name`` headers followed by sequence lines. Returns a list of
    ``(name, sequence)``.
    '''
    try:
        with open(path) as f:
            lines = f.read().splitlines()
    except (IOError, OSError) as e:
        raise IngestionError('cannot read sequences {0}: {1}'.format(path,
                                                                     e))
    records = []
    for number, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith('>'):
            records.append([line[1:].strip(), []])
        elif not records:
            raise IngestionError('{0}:{1}: sequence before any ">" header'
                                 .format(path, number))
        else:
            bad = set(line.upper()) - set(alphabet)
            if bad:
                raise IngestionError('{0}:{1}: invalid characters {2}'.format(
                    path, number, ''.join(sorted(bad))))
            records[-1][1].append(line.upper())
    if not records:
        raise IngestionError('no sequence in {0}'.format(path))
    return [(name, ''.join(parts)) for name, parts in records]


def write_fasta(path, sequences):
    with open(path, 'w') as f:
        for name, sequence in zip(sequences.names, sequences.sequences):
            print('>' + name, file=f)
            for j in range(0, len(sequence), 60):
                print(sequence[j:j + 60], file=f)
    return path


def posterior_site_probabilities(trace):
    '''
    Frequency of ``a_i = 1`` over the recorded states of the target chain.
    '''
    return trace.chain_samples(1).astype(float).mean(axis=0)


DetectedSite = namedtuple('DetectedSite', ['position', 'probability',
                                           'sequence', 'offset', 'status'])
DetectedSite.__doc__ = '''\
A position whose posterior probability exceeds the threshold; position,
sequence and offset are 1-based. ``status`` is ``exact`` (a true site
starts there), ``shifted`` (a true site of the same sequence starts less
than ``w`` bases away), ``false`` or ``unknown`` (no true sites given).'''


def detected_sites(probabilities, sequences, threshold=0.8, truth=None):
    truth_positions = None if truth is None else set(truth.positions())
    sites = []
    for i in np.flatnonzero(np.asarray(probabilities) > threshold):
        if truth_positions is None:
            status = 'unknown'
        elif i in truth_positions:
            status = 'exact'
        elif any(abs(i - j) < sequences.width
                 and sequences.sequence_of[i] == sequences.sequence_of[j]
                 for j in truth_positions):
            status = 'shifted'
        else:
            status = 'false'
        sites.append(DetectedSite(int(i) + 1, float(probabilities[i]),
                                  int(sequences.sequence_of[i]) + 1,
                                  int(sequences.offset_of[i]) + 1, status))
    return sites


def true_site_recovery(sites, sequences, truth):
    '''
    Number of true sites found (a detected position less than ``w`` away
    in the same sequence) and number found at their exact start.
    '''
    detected = np.array([s.position - 1 for s in sites], dtype=int)
    found = exact = 0
    for j in truth.positions():
        near = [i for i in detected
                if abs(i - j) < sequences.width
                and sequences.sequence_of[i] == sequences.sequence_of[j]]
        if near:
            found += 1
        if j in detected:
            exact += 1
    return found, exact


def site_count_matrix(sequences, positions):
    '''
    ``w x 4`` nucleotide counts of the w-mers starting at ``positions``
    (0-based), as used to draw sequence logos.
    '''
    active = np.zeros(sequences.n_positions, dtype=bool)
    active[list(positions)] = True
    return count_sites(sequences, active)[0]


def model_parts(model_config, rng=None):
    '''
    Sequences, true allocation (None when read from a file), background
    and priors of a configuration.
    '''
    background = BackgroundModel.symmetric(model_config['alpha'])
    width = model_config['width']
    if model_config.get('input'):
        records = read_fasta(model_config['input'])
        sequences = SequenceSet([s for _, s in records], width,
                                names=[n for n, _ in records])
        truth = None
    elif model_config.get('generate'):
        motif = MotifModel(DEFAULT_MOTIF)
        if motif.width != width:
            raise ConfigurationError(
                'generated data use the width {0} motif, got width {1}'
                .format(motif.width, width))
        sequences, truth = generate_dataset(
            background, motif, model_config['sequences'],
            model_config['background_length'],
            model_config['sites_per_sequence'], rng)
    else:
        raise ConfigurationError('tfbs needs generate=yes or an input file')
    priors = TfbsPriors.uniform(width, model_config['pseudocount'],
                                model_config['a'], model_config['b'])
    return sequences, truth, background, priors


def run_tfbs(config, seed, verbose=None):
    '''
    One run on fresh generated data (or on the input sequences); returns
    ``(trace, summary)``.
    '''
    data_rng = np.random.Generator(np.random.Philox(seed.spawn(1)[0]))
    sequences, truth, background, priors = model_parts(config.model,
                                                       data_rng)
    model = TfbsModel(sequences, background, priors)
    kernels = model.kernels(config.algorithm, len(config.temperatures()))
    trace = run_trace(config, model, kernels, model.empty_allocation, seed,
                      verbose=verbose)
    probabilities = posterior_site_probabilities(trace)
    sites = detected_sites(probabilities, sequences,
                           config.model['threshold'], truth)
    summary = {
        'sequences': list(zip(sequences.names, sequences.sequences)),
        'true_positions': (None if truth is None
                           else (truth.positions() + 1).tolist()),
        'probabilities': probabilities,
        'sites': sites,
        'counts': site_count_matrix(sequences,
                                    [s.position - 1 for s in sites]),
        'acceptance': acceptance_summary(trace),
        'chain_acceptance': chain_acceptance(trace),
    }
    if truth is not None:
        summary['found'], summary['exact'] = true_site_recovery(
            sites, sequences, truth)
    return trace, summary


def summarize_study(runs):
    result = {
        'runs': len(runs),
        'exchange_acceptance': nan_mean(
            [r['acceptance']['exchange'] for r in runs]),
        'local_acceptance': nan_mean(
            [r['acceptance']['local'] for r in runs]),
        'detected': float(np.mean([len(r['sites']) for r in runs])),
    }
    if all('found' in r for r in runs):
        result['found'] = float(np.mean([r['found'] for r in runs]))
        result['exact'] = float(np.mean([r['exact'] for r in runs]))
    return result


def run_tfbs_study(config, verbose=None):
    '''
    All runs of one algorithm. Returns ``(traces, run summaries, pooled
    summary)``.
    '''
    results = run_many(run_tfbs, config, verbose=verbose)
    traces = [trace for trace, _ in results]
    runs = [summary for _, summary in results]
    return traces, runs, summarize_study(runs)


def calibration_chain(config, rng):
    '''
    Pilot chain on data generated (or read) for the calibration: Gibbs
    sweeps from the empty allocation.
    '''
    sequences, _, background, priors = model_parts(config.model, rng)
    model = TfbsModel(sequences, background, priors)
    return model, TfbsGibbsKernel(model), model.empty_allocation()
