# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from pteem.configuration import parse_config
from pteem.errors import ConfigurationError
from pteem.ladders import ring_index
from pteem.mixture2d import (MEANS, TRUE_MOMENTS, UNEQUAL_SIGMAS,
                             GaussianMixture2D, assign_mode, assign_modes,
                             configure_unequal_variances, mixture_log_density,
                             mode_stats, model_from_config, moments,
                             ratio_table, run_mixture_study, sample_mixture,
                             true_moments, visited_mode_count)


def test_density_at_a_mean():
    model = GaussianMixture2D()
    # neighbouring components contribute nothing at 0.1 scale
    expected = math.log(0.05 / (0.1 * math.sqrt(2 * math.pi)))
    assert mixture_log_density(model, MEANS[5]) == pytest.approx(
        expected, abs=1e-6)


def test_density_matches_direct_sum(rng):
    model = GaussianMixture2D(sigmas=UNEQUAL_SIGMAS)
    sigmas = np.array(UNEQUAL_SIGMAS)
    for x in rng.uniform(0.0, 10.0, size=(1000, 2)):
        d2 = ((MEANS - x) ** 2).sum(axis=1)
        direct = np.sum(0.05 / (sigmas * math.sqrt(2 * math.pi))
                        * np.exp(-d2 / (2 * sigmas ** 2)))
        if direct > 1e-300:
            assert mixture_log_density(model, x) == pytest.approx(
                math.log(direct), rel=1e-9, abs=1e-9)


def test_density_far_away_is_finite():
    model = GaussianMixture2D()
    value = mixture_log_density(model, [100.0, -100.0])
    assert np.isfinite(value)
    assert value < -1e5


def test_invalid_mixtures():
    with pytest.raises(ConfigurationError):
        GaussianMixture2D(sigmas=[0.1] * 19)
    with pytest.raises(ConfigurationError):
        GaussianMixture2D(weights=[0.1] * 20)
    with pytest.raises(ConfigurationError):
        GaussianMixture2D(means=np.zeros((20, 3)))


def test_true_moments():
    values = true_moments(GaussianMixture2D())
    assert values == pytest.approx(TRUE_MOMENTS, abs=2e-3)


def test_unequal_variances_component_masses():
    model = GaussianMixture2D(sigmas=UNEQUAL_SIGMAS)
    # masses proportional to w_i sigma_i: 0.4 / 3.15 for components 1-5
    assert model.masses[0] == pytest.approx(0.4 / 3.15)
    assert model.masses[-1] == pytest.approx(0.05 / 3.15)
    assert true_moments(model) == pytest.approx(
        [5.047, 5.927, 31.71, 44.73], abs=0.01)
    peak = mixture_log_density(model, MEANS[0])
    assert -peak == pytest.approx(math.log(0.4 * math.sqrt(2 * math.pi)
                                           / 0.05), abs=1e-6)


def test_unequal_variant_mode_energies_in_three_rings():
    config = parse_config('mixture2d', flags={'variant': 'unequal',
                                              'seed': 1})
    model = model_from_config(config.model)
    ladder = config.energy_ladder()
    energies = [model.energy(mu) for mu in MEANS]
    assert min(energies) >= ladder.levels[0]
    rings = [ring_index(ladder, h) for h in energies]
    assert set(rings[13:]) == {1}
    assert set(rings[5:13]) == {2}
    # components 3 and 5 overlap, lowering their energy into ring 2
    assert set(rings[:5]) == {2, 3}


def test_assign_modes():
    model = GaussianMixture2D()
    assert assign_mode(MEANS[3] + 0.05, model) == (4, True)
    mode, visited = assign_mode([0.5, 4.5], model)
    assert not visited
    modes, visited = assign_modes(MEANS, model)
    assert modes.tolist() == list(range(1, 21))
    assert visited.all()


def test_iid_samples_statistics(rng):
    model = GaussianMixture2D()
    samples = sample_mixture(model, 20000, rng)
    stats = mode_stats(samples, model)
    assert visited_mode_count(stats) == 20
    assert stats.frequencies.sum() == pytest.approx(1.0)
    assert stats.errors.max() < 0.01
    assert moments(samples) == pytest.approx(TRUE_MOMENTS, rel=0.02)


def test_unequal_variances():
    model, ladders = configure_unequal_variances()
    assert model.sigmas.tolist() == UNEQUAL_SIGMAS
    assert ladders['ees']['chains'] == 6
    assert ladders['pteem']['first_levels'] == [0.5]


def test_unequal_variant_ladders():
    config = parse_config('mixture2d', flags={'variant': 'unequal',
                                              'seed': 1})
    levels = config.energy_ladder().levels
    assert len(levels) == 6
    assert levels[0] == 0.5
    assert levels[1] == 1.5
    assert levels[-1] == 20.0
    ees = config.with_algorithm('ees')
    assert len(ees.temperatures()) == 6
    assert ees.temperatures()[-1] == 60.0


def test_ratio_table():
    studies = {
        'pt': {'err_median': [0.02, 0.04], 'err_max': [0.1, 0.2]},
        'pteem': {'err_median': [0.01, 0.01], 'err_max': [0.05, 0.0]},
    }
    table = ratio_table(studies)
    assert [(a, b, s) for a, b, s, _, _ in table] == [
        ('pt', 'pteem', 'R_med'), ('pt', 'pteem', 'R_max')]
    assert table[0][4] == pytest.approx(3.0)
    # division by a zero error is left out of the mean
    assert table[1][4] == pytest.approx(2.0)


def test_small_study_is_reproducible(tmp_path):
    flags = {'seed': 5, 'runs': 2, 'iterations': 60, 'burnin': 40,
             'chains': 6, 'out': str(tmp_path)}
    config = parse_config('mixture2d', flags=flags)
    first = run_mixture_study(config)
    second = run_mixture_study(config)
    assert np.array_equal(first[0][0].chain_samples(1),
                          second[0][0].chain_samples(1))
    assert ([r['moments'] for r in first[1]]
            == [r['moments'] for r in second[1]])
    pooled = first[2]
    assert pooled['runs'] == 2
    assert len(pooled['err_median']) == 20


@pytest.mark.slow
def test_desk_scale_equal_variances():
    pooled = {}
    for algorithm in ('pt', 'pteem'):
        config = parse_config('mixture2d', flags={'algorithm': algorithm,
                                                  'seed': 2024,
                                                  'workers': 4})
        pooled[algorithm] = run_mixture_study(config)[2]
    assert pooled['pteem']['visited_modes']['mean'] >= 19.0
    assert pooled['pt']['visited_modes']['mean'] <= 17.0
    assert abs(pooled['pteem']['moments_mean'][0] - 4.478) < 0.25
    assert abs(pooled['pteem']['moments_mean'][3] - 33.920) < 3.5
    assert abs(pooled['pteem']['local_acceptance'] - 0.333) < 0.05
    assert abs(pooled['pteem']['exchange_acceptance'] - 0.822) < 0.08


@pytest.mark.slow
def test_desk_scale_unequal_variances():
    visited = {}
    for algorithm in ('ees', 'pteem'):
        config = parse_config('mixture2d', flags={
            'algorithm': algorithm, 'variant': 'unequal', 'seed': 2024,
            'workers': 4})
        visited[algorithm] = run_mixture_study(config)[2]['visited_modes']
    assert visited['pteem']['mean'] >= 18.0
    assert visited['pteem']['mean'] > visited['ees']['mean']
