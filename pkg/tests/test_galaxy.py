# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from pteem.configuration import parse_config
from pteem.engines import exchange_probability
from pteem.errors import ConfigurationError, EvaluationError, IngestionError
from pteem.galaxy import (GalaxyHyper, GalaxyModel, MixtureParamState,
                          galaxy_ee_acceptance, galaxy_gibbs_sweep,
                          label_mode_of, label_mode_stats,
                          label_probabilities, load_galaxy_data,
                          log_likelihood, permutation_rank,
                          run_galaxy_study, sample_means,
                          sample_precisions)


@pytest.fixture
def data():
    return load_galaxy_data()


@pytest.fixture
def model(data):
    return GalaxyModel(data, GalaxyHyper())


def test_galaxy_data(data):
    assert len(data) == 82
    assert 9.0 < data.min() < data.max() < 35.0


def test_bad_data_file(tmp_path):
    path = tmp_path / 'bad.txt'
    path.write_text(u'9.172\nnot a number\n')
    with pytest.raises(IngestionError):
        load_galaxy_data(str(path))
    with pytest.raises(IngestionError):
        load_galaxy_data(str(tmp_path / 'missing.txt'))


def test_hyperparameters():
    hyper = GalaxyHyper()
    assert hyper.kappa == pytest.approx(0.01)
    assert hyper.h == pytest.approx(0.1)
    with pytest.raises(ConfigurationError):
        GalaxyHyper(alpha=0.0)
    with pytest.raises(ConfigurationError):
        GalaxyHyper(k=0)


def test_permutation_rank():
    assert permutation_rank([0, 1, 2]) == 1
    assert permutation_rank([1, 0, 2]) == 3
    assert permutation_rank([2, 1, 0]) == 6
    ranks = set(permutation_rank(p) for p in
                [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1],
                 [2, 1, 0]])
    assert ranks == set(range(1, 7))


def test_label_mode():
    assert label_mode_of(np.array([1.0, 2.0, 3.0])) == 1
    assert label_mode_of(np.array([3.0, 1.0, 2.0])) == 4
    # ties keep the index order
    assert label_mode_of(np.array([2.0, 2.0, 1.0])) == 5


def test_label_mode_stats():
    counts, errors = label_mode_stats([1, 1, 2, 6], 3)
    assert counts.tolist() == [2, 1, 0, 0, 0, 1]
    assert errors[0] == pytest.approx(0.5 - 1 / 6.0)
    assert errors[2] == pytest.approx(1 / 6.0)


def test_degenerate_precision(model, rng):
    x = model.initial_state(rng)
    with pytest.raises(EvaluationError):
        log_likelihood(x._replace(precision=np.zeros(6)), model.y)


def test_ee_acceptance_matches_exchange(model, rng):
    x = model.initial_state(rng)
    y = galaxy_gibbs_sweep(x, model.y, 1.0, model.hyper, rng)
    for t_i, t_j in ((1.0, 2.0), (1.5, 4.0)):
        assert galaxy_ee_acceptance(x, y, t_i, t_j, model.y) == \
            pytest.approx(exchange_probability(model, x, y, t_i, t_j))
    assert galaxy_ee_acceptance(x, y, 2.0, 2.0, model.y) == 1.0


def test_label_probabilities(model, rng):
    x = model.initial_state(rng)
    p = label_probabilities(x, model.y, 1.0)
    assert p.shape == (82, 6)
    assert np.allclose(p.sum(axis=1), 1.0)
    flat = label_probabilities(x._replace(weights=np.full(6, 1 / 6.0)),
                               model.y, 1e12)
    assert np.allclose(flat, 1 / 6.0)


def test_mean_conditional_without_data(rng):
    hyper = GalaxyHyper(k=2)
    x = MixtureParamState(mu=np.zeros(2), precision=np.ones(2),
                          weights=np.full(2, 0.5),
                          labels=np.zeros(3, dtype=int), beta=1.0)
    y = np.array([10.0, 11.0, 12.0])
    draws = np.array([sample_means(x, y, 1.0, hyper, rng).mu
                      for _ in range(4000)])
    # component 2 has no observation: prior N(xi, 1/kappa)
    assert abs(draws[:, 1].mean() - hyper.xi) < 0.5
    assert abs(draws[:, 1].std() - 10.0) < 0.5
    # component 1: precision 3 + 0.01, mean close to 11
    assert abs(draws[:, 0].mean() - (33.0 + 0.2) / 3.01) < 0.05


def within_three_sigma(draws, mean, variance, excess_kurtosis=0.0):
    n = len(draws)
    assert abs(draws.mean() - mean) <= 3 * math.sqrt(variance / n)
    assert abs(draws.var(ddof=1) - variance) <= \
        3 * variance * math.sqrt((2.0 + excess_kurtosis) / n)


@pytest.mark.parametrize('temperature', [1.0, 2.0])
def test_single_component_conjugate_updates(temperature, rng):
    hyper = GalaxyHyper(k=1)
    y = np.array([10.0, 11.0, 12.0])
    x = MixtureParamState(mu=np.array([11.0]), precision=np.array([2.0]),
                          weights=np.ones(1), labels=np.zeros(3, dtype=int),
                          beta=1.0)
    n = 100000
    mu = np.array([sample_means(x, y, temperature, hyper, rng).mu[0]
                   for _ in range(n)])
    precision = 3 * 2.0 / temperature + hyper.kappa
    within_three_sigma(mu, (2.0 * 33.0 / temperature + hyper.xi * hyper.kappa)
                       / precision, 1.0 / precision)
    tau = np.array([sample_precisions(x, y, temperature, hyper, rng)
                    .precision[0] for _ in range(n)])
    # squared residuals around mu = 11 sum to 2
    shape = hyper.alpha + 3 / (2.0 * temperature)
    rate = x.beta + 2.0 / (2.0 * temperature)
    within_three_sigma(tau, shape / rate, shape / rate ** 2, 6.0 / shape)


def relabel(x, permutation):
    '''
    Component j of the result is component ``permutation[j]`` of ``x``.
    '''
    inverse = np.argsort(permutation)
    return x._replace(mu=x.mu[permutation],
                      precision=x.precision[permutation],
                      weights=x.weights[permutation],
                      labels=inverse[x.labels])


def test_label_mode_under_relabeling(model, rng):
    x = model.initial_state(rng)
    x = x._replace(mu=rng.permutation(np.linspace(10.0, 30.0, 6)),
                   precision=rng.uniform(0.5, 2.0, size=6),
                   weights=rng.dirichlet(np.ones(6)))
    order = np.argsort(x.mu)
    for _ in range(20):
        permutation = rng.permutation(6)
        relabeled = relabel(x, permutation)
        inverse = np.argsort(permutation)
        assert label_mode_of(relabeled) == permutation_rank(inverse[order])
        assert model.log_density(relabeled) == pytest.approx(
            model.log_density(x), rel=1e-12)
    assert label_mode_of(relabel(x, order)) == 1


def test_gibbs_sweep_keeps_valid_state(model, rng):
    x = model.initial_state(rng)
    for _ in range(20):
        x = galaxy_gibbs_sweep(x, model.y, 2.0, model.hyper, rng)
    assert np.all(x.precision > 0)
    assert x.weights.sum() == pytest.approx(1.0)
    assert x.labels.min() >= 0 and x.labels.max() < 6
    assert x.beta > 0
    assert np.isfinite(model.log_density(x))
    assert model.tempered_log_density(x, 1.0) == pytest.approx(
        model.log_density(x))


def test_small_study():
    config = parse_config('galaxy', flags={
        'seed': 3, 'runs': 1, 'iterations': 40, 'burnin': 10,
        'chains': 4})
    traces, runs, pooled = run_galaxy_study(config)
    assert traces[0].chain_samples(1).shape == (40, 19)
    assert 1 <= runs[0]['visited_modes'] <= math.factorial(6)
    assert pooled['runs'] == 1


@pytest.mark.slow
def test_desk_scale_label_switching():
    pooled = {}
    for algorithm in ('pt', 'pteem'):
        config = parse_config('galaxy', flags={'algorithm': algorithm,
                                               'seed': 2024,
                                               'workers': 4})
        pooled[algorithm] = run_galaxy_study(config)[2]
    assert pooled['pteem']['visited_modes']['mean'] >= 655
    assert pooled['pt']['visited_modes']['mean'] <= 655
    assert abs(pooled['pteem']['exchange_acceptance'] - 0.49) < 0.08
    assert abs(pooled['pt']['exchange_acceptance'] - 0.61) < 0.08
