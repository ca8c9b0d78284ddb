# -*- coding: utf-8 -*-

import math
import warnings

import numpy as np
import pytest

from pteem.errors import ConfigurationError
from pteem.kernels import RandomWalkKernel
from pteem.ladders import (EnergyLadder, TemperatureLadder,
                           build_energy_ladder, build_temperature_ladder,
                           calibrate_energy_ladder, check_chain_count,
                           check_repartition, occupancy_from_rings,
                           ring_index)
from pteem.log import CalibrationWarning
from pteem.mixture2d import GaussianMixture2D


def test_log_even_temperatures():
    ladder = build_temperature_ladder(60.0, 20, 'log_even')
    assert len(ladder) == 20
    assert ladder[0] == 1.0
    assert ladder[-1] == 60.0
    ratios = np.diff(np.log(list(ladder)))
    assert np.allclose(ratios, ratios[0])


def test_inverse_even_temperatures():
    ladder = build_temperature_ladder(1.3, 15, 'inverse_even')
    inverses = 1.0 / np.array(list(ladder))
    assert np.allclose(np.diff(inverses), np.diff(inverses)[0])
    assert ladder[-1] == 1.3


@pytest.mark.parametrize('temperatures', [
    [1.0, 3.0, 2.0],
    [2.0, 3.0],
    [],
])
def test_invalid_temperature_ladders(temperatures):
    with pytest.raises(ConfigurationError):
        TemperatureLadder(temperatures)


def test_invalid_temperature_scheme():
    with pytest.raises(ConfigurationError):
        build_temperature_ladder(10.0, 5, 'linear')
    with pytest.raises(ConfigurationError):
        build_temperature_ladder(1.0, 5)


def test_energy_levels_must_increase():
    with pytest.raises(ConfigurationError):
        EnergyLadder([1.0, 1.0])
    with pytest.raises(ConfigurationError):
        EnergyLadder([1.0, float('inf')])


def test_ring_index():
    ladder = EnergyLadder([0.2, 2.0, 6.3, 20.0, 63.2])
    assert ring_index(ladder, -5.0) == 1
    assert ring_index(ladder, 0.2) == 1
    assert ring_index(ladder, 1.99) == 1
    assert ring_index(ladder, 2.0) == 2
    assert ring_index(ladder, 19.9) == 3
    assert ring_index(ladder, 63.2) == 5
    assert ring_index(ladder, np.inf) == 5
    with pytest.raises(ValueError):
        ring_index(ladder, float('nan'))


def test_log_levels():
    ladder = build_energy_ladder(10.0, 100.0, 5, 'log_levels')
    assert ladder.levels[0] == 10.0
    assert ladder.levels[-1] == 100.0
    assert ladder.levels[2] == pytest.approx(math.sqrt(1000.0))


def test_log_increments():
    ladder = build_energy_ladder(1.0, 8.0, 4, 'log_increments')
    increments = np.diff(ladder.levels)
    assert np.allclose(increments[1:] / increments[:-1], 2.0)
    assert ladder.levels[-1] == 8.0


def test_energy_ladder_errors():
    with pytest.raises(ConfigurationError):
        build_energy_ladder(10.0, 5.0, 3)
    with pytest.raises(ConfigurationError):
        build_energy_ladder(-1.0, 5.0, 3, 'log_levels')
    with pytest.raises(ConfigurationError):
        build_energy_ladder(1.0, 5.0, 3, 'unknown')


def test_chain_count_advice():
    ladder = EnergyLadder([1.0, 2.0, 3.0, 4.0, 5.0])
    with pytest.warns(CalibrationWarning):
        assert not check_chain_count(10, ladder)
    with warnings.catch_warnings():
        warnings.simplefilter('error')
        assert check_chain_count(20, ladder)


def test_occupancy_from_rings():
    rings = np.array([[1, 1, 2], [2, 3, 3]])
    table = occupancy_from_rings(rings, 3)
    assert table.tolist() == [[2, 1, 0], [0, 1, 2]]
    assert table.sum() == rings.size


def test_repartition_gap():
    table = np.array([[10, 0, 0], [0, 5, 5], [0, 5, 5]])
    repartition = check_repartition(table)
    assert not repartition.ok
    assert repartition.gaps == [(1, 2)]


def test_repartition_weak_overlap_warns():
    table = np.array([[999, 1], [1, 999]])
    with pytest.warns(CalibrationWarning):
        repartition = check_repartition(table, threshold=0.01)
    assert repartition.ok
    assert len(repartition.weak) == 1


def test_repartition_ok():
    table = np.array([[50, 50, 0], [20, 60, 20], [0, 50, 50]])
    repartition = check_repartition(table)
    assert repartition.ok
    assert not repartition.weak


def test_calibrate_energy_ladder(rng):
    model = GaussianMixture2D()
    ladder = calibrate_energy_ladder(model, RandomWalkKernel(0.25),
                                     np.array([0.5, 0.5]), 5, rng,
                                     iterations=600, burnin=200, early=5)
    assert ladder.d == 5
    assert ladder.levels[0] < ladder.levels[-1]
    with pytest.raises(ConfigurationError):
        calibrate_energy_ladder(model, RandomWalkKernel(0.25),
                                np.array([0.5, 0.5]), 5, rng,
                                iterations=100, burnin=200)
