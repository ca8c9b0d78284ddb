# -*- coding: utf-8 -*-

import os
import sys

import numpy as np
import pytest

try:
    import pteem  # noqa: F401
except ImportError:
    # Running from a source tree: python/ contains the package
    sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(
        os.path.abspath(__file__))), "python"))

bin_pteem = os.path.join(os.path.dirname(os.path.dirname(
    os.path.abspath(__file__))), 'bin', 'pteem')


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='run desk-scale reproduction tests')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def isolate_from_home(tmp_path, monkeypatch):
    monkeypatch.setenv("HOME", str(tmp_path))
    monkeypatch.delenv("PTEEM_BASE_DIRECTORY", raising=False)
    monkeypatch.delenv("PTEEM_OUTPUT_DIRECTORY", raising=False)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))


@pytest.fixture
def pteem_command():
    '''
    Command line prefix running the pteem script of this source tree.
    '''
    return [sys.executable, bin_pteem]
