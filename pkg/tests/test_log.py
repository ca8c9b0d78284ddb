# -*- coding: utf-8 -*-

import os.path as osp
import sys

import numpy as np
import pytest

from pteem import builtin_share_directory, find_share_file
from pteem.log import boolean_value, verbose_file


@pytest.mark.parametrize('value, expected', [
    (True, True), (np.bool_(False), False), (1, True), (np.int64(0), False),
    ('Yes', True), (' no ', False), ('TRUE', True), ('0', False),
    (2, None), ('maybe', None), (None, None), (0.5, None)])
def test_flag_values(value, expected):
    assert boolean_value(value) is expected


def test_verbose_file(tmp_path):
    assert verbose_file(None) is None
    assert verbose_file('yes') is sys.stdout
    assert verbose_file(False) is None
    f = verbose_file(str(tmp_path / 'log.txt'))
    try:
        print('ees: chain 3 done', file=f)
    finally:
        f.close()
    assert (tmp_path / 'log.txt').read_text() == 'ees: chain 3 done\n'


def test_builtin_share_directory():
    share = builtin_share_directory()
    assert osp.isfile(osp.join(share, 'experiments', 'mixture2d.json'))
    assert find_share_file('experiments', 'galaxy.json') == osp.join(
        share, 'experiments', 'galaxy.json')
