# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function

import os
import os.path as osp

default_base_directory = os.environ.get('PTEEM_BASE_DIRECTORY')
if not default_base_directory:
    default_base_directory = osp.join(osp.expanduser('~'), 'pteem')

output_directory_variable = 'PTEEM_OUTPUT_DIRECTORY'


def default_output_directory():
    """
    Output directory used when a run configuration does not give one:
    ``$PTEEM_OUTPUT_DIRECTORY`` or ``./pteem_output``.
    """
    return os.environ.get(output_directory_variable) or 'pteem_output'


# Significant digits used for every real number written in CSV files
float_digits = 17

# Temperature ladder schemes, energy ladder schemes
temperature_schemes = ('log_even', 'inverse_even', 'inverse_geometric')
energy_schemes = ('log_levels', 'log_increments')

# Minimal share of joint mass two adjacent chains must have in a common ring
repartition_overlap_threshold = 0.01
