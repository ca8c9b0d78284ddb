# -*- coding: utf-8 -*-

from __future__ import absolute_import, division, print_function

import io
import sys
import warnings

import numpy as np


flag_words = {'yes': True, 'true': True, '1': True,
              'no': False, 'false': False, '0': False}


class CalibrationWarning(UserWarning):
    '''
    Advisory about temperature or energy ladders: too few chains for the
    number of rings, adjacent chains sharing almost no energy ring, global
    moves skipped because no ring contains two chains.
    '''


def boolean_value(value):
    '''
    Value of a yes/no flag such as ``generate`` or ``verbose``, given on
    the command line or in an experiment file: True, False, or None when
    ``value`` is not a flag. Bools (numpy ones included), the integers 0
    and 1 and the words yes/no, true/false, 1/0 in any case are flags.
    '''
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return flag_words.get(str(int(value)))
    if isinstance(value, str):
        return flag_words.get(value.strip().lower())
    return None


def verbose_file(verbose, openmode='w+'):
    '''
    Convert a ``verbose`` command parameter to a file object (or None).

    Booleans and boolean strings give ``sys.stdout`` or None, any other
    string is used as a file name, and file objects are returned as is.
    '''
    if verbose is None:
        return None
    boolean = boolean_value(verbose)
    if boolean is not None:
        return (sys.stdout if boolean else None)
    if isinstance(verbose, str):
        # Try to open file from given string
        try:
            verbose = open(verbose, openmode)
        except IOError:
            return None

    if isinstance(verbose, io.IOBase) or hasattr(verbose, 'write'):
        return verbose

    return None


def calibration_warning(message):
    warnings.warn(message, CalibrationWarning, stacklevel=3)
