# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function


class ConfigurationError(ValueError):
    '''
    Invalid run configuration, ladder or sampler parameter. ``line`` is the
    line of the configuration file where the faulty item appears, when known.
    '''

    def __init__(self, message, line=None, filename=None):
        if line is not None:
            message = '{0} (line {1}{2})'.format(
                message, line, ', ' + filename if filename else '')
        super(ConfigurationError, self).__init__(message)
        self.line = line
        self.filename = filename


class EvaluationError(RuntimeError):
    '''
    A target density produced a non-finite intermediate value (NaN).
    '''


class IngestionError(RuntimeError):
    '''
    A data file is missing or cannot be parsed.
    '''
