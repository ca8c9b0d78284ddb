# -*- coding: utf-8 -*-
'''
Run configurations.

Defaults of each experiment are JSON documents stored in
``share/experiments/<experiment>.json``. A user configuration file with
the same layout is merged over them, then command parameters override
both. Sections are ``run``, ``model`` and one section per algorithm.
'''
from __future__ import absolute_import, division, print_function

import copy
import json
import os
import re

import numpy as np

from pteem import algorithms, find_share_file
from pteem.defaults import default_output_directory, output_directory_variable
from pteem.errors import ConfigurationError
from pteem.ladders import (EnergyLadder, TemperatureLadder,
                           build_energy_ladder, build_temperature_ladder)
from pteem.log import boolean_value

experiments = ('mixture2d', 'galaxy', 'tfbs')

# Keys of a configuration file that are not parameters
_descriptive_keys = ('name', 'description')

# Parameters holding file or directory names, never parsed as JSON
path_keys = ('out', 'data', 'input')


def update_config(config, update):
    """
    Update a configuration dictionary with an update configuration
    dictionary. Dictionaries are merged recursively; any other value
    (including lists such as ladders) is replaced.
    """
    for k, v in update.items():
        oldv = config.get(k)
        if isinstance(oldv, dict) and isinstance(v, dict):
            update_config(oldv, v)
        else:
            config[k] = v


def load_default_config(experiment):
    filename = find_share_file('experiments', experiment + '.json')
    if filename is None:
        raise ConfigurationError(
            'unknown experiment {0!r}, expected one of {1}'.format(
                experiment, ', '.join(experiments)))
    with open(filename) as f:
        return json.load(f)


def _line_of(text, key):
    if text is None:
        return None
    pattern = re.compile(r'"{0}"\s*:'.format(re.escape(key)))
    for number, line in enumerate(text.splitlines(), 1):
        if pattern.search(line):
            return number
    return None


def check_keys(defaults, update, text=None, filename=None, path=()):
    '''
    Raise a :class:`ConfigurationError` for any key of ``update`` that the
    defaults do not know.
    '''
    for key, value in update.items():
        if not path and key in _descriptive_keys:
            continue
        if key not in defaults:
            raise ConfigurationError(
                'unknown configuration key {0!r}'.format(
                    '.'.join(path + (key,))),
                line=_line_of(text, key), filename=filename)
        if isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise ConfigurationError(
                    'configuration section {0!r} must be an object'.format(
                        '.'.join(path + (key,))),
                    line=_line_of(text, key), filename=filename)
            check_keys(defaults[key], value, text, filename, path + (key,))


def coerce(name, value, default):
    '''
    Convert a command line string to the type of the default value.
    '''
    if not isinstance(value, str):
        return value
    try:
        if isinstance(default, bool):
            result = boolean_value(value)
            if result is None:
                raise ValueError(value)
            return result
        if isinstance(default, int):
            return int(value)
        if isinstance(default, float):
            return float(value)
        if isinstance(default, list):
            return [json.loads(v) for v in value.split(',') if v.strip()]
        if default is None:
            if name in path_keys or name.split('.')[-1] in path_keys:
                return value
            if ',' in value:
                return [json.loads(v) for v in value.split(',') if v.strip()]
            try:
                return json.loads(value)
            except ValueError:
                return value
    except ValueError:
        raise ConfigurationError(
            'invalid value for {0}: {1!r}'.format(name, value))
    return value


def _resolve_flag(config, name, algorithm):
    '''
    List of ``(section, key)`` a parameter sets. A flat name sets the key
    in every one of the ``run``, ``model`` and algorithm sections that
    defines it (an algorithm section may override the run length).
    '''
    if '.' in name:
        section, key = name.split('.', 1)
        if key_in(config, section, key):
            return [(section, key)]
    else:
        found = [(section, name) for section in ('run', 'model', algorithm)
                 if key_in(config, section, name)]
        if found:
            return found
    raise ConfigurationError('unknown parameter {0!r}'.format(name))


def key_in(config, section, key):
    return isinstance(config.get(section), dict) and key in config[section]


def _normalize_flag_name(name):
    return name.lstrip('-').replace('-', '_')


def parse_config(experiment, filename=None, flags=None, verbose=None):
    '''
    Build a validated :class:`RunConfig`.

    Parameters
    ----------
    experiment: str
        ``mixture2d``, ``galaxy`` or ``tfbs``
    filename: str
        optional JSON configuration file merged over the defaults
    flags: dict
        parameter values (strings are converted to the type of the
        default); they override the file
    verbose: file
        where to report precedence decisions
    '''
    flags = dict((_normalize_flag_name(k), v)
                 for k, v in (flags or {}).items())
    config = load_default_config(experiment)
    defaults = copy.deepcopy(config)

    text = None
    user = {}
    if filename:
        if not os.path.exists(filename):
            raise ConfigurationError(
                'configuration file not found: {0}'.format(filename))
        with open(filename) as f:
            text = f.read()
        try:
            user = json.loads(text)
        except ValueError as e:
            raise ConfigurationError(
                'invalid JSON configuration: {0}'.format(e),
                line=getattr(e, 'lineno', None), filename=filename)
        if not isinstance(user, dict):
            raise ConfigurationError('a configuration file must contain a '
                                     'JSON object', filename=filename)
        check_keys(defaults, user, text, filename)

    algorithm = flags.get('algorithm',
                          user.get('run', {}).get('algorithm',
                                                  config['run']['algorithm']))
    if algorithm not in algorithms:
        raise ConfigurationError(
            'unknown algorithm {0!r}, expected one of {1}'.format(
                algorithm, ', '.join(algorithms)))
    if algorithm not in config:
        raise ConfigurationError(
            'algorithm {0} is not available for the {1} experiment'.format(
                algorithm, experiment))

    resolved = []
    for name, value in flags.items():
        for section, key in _resolve_flag(config, name, algorithm):
            resolved.append((section, key,
                             coerce(name, value, defaults[section][key])))

    # Variants change the defaults, not what the user wrote
    variant = dict(((s, k), v) for s, k, v in resolved).get(
        ('model', 'variant'),
        user.get('model', {}).get('variant',
                                  config['model'].get('variant')))
    overlay = variant_overlay(experiment, variant)
    if overlay:
        update_config(config, overlay)
    update_config(config, copy.deepcopy(user))
    for section, key, value in resolved:
        config[section][key] = value

    run = config['run']
    file_seed = user.get('run', {}).get('seed')
    if 'seed' in flags and file_seed is not None \
            and run['seed'] != file_seed and verbose:
        print('seed {0} given as parameter overrides seed {1} of {2}'.format(
            run['seed'], file_seed, filename), file=verbose)
    if 'out' not in flags and os.environ.get(output_directory_variable):
        run['out'] = os.environ[output_directory_variable]
    if not run.get('out'):
        run['out'] = default_output_directory()
    if run.get('seed') is None:
        run['seed'] = int(np.random.SeedSequence().entropy)
        run['seed_generated'] = True
        if verbose:
            print('no seed given, using seed', run['seed'], file=verbose)
    result = RunConfig(experiment, config, filename)
    result.validate()
    return result


def variant_overlay(experiment, variant):
    if experiment == 'mixture2d':
        from pteem.mixture2d import variant_config
        return variant_config(variant)
    return None


class RunConfig(object):
    '''
    Validated configuration of one experiment: a nested dictionary with
    accessors for the values every run needs.
    '''

    def __init__(self, experiment, values, filename=None):
        self.experiment = experiment
        self.values = values
        self.filename = filename

    @property
    def run(self):
        return self.values['run']

    @property
    def algorithm(self):
        return self.run['algorithm']

    @property
    def model(self):
        return self.values['model']

    @property
    def section(self):
        return self.values[self.algorithm]

    @property
    def runs(self):
        return self.run['runs']

    @property
    def iterations(self):
        return self.section.get('iterations') or self.run['iterations']

    @property
    def burnin(self):
        return self.section.get('burnin') or self.run['burnin']

    @property
    def seed(self):
        return self.run['seed']

    @property
    def workers(self):
        return self.run['workers']

    @property
    def out(self):
        return self.run['out']

    def with_algorithm(self, algorithm):
        if algorithm not in self.values:
            raise ConfigurationError(
                'algorithm {0} is not available for the {1} experiment'
                .format(algorithm, self.experiment))
        values = copy.deepcopy(self.values)
        values['run']['algorithm'] = algorithm
        return RunConfig(self.experiment, values, self.filename)

    def as_dict(self):
        result = copy.deepcopy(self.values)
        result['experiment'] = self.experiment
        return result

    def validate(self):
        def positive(name, value):
            if not isinstance(value, int) or isinstance(value, bool) \
                    or value < 1:
                raise ConfigurationError(
                    '{0} must be a positive integer, got {1!r}'.format(
                        name, value))
        positive('runs', self.runs)
        positive('iterations', self.iterations)
        positive('burnin', self.burnin)
        positive('workers', self.workers)
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigurationError(
                'seed must be a nonnegative integer, got {0!r}'.format(
                    self.seed))
        if self.algorithm == 'ees':
            p_ee = self.section.get('p_ee')
            if p_ee is None or not 0.0 < p_ee < 1.0:
                raise ConfigurationError(
                    'p_ee must lie in (0, 1), got {0!r}'.format(p_ee))
            positive('ring_construction',
                     self.section.get('ring_construction'))
        # ladders are checked by building them
        temperature_ladder_from(self.section)
        energy_ladder_from(self.section)

    def temperatures(self):
        return temperature_ladder_from(self.section)

    def energy_ladder(self):
        return energy_ladder_from(self.section)


def temperature_ladder_from(section):
    '''
    Temperature ladder of an algorithm section: explicit ``temperatures``
    or ``chains`` temperatures up to ``t_max`` spaced with
    ``temperature_scheme``.
    '''
    if section.get('temperatures'):
        return TemperatureLadder(section['temperatures'])
    return build_temperature_ladder(section['t_max'], section['chains'],
                                    section.get('temperature_scheme',
                                                'log_even'))


def energy_ladder_from(section):
    '''
    Energy ladder of an algorithm section: explicit ``levels`` or ``rings``
    levels between ``h1`` and ``hd``, preceded by ``first_levels``.
    '''
    if section.get('levels'):
        return EnergyLadder(section['levels'])
    if section.get('h1') is None or section.get('hd') is None \
            or section.get('rings') is None:
        raise ConfigurationError(
            'energy ladder needs either levels or h1, hd and rings')
    built = build_energy_ladder(section['h1'], section['hd'],
                                section['rings'],
                                section.get('energy_scheme', 'log_levels'))
    return EnergyLadder(list(section.get('first_levels') or [])
                        + list(built.levels))
