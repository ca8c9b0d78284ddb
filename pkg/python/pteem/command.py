# -*- coding: utf-8 -*-
from __future__ import absolute_import, division, print_function

import argparse
from collections import OrderedDict
from functools import partial
import inspect
import os.path as osp
import re
import sys
import traceback

from pteem.defaults import default_output_directory, output_directory_variable
from pteem.errors import ConfigurationError
from pteem.info import __version__
from pteem.log import boolean_value


if hasattr(inspect, 'getfullargspec'):
    getargspec = inspect.getfullargspec  # Python 3
else:
    getargspec = inspect.getargspec  # Python 2

# Exit status of a command that failed
exit_configuration_error = 2
exit_runtime_error = 3


def check_boolean(name, value):
    result = boolean_value(value)
    if result is None:
        raise ConfigurationError(
            'Invalid boolean value for {0}: {1}'.format(name, value))
    return result


commands = OrderedDict()


def command(f, name=None):
    if isinstance(f, str):
        return partial(command, name=f)

    global commands
    if name is None:
        name = f.__name__
    commands[name] = f
    return f


param_help = {
    'config': '''config
{indent}JSON configuration file merged over the experiment defaults. It has
{indent}a ``run`` section, a ``model`` section and one section per algorithm
{indent}(``pt``, ``pteem``, ``ees``).''',
    'algorithm': '''algorithm
{indent}default={algorithm_default}

{indent}Sampler: ``pt`` (parallel tempering), ``ees`` (equi-energy sampler)
{indent}or ``pteem`` (parallel tempering with equi-energy moves). When not
{indent}given, the algorithm of the configuration is used.''',
    'runs': '''runs
{indent}Number of independent runs.''',
    'iterations': '''iterations
{indent}Number of iterations kept after burn-in.''',
    'burnin': '''burnin
{indent}Number of burn-in iterations (must be positive).''',
    'seed': '''seed
{indent}Master seed. Run r uses the r-th child of the seed sequence so results
{indent}do not depend on the number of workers. A seed is drawn and recorded
{indent}in the manifest when none is given.''',
    'workers': '''workers
{indent}Number of worker processes running independent runs.''',
    'out': '''out
{indent}default={out_default}

{indent}Output directory. The ``{output_directory_variable}`` environment
{indent}variable overrides the configured directory; this parameter overrides
{indent}both.''',
    'verbose': '''verbose
{indent}default={verbose_default}

{indent}Print more detailed information if value is ``yes``, ``true`` or ``1``.''',  # noqa: E501
    'parameters': '''parameters
{indent}Any other parameter of the configuration, either by its name
{indent}(``t_max=20``) or prefixed by its section (``ees.p_ee=0.2``).''',
}


def text_formatted(text):
    ftext = text
    ftext = re.sub(':[^:]+:`([^`<]+)( *<.*>)?`', lambda m: m.group(1), ftext)
    ftext = ftext.replace('``', '"')
    ftext = ftext.replace('`', "'")
    return ftext


def formatted_help(text, format='text'):
    if format == 'text':
        return text_formatted(text)
    return text


def _help_vars(format='text'):
    help_vars = dict(executable=osp.basename(sys.argv[0]),
                     pteem_version=__version__,
                     out_default=('``pteem_output``' if format == 'rst'
                                  else default_output_directory()),
                     output_directory_variable=output_directory_variable,
                     indent='    ')
    r = re.compile('{([^}]+)}')
    keys = set()
    for text in param_help.values():
        keys.update(r.findall(text))
    help_vars.update({k: '' for k in keys if k not in help_vars})
    return help_vars


def get_doc(command, indent='', format='text'):
    doc = inspect.getdoc(command) or ''

    cargs = getargspec(command)
    defaults = {i + '_default': j
                for i, j in zip(cargs.args[-len(cargs.defaults or ()):],
                                cargs.defaults or ())}

    help_vars = _help_vars(format)
    help_vars.update((k, v) for k, v in defaults.items()
                     if v is not None or not help_vars.get(k))
    help_vars.update({k: v.format(**help_vars)
                      for k, v in param_help.items()})

    doc = doc.format(**help_vars)
    if indent:
        doc = '\n'.join(indent + line for line in doc.split('\n'))
    return formatted_help(doc, format=format)


# The 'file' parameter is not documented in the docstring because it is not
# meant to be used from the command-line.
@command
def help(command=None, format='text', full=False, file=None):
    """
    Print global help or help about a command.

    Parameters
    ----------
    format
        format help text in a given text format. Valid values are "text"
        (default) for raw text, or rst (RST/sphinx format).
    full
        if ``true`` or ``yes`` or ``1``, display each subcommand parameters
        documentation in the general help.
    """
    full = check_boolean('full', full)
    if file is None:
        file = sys.stdout
    indent = ''
    if format == 'text':
        indent = ' ' * 4

    if command:
        if command not in commands:
            raise ConfigurationError('unknown command {0!r}'.format(command))
        command_help = get_doc(commands[command], indent=indent,
                               format=format)
        print('-' * len(command), file=file)
        print(command, file=file)
        print('-' * len(command), file=file)
        print(command_help, file=file)
    else:
        help_vars = _help_vars(format)
        help_vars.update({k: v.format(**help_vars)
                          for k, v in param_help.items()})

        global_help = '''\
pteem runs population MCMC samplers (parallel tempering, the equi-energy
sampler and parallel tempering with equi-energy moves) on three benchmark
studies and diagnoses their energy ladders.

Version : {pteem_version}

usage::

    {executable} <general options> <command> [<command parameters>...]

Command parameters are given as ``name=value``; ``--name value``,
``--name=value`` and ``--name`` (for yes/no parameters) are accepted too.

general optional arguments:
    -v, --verbose   Display as much information as possible.
    --version       Display pteem version number and exit.
    -h, --help      Display help message and exit.
                    If used after command name, display only the help of this
                    command.

Exit status: 0 on success, 2 for an invalid configuration, 3 for any other
error.

Commands:
========='''.format(**help_vars)

        global_help = formatted_help(global_help, format=format)

        commands_summary = [global_help]
        prog_name = osp.basename(sys.argv[0])
        for command in commands:
            command_doc = get_doc(commands[command], indent=indent * 2,
                                  format=format)
            if not full:
                # Keep the docstring up to its numpydoc parameters section
                command_doc = re.split(
                    r'\s*parameters\s*-+\s*', command_doc, flags=re.I)[0]
            commands_summary.append('\n')
            if format == 'rst':
                commands_summary.append(
                    '.. _' + ('%s-%s' % (prog_name, command)).replace('_', '-')
                    + '-help:')
                commands_summary.append('')
            commands_summary.append(indent + '-' * len(command))
            commands_summary.append(indent + command)
            commands_summary.append(indent + '-' * len(command))
            commands_summary.append(command_doc)
        print('\n'.join(commands_summary), file=file)


def parse_command_options(words):
    '''
    Split command words into positional arguments and keyword arguments.

    ``name=value``, ``--name=value`` and ``--name value`` give a keyword
    argument; ``--name`` followed by another option or by nothing gives
    ``name='yes'``. Dashes inside option names become underscores.
    '''
    args = []
    kwargs = OrderedDict()
    words = list(words)
    i = 0
    while i < len(words):
        word = words[i]
        i += 1
        if word.startswith('--') and len(word) > 2:
            name = word[2:]
            if '=' in name:
                name, value = name.split('=', 1)
            elif i < len(words) and not words[i].startswith('--') \
                    and '=' not in words[i]:
                value = words[i]
                i += 1
            else:
                value = 'yes'
            kwargs[name.replace('-', '_')] = value
        elif '=' in word:
            name, value = word.split('=', 1)
            kwargs[name] = value
        else:
            args.append(word)
    return args, kwargs


def report_error(command_name, error, status, usage=True):
    print('ERROR: {0} raised the following error:'.format(command_name),
          file=sys.stderr)
    traceback.print_exc(file=sys.stderr)
    if usage and command_name in commands:
        print('\nUsage:', file=sys.stderr)
        help(command_name, file=sys.stderr)
    sys.stderr.flush()
    print('\nERROR SUMMARY (details above): {0}'.format(error),
          file=sys.stderr)
    return status


def main(argv=None):
    parser = argparse.ArgumentParser(add_help=False)

    parser.add_argument('-v', '--verbose', action='store_true')
    parser.add_argument('--version', action='version',
                        version='pteem version: %s' % __version__)
    parser.add_argument('-h', '--help', action='store_true')
    parser.add_argument('command', nargs='?', choices=list(commands.keys()))
    parser.add_argument('command_options', nargs=argparse.REMAINDER)
    options = parser.parse_args(argv)

    if options.help or not options.command:
        help()
        return 0

    command_name = options.command
    command = commands[command_name]

    # Get command argument specification
    cargs = getargspec(command)

    args, kwargs = parse_command_options(options.command_options)
    if options.verbose and 'verbose' in cargs.args:
        kwargs.setdefault('verbose', 'yes')
    try:
        if not kwargs and args in (['-h'], ['--help']):
            result = commands['help'](command_name)
        else:
            unknown = [k for k in kwargs if k not in cargs.args]
            if unknown and cargs.varkw is None:
                raise ConfigurationError(
                    'unknown parameter(s) for {0}: {1}'.format(
                        command_name, ', '.join(unknown)))
            result = command(*args, **kwargs)
    except ConfigurationError as e:
        sys.exit(report_error(command_name, e, exit_configuration_error))
    except (ValueError, TypeError, RuntimeError, NotImplementedError,
            IOError, OSError) as e:
        sys.exit(report_error(command_name, e, exit_runtime_error,
                              usage=False))
    sys.exit(result or 0)
