# -*- coding: utf-8 -*-

from __future__ import absolute_import, division, print_function


# pteem version
version_major = 1
version_minor = 0
version_micro = 0
version_extra = ""

short_version = '{0}.{1}'.format(version_major, version_minor)

# Expected by setup.py: string of form "X.Y.Z"
__version__ = '{0}.{1}.{2}{3}'.format(
    version_major, version_minor, version_micro, version_extra)

# Project descriptions
NAME = "pteem"
DESCRIPTION = ('Population MCMC: parallel tempering, equi-energy sampler '
               'and parallel tempering with equi-energy moves')
LONG_DESCRIPTION = '''
=====
pteem
=====

Population-based MCMC samplers (Parallel Tempering, the Equi-Energy Sampler
and Parallel Tempering with Equi-Energy Moves) together with a command line
harness running three benchmark studies: a 20-mode bivariate Gaussian
mixture, a Gibbs-sampled Gaussian mixture on the Galaxy velocity data, and
transcription factor binding site discovery.
'''
LICENSE = 'CeCILL-B'
AUTHOR = 'pteem developers'
AUTHOR_EMAIL = 'pteem@users.noreply.github.com'
REQUIRES = ['numpy>=1.20', 'scipy>=1.4']
