# -*- coding: utf-8 -*-
#
# pteem documentation build configuration file.

from __future__ import absolute_import, print_function

import datetime
import os
import subprocess
import sys

release_info = {}
finfo = os.path.join('..', '..', 'python', 'pteem', 'info.py')
with open(finfo) as f:
    exec(compile(f.read(), finfo, 'exec'), release_info)

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.autosummary',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
    'sphinx.ext.autosectionlabel',
]
autosectionlabel_prefix_document = True
autosummary_generate = True
autodoc_default_options = {'members': True}

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'pteem'
copyright = (u'2021-%d' % datetime.date.today().year
             + u', %(AUTHOR)s' % release_info)
version = release_info['short_version']
release = release_info['__version__']

exclude_patterns = ['_build'] + templates_path
add_function_parentheses = True
pygments_style = 'sphinx'

html_theme = 'default'
html_title = 'pteem - population MCMC samplers'
html_short_title = 'pteem'
html_use_modindex = False
html_show_sourcelink = False
htmlhelp_basename = 'pteem-doc'

latex_documents = [
    ('index', 'pteem.tex', u'pteem Documentation', release_info['AUTHOR'],
     'manual'),
]

# generate help
sys.path.insert(0, os.path.abspath(os.path.join('..', '..', 'python')))
exe_path = os.path.join('..', '..', 'bin')

help = subprocess.check_output([sys.executable,
                                os.path.join(exe_path, 'pteem'), 'help',
                                'format=rst', 'full=1'])
with open('pteem_command_help.rst', 'w') as f:
    f.write(help.decode('utf-8'))
