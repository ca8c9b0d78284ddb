# -*- coding: utf-8 -*-
import os
import os.path as osp

from .info import NAME as project_name, version_major, version_minor


def builtin_share_directory():
    """
    Directory holding the experiment files and datasets shipped with pteem:
    the first ``share`` directory containing ``experiments`` among the
    package directory, the source tree and
    ``$PTEEM_HOME/share/pteem-<major>.<minor>`` of an installed copy.
    """
    package = osp.dirname(osp.abspath(__file__))
    candidates = [osp.join(package, 'share'),
                  osp.join(osp.dirname(package), 'share'),
                  osp.join(osp.dirname(osp.dirname(package)), 'share')]
    pteem_home = os.environ.get('PTEEM_HOME')
    if pteem_home:
        candidates.append(osp.join(
            pteem_home, 'share',
            '%s-%s.%s' % (project_name, version_major, version_minor)))
    for candidate in candidates:
        if osp.isdir(osp.join(candidate, 'experiments')):
            return candidate
    return candidates[-1]


share_directory = builtin_share_directory()
algorithms = ['pt', 'ees', 'pteem']


def share_directories():
    """
    Get a list of "share" directories, including personal paths
    ($PTEEM_BASE_DIRECTORY/share, $HOME/.local/share/pteem) and the
    builtin pteem share directory, when they exist.
    """

    share_directories = []
    from pteem.defaults import default_base_directory
    if default_base_directory is not None:
        share_directories.append(osp.join(default_base_directory,
                                          'share'))
    share_directories += [osp.join(osp.expanduser('~'), '.local', 'share',
                                   'pteem')]
    share_directories = [d for d in share_directories if os.path.isdir(d)] \
        + [share_directory]
    return share_directories


def find_share_file(*path):
    """
    Return the first existing file ``<share>/<path>`` in the share
    directories, or None.
    """
    for directory in share_directories():
        filename = osp.join(directory, *path)
        if osp.exists(filename):
            return filename
    return None
