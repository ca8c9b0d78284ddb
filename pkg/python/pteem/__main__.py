# -*- coding: utf-8 -*-

from pteem.command import main
from pteem import user_commands  # noqa: F401

main()
