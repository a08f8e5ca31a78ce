"""Oracle fixture loader and common test helpers.
"""

# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

#pylint: disable-msg=missing-docstring

import logging
from doctest import testmod
from fractions import Fraction
from os import environ
from os.path import dirname, join as joinpath
from sys import stdout
from typing import Any, Dict, List
from unittest import TestCase, main as ut_main
from ruamel.yaml import YAML
from pymcrt import McrtLogger
from pymcrt.misc import to_bool, to_fraction


RESOURCE_DIR = joinpath(dirname(__file__), 'resources')


def load_fixture(name: str) -> List[Dict[str, Any]]:
    """Load all the YaML documents of a fixture file.

       :param name: the fixture file name, without the .yaml extension
       :return: the list of documents, in file order
    """
    path = joinpath(RESOURCE_DIR, f'{name}.yaml')
    with open(path, 'rt', encoding='utf-8') as yfp:
        try:
            return [doc for doc in YAML(typ='safe').load_all(yfp) if doc]
        except Exception as exc:
            raise ValueError(f'Invalid fixture {name}: {exc}') from exc


def rational(value: Any) -> Fraction:
    """Convert a YaML scalar (int or "p/q" string) into a Fraction."""
    return to_fraction(value if isinstance(value, int) else str(value))


class McrtTestCase(TestCase):
    """Common features for all tests.
    """

    @classmethod
    def setUpClass(cls):
        cls.debug = to_bool(environ.get('MCRT_DEBUG', 'off'),
                            permissive=False)
        cls.slow = to_bool(environ.get('MCRT_SLOW', 'on'), permissive=False)

    def setUp(self):
        if self.debug:
            print(f'\n{self.id()}')


def run_tests(module: Any) -> None:
    """Test module entry point: configure logging from the environment, run
       the doctests of the module, then its unit tests.
    """
    debug = to_bool(environ.get('MCRT_DEBUG', 'off'))
    if debug:
        formatter = logging.Formatter('%(asctime)s.%(msecs)03d %(levelname)-7s'
                                      ' %(name)-20s [%(lineno)4d] %(message)s',
                                      '%H:%M:%S')
    else:
        formatter = logging.Formatter('%(message)s')
    level = environ.get('MCRT_LOGLEVEL', 'warning').upper()
    try:
        loglevel = getattr(logging, level)
    except AttributeError as exc:
        raise ValueError(f'Invalid log level: {level}') from exc
    McrtLogger.log.addHandler(logging.StreamHandler(stdout))
    McrtLogger.set_level(loglevel)
    McrtLogger.set_formatter(formatter)
    testmod(module)
    try:
        ut_main(module=module.__name__, defaultTest='suite')
    except KeyboardInterrupt:
        pass
