#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

#pylint: disable-msg=empty-docstring
#pylint: disable-msg=missing-docstring
#pylint: disable-msg=invalid-name

from importlib import import_module
from os.path import dirname, join as joinpath
from sys import modules, path as syspath
from unittest import TestCase, TestSuite, defaultTestLoader
from pymcrt.tests.fixtures import run_tests


class ToolsTestCase(TestCase):
    """Test tool suite can be loaded.

       This is especially useful to find Python syntax version mismatch
       and other not-yet-supported modules/features.
    """

    @classmethod
    def setUpClass(cls):
        tools_path = joinpath(dirname(dirname(__file__)), 'bin')
        if tools_path not in syspath:
            syspath.append(tools_path)

    def test_mcrt(self):
        """Test mcrt.py tool"""
        mod = import_module('mcrt')
        self.assertTrue(callable(getattr(mod, 'main', None)))
        self.assertIsNot(mod.__doc__, None)


def suite():
    suite_ = TestSuite()
    suite_.addTest(defaultTestLoader.loadTestsFromTestCase(ToolsTestCase))
    return suite_


def main():
    run_tests(modules[__name__])


if __name__ == '__main__':
    main()
