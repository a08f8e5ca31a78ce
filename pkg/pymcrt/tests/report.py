#!/usr/bin/env python3
# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

#pylint: disable-msg=missing-docstring

from fractions import Fraction
from io import StringIO
from json import loads
from sys import modules
from unittest import TestSuite, defaultTestLoader
from mpmath import MPContext
from pymcrt.report import Report, ReportFormat, cell
from pymcrt.tests.fixtures import McrtTestCase, run_tests


class CellTestCase(McrtTestCase):

    def test_exact(self):
        self.assertEqual(cell(3), '3')
        self.assertEqual(cell(Fraction(-4, 6)), '-2/3')
        self.assertEqual(cell('4(*,*,*,*)'), '4(*,*,*,*)')

    def test_decimal(self):
        self.assertEqual(cell(0.5), '5.00000000000000e-1')
        self.assertEqual(cell(0.0), '0')
        cells = []
        for dps in (20, 40):
            ctx = MPContext()
            ctx.dps = dps
            cells.append(cell(ctx.mpf(1) / 3))
        narrow, wide = cells
        self.assertEqual(wide, narrow)
        self.assertEqual(wide, '3.33333333333333e-1')


class ReportTestCase(McrtTestCase):

    def _report(self):
        report = Report(['x', 'y'])
        report.add_row(Fraction(1, 2), 0.25)
        report.add_row(1, 'a,b')
        report.footer['total'] = Fraction(3, 2)
        return report

    def test_row_width(self):
        report = Report(['x', 'y'])
        self.assertRaises(ValueError, report.add_row, 1)

    def test_csv(self):
        out = StringIO()
        self._report().write(out)
        self.assertEqual(out.getvalue(),
                         'x,y\n1/2,2.50000000000000e-1\n1,"a,b"\n'
                         '#total,3/2\n')

    def test_json(self):
        out = StringIO()
        self._report().write(out, ReportFormat.JSON)
        text = out.getvalue()
        self.assertTrue(text.endswith('}\n'))
        doc = loads(text)
        self.assertEqual(list(doc), ['columns', 'footer', 'rows'])
        self.assertEqual(doc['rows'][0], {'x': '1/2',
                                          'y': '2.50000000000000e-1'})
        self.assertEqual(doc['footer'], {'total': '3/2'})


def suite():
    suite_ = TestSuite()
    for testcase in (CellTestCase, ReportTestCase):
        suite_.addTest(defaultTestLoader.loadTestsFromTestCase(testcase))
    return suite_


def main():
    run_tests(modules[__name__])


if __name__ == '__main__':
    main()
