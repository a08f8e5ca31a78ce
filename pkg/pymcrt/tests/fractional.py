#!/usr/bin/env python3
# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

#pylint: disable-msg=missing-docstring
#pylint: disable-msg=invalid-name

from doctest import DocTestSuite
from fractions import Fraction
from sys import modules
from unittest import TestSuite, defaultTestLoader
from mpmath import MPContext
import pymcrt.fractional
from pymcrt.fractional import (FractionalError, WeylOperator,
                               weyl_fractional_derivative,
                               weyl_fractional_integral)
from pymcrt.tests.fixtures import McrtTestCase, run_tests


class WeylIntegralTestCase(McrtTestCase):
    """Weyl fractional integrals of decaying functions.
    """

    def setUp(self):
        super().setUp()
        self.ctx = MPContext()
        self.ctx.dps = 25

    def test_exponential(self):
        # (-d)^-β e^-u = e^-x for any order
        ctx = self.ctx
        for beta in (Fraction(1, 3), Fraction(1, 2), Fraction(3, 4), 1):
            for x in (0, Fraction(1, 2), 3):
                with self.subTest(beta=beta, x=x):
                    value = weyl_fractional_integral(
                        lambda u: ctx.exp(-u), beta, x, ctx)
                    self.assertLess(abs(value - ctx.exp(-ctx.convert(x))),
                                    1e-15)

    def test_plain_integral(self):
        ctx = self.ctx
        value = weyl_fractional_integral(lambda u: u * ctx.exp(-u), 1, 2, ctx)
        self.assertLess(abs(value - 3 * ctx.exp(-2)), 1e-15)

    def test_closed_form(self):
        # (-d)^-β (u e^-u) = (x + β) e^-x
        ctx = self.ctx
        beta = Fraction(2, 3)
        for x in (Fraction(1, 4), 1, 2):
            with self.subTest(x=x):
                value = weyl_fractional_integral(lambda u: u * ctx.exp(-u),
                                                 beta, x, ctx)
                expected = (ctx.convert(x) + ctx.mpf(2) / 3) * \
                    ctx.exp(-ctx.convert(x))
                self.assertLess(abs(value - expected), 1e-14)

    def test_upper_bound(self):
        ctx = self.ctx
        value = weyl_fractional_integral(lambda u: ctx.exp(-u),
                                         Fraction(1, 2), 1, ctx, upper=80)
        self.assertLess(abs(value - ctx.exp(-1)), 1e-15)
        self.assertEqual(weyl_fractional_integral(lambda u: ctx.exp(-u),
                                                  Fraction(1, 2), 5, ctx,
                                                  upper=5), 0)

    def test_invalid_order(self):
        ctx = self.ctx
        for beta in (0, -1, Fraction(-1, 2)):
            self.assertRaises(FractionalError, weyl_fractional_integral,
                              lambda u: ctx.exp(-u), beta, 1, ctx)

    def test_default_context(self):
        value = weyl_fractional_integral(lambda u: 2 ** -u, 1, 0)
        self.assertEqual(value.context.dps, 30)


class WeylOperatorTestCase(McrtTestCase):
    """Split of the Weyl operators into integer derivatives and fractional
       integrals.
    """

    def test_split(self):
        for order, n, beta in ((Fraction(1, 2), 1, Fraction(1, 2)),
                               (Fraction(5, 3), 2, Fraction(1, 3)),
                               (2, 2, 0), (0, 0, 0),
                               (Fraction(-1, 2), 0, Fraction(1, 2))):
            with self.subTest(order=order):
                op = WeylOperator(order)
                self.assertEqual(op.n, n)
                self.assertEqual(op.beta, beta)
                self.assertIsInstance(op.order, Fraction)

    def test_exponential(self):
        # (-d)^α e^-u = e^-x
        ctx = MPContext()
        ctx.dps = 25

        def derivative(n, u):
            return (-1)**n * ctx.exp(-u)

        for alpha in (Fraction(1, 2), 1, Fraction(4, 3), 0):
            with self.subTest(alpha=alpha):
                value = weyl_fractional_derivative(derivative, alpha, 1, ctx)
                self.assertLess(abs(value - ctx.exp(-1)), 1e-15)

    def test_growing_exponent(self):
        # (-d)^α e^-2u = 2^α e^-2x
        ctx = MPContext()
        ctx.dps = 25

        def derivative(n, u):
            return (-2)**n * ctx.exp(-2 * u)

        alpha = Fraction(3, 2)
        value = WeylOperator(alpha).apply(derivative, Fraction(1, 2), ctx)
        self.assertLess(abs(value - ctx.power(2, 1.5) * ctx.exp(-1)), 1e-14)

    def test_negative_order(self):
        self.assertRaises(FractionalError, weyl_fractional_derivative,
                          lambda n, u: u, Fraction(-1, 2), 1)


def suite():
    suite_ = TestSuite()
    for testcase in (WeylIntegralTestCase, WeylOperatorTestCase):
        suite_.addTest(defaultTestLoader.loadTestsFromTestCase(testcase))
    suite_.addTest(DocTestSuite(pymcrt.fractional))
    return suite_


def main():
    run_tests(modules[__name__])


if __name__ == '__main__':
    main()
