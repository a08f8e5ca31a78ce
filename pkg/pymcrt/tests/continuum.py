#!/usr/bin/env python3
# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

#pylint: disable-msg=missing-docstring
#pylint: disable-msg=invalid-name

from doctest import DocTestSuite
from fractions import Fraction
from math import factorial, prod
from sys import modules
from unittest import TestSuite, defaultTestLoader
import pymcrt.continuum
from pymcrt.continuum import (ContinuousHistory, ContinuumError,
                              McrtContinuum, coefficient_ratio, continuum,
                              log_grid, rho_integral, tail_exponent_target,
                              universal_weights)
from pymcrt.hypergeom import PrecisionError
from pymcrt.trees import HistoryTree
from pymcrt.tests.fixtures import McrtTestCase, run_tests


GRID = [Fraction(pos, 10) for pos in range(1, 41)]


class WeightsTestCase(McrtTestCase):
    """Universal weights and continuum histories.
    """

    def test_weights(self):
        w = universal_weights(3)
        self.assertEqual(w.mu, {2: 1, 3: Fraction(-1, 3)})
        self.assertEqual(w.alpha, {2: Fraction(1, 2), 3: 0})
        self.assertEqual(w.nu, Fraction(2, 3))
        self.assertEqual(w.d, Fraction(3, 2))
        self.assertEqual(universal_weights(2).mu, {2: Fraction(1, 2)})
        self.assertRaises(ContinuumError, universal_weights, 1)

    def test_history(self):
        history = ContinuousHistory.from_history(
            HistoryTree.from_text('(((1)(2))L=[2,1,1/2])'))
        self.assertEqual(history.p, {2: 1})
        self.assertEqual(history.m, 2)
        self.assertEqual(history.n, 3)
        self.assertEqual(history.total_length, Fraction(7, 2))
        self.assertEqual(history.excess(3), 1)
        self.assertEqual(history.excess(2), 0)

    def test_invalid_history(self):
        degenerate = HistoryTree.from_text('((1,2)L=[3])')
        self.assertRaises(ContinuumError, ContinuousHistory.from_history,
                          degenerate)
        self.assertRaises(ContinuumError, ContinuousHistory, {2: 1}, (1, 1))
        self.assertRaises(ContinuumError, ContinuousHistory, {2: 1},
                          (1, 0, 1))
        self.assertRaises(ContinuumError, ContinuousHistory, {1: 1}, (1, 1))

    def test_from_total(self):
        history = ContinuousHistory.from_total({3: 1, 2: 0}, 2)
        self.assertEqual(history.p, {3: 1})
        self.assertEqual(history.lengths, (Fraction(1, 2),) * 4)
        self.assertEqual(history.m, 3)


class ProfileTestCase(McrtTestCase):
    """Average profile of the continuum tree, from both representations.
    """

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.evaluators = {k: McrtContinuum(k, 20) for k in (2, 3, 4)}

    def test_closed_form(self):
        ev = self.evaluators[2]
        ctx = ev.ctx
        for x in GRID:
            with self.subTest(x=x):
                xv = ev.convert(x)
                expected = xv * ctx.exp(-xv * xv / 2)
                self.assertLess(abs(ev.rho_hypergeometric(x) - expected),
                                1e-10)
                self.assertLess(abs(ev.rho_integral(x) - expected), 1e-10)

    def test_explicit_k3(self):
        ev = self.evaluators[3]
        ctx = ev.ctx
        third = ctx.mpf(1) / 3
        for x in (Fraction(1, 4), 1, Fraction(3, 2)):
            with self.subTest(x=x):
                xv = ev.convert(x)
                z = -4 * xv**3 / 3
                expected = (ctx.cbrt(3) * xv * ctx.gamma(5 * third) /
                            ctx.gamma(4 * third) *
                            ctx.hyp1f1(5 * third / 2, 2 * third, z) +
                            2 * xv**2 * ctx.hyp1f1(7 * third / 2, 4 * third,
                                                   z))
                self.assertLess(abs(ev.rho_hypergeometric(x) / expected - 1),
                                1e-15)

    def test_explicit_k4(self):
        ev = self.evaluators[4]
        ctx = ev.ctx

        def q(num, den):
            return ctx.mpf(num) / den

        for x in (Fraction(1, 4), Fraction(3, 4), Fraction(5, 4)):
            with self.subTest(x=x):
                xv = ev.convert(x)
                z = -27 * xv**4 / 4
                expected = (
                    2 * xv * ctx.gamma(q(7, 4)) / ctx.gamma(q(5, 4)) *
                    ctx.hyp2f2(q(7, 12), q(11, 12), q(1, 2), q(3, 4), z) +
                    4 * xv**2 * ctx.gamma(q(5, 2)) / ctx.gamma(q(5, 4)) *
                    ctx.hyp2f2(q(5, 6), q(7, 6), q(3, 4), q(5, 4), z) +
                    q(15, 2) * xv**3 *
                    ctx.hyp2f2(q(13, 12), q(17, 12), q(5, 4), q(3, 2), z))
                self.assertLess(abs(ev.rho_hypergeometric(x) / expected - 1),
                                1e-15)

    def test_origin(self):
        for k, ev in self.evaluators.items():
            with self.subTest(k=k):
                self.assertEqual(ev.rho_hypergeometric(0), 0)
                self.assertLess(abs(ev.rho_integral(0)), 1e-13)
                self.assertRaises(ContinuumError, ev.rho_hypergeometric, -1)

    def test_two_formulas(self):
        for k in (3, 4):
            ev = self.evaluators[k]
            grid = GRID if self.slow else GRID[:20]
            for x in grid:
                with self.subTest(k=k, x=x):
                    self.assertLess(abs(ev.rho_integral(x) -
                                        ev.rho_hypergeometric(x)), 1e-10)

    def test_series_coefficients(self):
        for k, ev in self.evaluators.items():
            coeffs = ev.series_coefficients(4 * k + 1)
            with self.subTest(k=k):
                self.assertEqual(coeffs[0], 0)
                product = prod(1 + k * j for j in range(k - 1))
                self.assertLess(abs(factorial(k - 1) * coeffs[k - 1] -
                                    product), 1e-15 * product)
                for n in range(1, 3 * k + 1):
                    if not coeffs[n]:
                        continue
                    ratio = coeffs[n + k] / coeffs[n]
                    exact = coefficient_ratio(k, n)
                    self.assertLess(abs(ratio - ev.convert(exact)),
                                    1e-15 * abs(exact))

    def test_derivatives(self):
        ev = self.evaluators[2]
        ctx = ev.ctx
        self.assertLess(abs(ev.rho_derivative(1, 1)), 1e-18)
        self.assertLess(abs(ev.rho_derivative(2, 1) + 3 * ctx.exp(-2)),
                        1e-18)
        # ρ'' = (x^3 - 3x) e^(-x²/2)
        self.assertLess(abs(ev.rho_derivative(1, 2) + 2 * ctx.exp(-0.5)),
                        1e-18)
        self.assertEqual(ev.rho_derivative(1, 0), ev.rho_hypergeometric(1))
        self.assertRaises(ContinuumError, ev.rho_derivative, 1, -1)
        ev = self.evaluators[3]
        self.assertLess(abs(ev.rho_derivative(0, 2) - 4), 1e-18)

    def test_prefactors(self):
        for k, ev in self.evaluators.items():
            for p in range(1, k):
                with self.subTest(k=k, p=p):
                    self.assertLess(abs(ev.prefactor(p) /
                                        ev.prefactor_closed_form(p) - 1),
                                    1e-16)
        self.assertRaises(ContinuumError, self.evaluators[3].parameters, 3)

    def test_invalid_evaluator(self):
        self.assertRaises(ContinuumError, McrtContinuum, 1)
        self.assertRaises(ContinuumError, McrtContinuum, 3, 2)

    def test_shared_evaluator(self):
        self.assertIs(continuum(2, 20), continuum(2, 20))
        ctx = continuum(2, 20).ctx
        self.assertLess(abs(rho_integral(2, 1, 20) - ctx.exp(-0.5)), 1e-13)


class SigmaTestCase(McrtTestCase):
    """Basic distributions σ_j.
    """

    def test_last(self):
        for k in (2, 3, 4):
            ev = McrtContinuum(k, 20)
            for x in (Fraction(1, 2), 1):
                with self.subTest(k=k, x=x):
                    self.assertLess(abs(ev.sigma_j(k, x) -
                                        ev.rho_hypergeometric(x)), 1e-12)

    def test_signed_measure(self):
        ev = McrtContinuum(3, 20)
        self.assertLess(ev.sigma_j(2, Fraction(1, 10)), 0)
        self.assertGreater(ev.sigma_j(2, 2), 0)

    def test_invalid_index(self):
        ev = McrtContinuum(3, 20)
        self.assertRaises(ContinuumError, ev.sigma_j, 1, 1)
        self.assertRaises(ContinuumError, ev.sigma_j, 4, 1)

    def test_normalization(self):
        if not self.slow:
            self.skipTest('Slow test')
        for k, j in ((3, 2), (4, 2), (4, 3)):
            ev = McrtContinuum(k, 20)
            ctx = ev.ctx
            with self.subTest(k=k, j=j):
                total = ctx.quad(lambda x, j=j, ev=ev: ev.sigma_j(j, x),
                                 ctx.linspace(0, ev.x_max(), 5))
                self.assertLess(abs(total - 1), 1e-8)


class HistoryDensityTestCase(McrtTestCase):
    """History densities from the integral, σ_j and fractional routes.
    """

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.evaluators = {k: McrtContinuum(k, 20) for k in (2, 3, 4)}

    def test_top_degree(self):
        # (k+1)-valent branching points only scale ρ
        for k, p, scale in ((2, {2: 1}, Fraction(1, 2)),
                            (3, {3: 2}, Fraction(1, 9)),
                            (4, {4: 1}, Fraction(1, 4))):
            ev = self.evaluators[k]
            history = ContinuousHistory.from_total(p, 1)
            with self.subTest(k=k):
                self.assertLess(abs(ev.history_density(history) -
                                    scale * ev.rho_hypergeometric(1)),
                                1e-12)

    def test_routes(self):
        cases = [(3, {2: 1}), (3, {2: 2}), (4, {2: 1}), (4, {3: 1}),
                 (4, {2: 1, 3: 1})]
        if self.slow:
            cases.append((3, {2: 3}))
        for k, p in cases:
            ev = self.evaluators[k]
            for total in (Fraction(1, 2), Fraction(3, 2)):
                history = ContinuousHistory.from_total(p, total)
                with self.subTest(k=k, p=p, x=total):
                    reference = ev.history_density(history)
                    self.assertLess(abs(ev.history_density_via_sigma(history)
                                        - reference), 1e-8)
                    self.assertLess(
                        abs(ev.history_density_fractional(history) -
                            reference), 1e-8)

    def test_lengths(self):
        # the density only depends on the total length
        ev = self.evaluators[3]
        history = ContinuousHistory.from_history(
            HistoryTree.from_text('(((1)(2))L=[1/2,1/4,1/4])'))
        self.assertEqual(ev.history_density(history),
                         ev.branching_density({2: 1}, 1))

    def test_invalid(self):
        ev = self.evaluators[3]
        self.assertRaises(ContinuumError, ev.branching_density, {4: 1}, 1)
        self.assertRaises(ContinuumError, ev.branching_weight, {2: -1})
        self.assertEqual(ev.branching_weight({2: 1, 3: 2}), Fraction(1, 9))

    def test_shape_weight(self):
        if not self.slow:
            self.skipTest('Slow test')
        value = self.evaluators[3].shape_weight_integral({2: 1})
        self.assertLess(abs(value - 0.5), 1e-6)


class IntegratedTestCase(McrtTestCase):
    """Moments, fixed-size profiles and the exponential tail.
    """

    def test_moments(self):
        ev = McrtContinuum(2, 20)
        ctx = ev.ctx
        self.assertEqual(ev.moment(0), 1)
        self.assertLess(abs(ev.moment(1) - ctx.sqrt(ctx.pi / 2)), 1e-18)
        self.assertLess(abs(ev.moment(2) - 2), 1e-18)
        self.assertRaises(ContinuumError, ev.moment, -1)
        for k in (3, 4):
            self.assertLess(abs(McrtContinuum(k, 20).moment(0) - 1), 1e-18)

    def test_moment_quadrature(self):
        for k in (2, 3, 4):
            ev = McrtContinuum(k, 20)
            for b in range(7):
                with self.subTest(k=k, b=b):
                    exact = ev.moment(b)
                    self.assertLess(abs(ev.moment_quadrature(b) / exact - 1),
                                    1e-6)

    def test_fixed_size(self):
        ev = McrtContinuum(2, 20)
        ctx = ev.ctx
        self.assertEqual(ev.rho_fixed_size(1, Fraction(3, 2)),
                         ev.rho_hypergeometric(Fraction(3, 2)))
        self.assertLess(abs(ev.rho_fixed_size(4, 2) - 2 * ctx.exp(-0.5)),
                        1e-18)
        total = ctx.quad(lambda x: ev.rho_fixed_size(4, x),
                         ctx.linspace(0, 2 * ev.x_max(), 5))
        self.assertLess(abs(total - 4), 1e-12)
        self.assertRaises(ContinuumError, ev.rho_fixed_size, 0, 1)

    def test_tail(self):
        for k in (2, 3, 4):
            fit = McrtContinuum(k, 40).tail_exponent()
            with self.subTest(k=k):
                self.assertEqual(fit.target, tail_exponent_target(k))
                self.assertLess(abs(fit.coefficient / float(fit.target) - 1),
                                0.02)
                self.assertGreaterEqual(fit.points, 4)
        fit = McrtContinuum(2, 40).tail_exponent()
        self.assertAlmostEqual(fit.power, 1.0, places=6)
        self.assertRaises(PrecisionError, McrtContinuum(3, 20).tail_exponent)

    def test_log_grid(self):
        grid = log_grid(0.5, 50, 3)
        self.assertEqual(len(grid), 3)
        self.assertAlmostEqual(grid[0], 0.5)
        self.assertAlmostEqual(grid[1], 5)
        self.assertAlmostEqual(grid[2], 50)
        self.assertRaises(ContinuumError, log_grid, 0, 1, 3)
        self.assertRaises(ContinuumError, log_grid, 1, 2, 1)


def suite():
    suite_ = TestSuite()
    for testcase in (WeightsTestCase, ProfileTestCase, SigmaTestCase,
                     HistoryDensityTestCase, IntegratedTestCase):
        suite_.addTest(defaultTestLoader.loadTestsFromTestCase(testcase))
    suite_.addTest(DocTestSuite(pymcrt.continuum))
    return suite_


def main():
    run_tests(modules[__name__])


if __name__ == '__main__':
    main()
