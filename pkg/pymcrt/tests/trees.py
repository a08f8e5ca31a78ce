#!/usr/bin/env python3
# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

#pylint: disable-msg=missing-docstring
#pylint: disable-msg=invalid-name

from doctest import DocTestSuite
from fractions import Fraction
from math import comb
from sys import modules
from unittest import TestSuite, defaultTestLoader
import pymcrt.trees
from pymcrt.trees import (DiscreteHistory, HistoryError, HistoryNode,
                          HistoryTree, enumerate_histories, format_tree,
                          induced_history, leaf_count, leaf_depths,
                          parse_history, parse_tree, plane_trees,
                          vertex_degrees)
from pymcrt.tests.fixtures import McrtTestCase, run_tests


class PlaneTreeTestCase(McrtTestCase):
    """Planted plane tree generation.
    """

    def test_binary_counts(self):
        for leaves in range(1, 10):
            catalan = comb(2*leaves - 2, leaves - 1) // leaves
            self.assertEqual(len(plane_trees(leaves, [2])), catalan)

    def test_schroeder_counts(self):
        # plane trees with any out-degree >= 2 (super-Catalan numbers)
        expected = [1, 1, 3, 11, 45, 197, 903]
        for leaves, count in enumerate(expected, start=1):
            trees = plane_trees(leaves, range(2, leaves + 1))
            self.assertEqual(len(trees), count)
            self.assertEqual(len(set(trees)), count)

    def test_ordered(self):
        left, right = ((), ((), ())), (((), ()), ())
        self.assertIn(left, plane_trees(3, [2]))
        self.assertIn(right, plane_trees(3, [2]))
        self.assertNotEqual(left, right)

    def test_tree_helpers(self):
        tree = parse_tree('3(*,2(*,*),*)')
        self.assertEqual(tree, ((), ((), ()), ()))
        self.assertEqual(leaf_count(tree), 4)
        self.assertEqual(leaf_depths(tree), [2, 3, 3, 2])
        self.assertEqual(dict(vertex_degrees(tree)), {3: 1, 2: 1})
        self.assertEqual(format_tree(tree), '3(*,2(*,*),*)')
        self.assertEqual(parse_tree('*'), ())
        for text in ('2(*)', '2(*,*', '(*,*)', '2(*,*)x', '1(*)'):
            with self.subTest(text=text):
                self.assertRaises(HistoryError, parse_tree, text)

    def test_invalid(self):
        self.assertRaises(HistoryError, plane_trees, 0, [2])
        self.assertRaises(HistoryError, plane_trees, 3, [1, 2])


class HistoryTestCase(McrtTestCase):
    """History trees and their text form.
    """

    def test_parse(self):
        history = DiscreteHistory.from_text('(((1)(2))L=[2,1,1])')
        self.assertEqual(history.m, 2)
        self.assertEqual(history.p, {2: 1})
        self.assertEqual(history.p0, 2)
        self.assertEqual(history.n, 3)
        self.assertEqual(history.lengths, (2, 1, 1))
        self.assertEqual(history.total_length, 4)
        self.assertFalse(history.degenerate)
        self.assertEqual(str(history), '(((1)(2))L=[2,1,1])')

    def test_degenerate(self):
        history = DiscreteHistory.from_text('((2,1)L=[3])')
        self.assertEqual(str(history), '((1,2)L=[3])')
        self.assertEqual(history.m, 2)
        self.assertEqual(history.p0, 1)
        self.assertTrue(history.degenerate)

    def test_continuous(self):
        history = HistoryTree.from_text('((1)L=[0.5])')
        self.assertEqual(history.lengths, (Fraction(1, 2),))
        self.assertEqual(str(history), '((1)L=[1/2])')
        self.assertRaises(HistoryError, DiscreteHistory.from_text,
                          '((1)L=[0.5])')
        history = HistoryTree.from_text('(((1)((2)(3)(4)))L=[1,1/3,2,2,1,5])')
        self.assertEqual(history.p, {2: 1, 3: 1})
        self.assertEqual(history.m, 4)
        self.assertEqual(history.n, 6)

    def test_canonical_order(self):
        shape, lengths = parse_history('((((1)(2))(3))L=[1,2,3,4,5])')
        self.assertEqual(lengths, [1, 2, 3, 4, 5])
        nodes = list(shape.walk())
        self.assertEqual(len(nodes), 5)
        self.assertEqual(nodes[2], HistoryNode((1,)))
        self.assertEqual(nodes[4], HistoryNode((3,)))

    def test_invalid(self):
        for text in ('(1)L=[1]', '((1)L=[1,2])', '(((1)(3))L=[1,1,1])',
                     '(((1))L=[1,1])', '((1)(2)L=[1,1])', '((1)L=[0])',
                     '((1)L=[1]', '((x)L=[1])', '(((1)(1))L=[1,1,1])',
                     '((1)L=[a])'):
            with self.subTest(text=text):
                self.assertRaises(HistoryError, DiscreteHistory.from_text,
                                  text)

    def test_induced(self):
        tree = ((), ((), ()), ())
        history = induced_history(tree, [1, 2])
        self.assertEqual(str(history), '(((1)(2))L=[2,1,1])')
        history = induced_history(tree, [3, 0])
        self.assertEqual(str(history), '(((2)(1))L=[1,1,1])')
        history = induced_history(tree, [1, 1, 3])
        self.assertEqual(str(history), '(((1,2)(3))L=[1,2,1])')
        self.assertEqual(str(induced_history((), [0])), '((1)L=[1])')
        self.assertRaises(HistoryError, induced_history, tree, [4])
        self.assertRaises(HistoryError, induced_history, tree, [])


class HistoryEnumerationTestCase(McrtTestCase):
    """Exhaustive history generation.
    """

    def test_single_mark(self):
        histories = list(enumerate_histories(1, 5, 3))
        self.assertEqual([str(h) for h in histories],
                         [f'((1)L=[{length}])' for length in range(1, 6)])

    def test_two_marks(self):
        histories = list(enumerate_histories(2, 4, 2))
        # 4 degenerate ones, then 2 labelings of the cherry with lengths
        # summing to 3 or 4
        self.assertEqual(len(histories), 4 + 2 * (1 + 3))
        self.assertEqual(len(set(histories)), len(histories))
        strict = list(enumerate_histories(2, 4, 2, degenerate=False))
        self.assertEqual(len(strict), 8)
        self.assertTrue(all(not h.degenerate for h in strict))

    def test_labelings(self):
        # 2 plane shapes, 3! labelings, one length assignment each
        histories = list(enumerate_histories(3, 5, 2, degenerate=False))
        self.assertEqual(len(histories), 12)
        histories = list(enumerate_histories(3, 4, 3, degenerate=False))
        self.assertEqual(len(histories), 6)
        self.assertTrue(all(h.p == {3: 1} for h in histories))


def suite():
    suite_ = TestSuite()
    for testcase in (PlaneTreeTestCase, HistoryTestCase,
                     HistoryEnumerationTestCase):
        suite_.addTest(defaultTestLoader.loadTestsFromTestCase(testcase))
    suite_.addTest(DocTestSuite(pymcrt.trees))
    return suite_


def main():
    run_tests(modules[__name__])


if __name__ == '__main__':
    main()
