# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Census of the history shapes of the MCRT_k.

   A shape is a planted plane tree whose inner vertices have between 2 and k
   children, with m labeled leaves. Only the unlabeled plane trees are
   enumerated: each of them stands for its m! labelings, which all share the
   same weight ``w(S) = Π_i μ_i^(p_i) / z_m``.
"""

#pylint: disable-msg=invalid-name

from dataclasses import dataclass
from fractions import Fraction
from logging import getLogger
from math import factorial
from typing import Dict, List, NamedTuple, Tuple
from .continuum import universal_weights
from .misc import rational_binomial
from .series import SeriesError, solve_fixed_point
from .trees import (HistoryError, PlaneTree, format_tree, leaf_count,
                    parse_tree, plane_trees, vertex_degrees)


MAX_CENSUS_LEAVES = 8
"""Largest leaf count of the exhaustive sum rule checks."""


@dataclass(frozen=True)
class Shape:
    """Unlabeled plane shape of a history.

       :param tree: the planted plane tree
    """
    tree: PlaneTree

    @classmethod
    def from_text(cls, text: str) -> 'Shape':
        """Parse the compact form, e.g. ``2(*,3(*,*,*))``."""
        return cls(parse_tree(text))

    @property
    def m(self) -> int:
        """Count of leaves."""
        return leaf_count(self.tree)

    @property
    def p(self) -> Dict[int, int]:
        """Count of branching points per out-degree."""
        return dict(sorted(vertex_degrees(self.tree).items()))

    @property
    def labelings(self) -> int:
        """Count of labeled shapes sharing this plane tree."""
        return factorial(self.m)

    def counts(self, k: int) -> Tuple[int, ...]:
        """Branching counts ``p_2 .. p_k``.

           :raise HistoryError: if some out-degree exceeds k
        """
        p = self.p
        if any(i > k for i in p):
            raise HistoryError(f'Shape {self} has out-degrees beyond {k}')
        return tuple(p.get(i, 0) for i in range(2, k + 1))

    def __str__(self) -> str:
        return format_tree(self.tree)


class CensusRow(NamedTuple):
    """Line of a shape census."""
    shape: Shape
    counts: Tuple[int, ...]
    weight: Fraction


def _check(k: int, m: int) -> None:
    if k < 2:
        raise HistoryError(f'Invalid multicriticality order: {k}')
    if m < 1:
        raise HistoryError(f'Invalid leaf count: {m}')


def enumerate_shapes(k: int, m: int) -> List[Shape]:
    """All the unlabeled plane shapes with m leaves.

       >>> len(enumerate_shapes(4, 4))
       11
    """
    _check(k, m)
    return [Shape(tree) for tree in plane_trees(m, range(2, k + 1))]


def labeled_shape_count(k: int, m: int) -> int:
    """Count of shapes with m labeled leaves."""
    return factorial(m) * len(enumerate_shapes(k, m))


def z_normalizer(k: int, m: int) -> Fraction:
    """Normalizer ``z_m = (-1)^(m-1) k^m Γ(1/k+1) / Γ(1/k+1-m)``, from the
       telescoping product of the Γ ratio.

       >>> z_normalizer(4, 4)
       Fraction(231, 1)
    """
    _check(k, m)
    value = Fraction((-1)**(m - 1) * k**m)
    for j in range(m):
        value *= Fraction(1, k) - j
    return value


def shape_weight(k: int, shape: Shape) -> Fraction:
    """Weight of each labeling of a shape.

       >>> shape_weight(4, Shape.from_text('4(*,*,*,*)'))
       Fraction(1, 924)
    """
    mu = universal_weights(k).mu
    value = Fraction(1)
    for i, count in zip(range(2, k + 1), shape.counts(k)):
        value *= mu[i] ** count
    return value / z_normalizer(k, shape.m)


def census(k: int, m: int) -> List[CensusRow]:
    """Weights of all the shapes with m leaves, in enumeration order."""
    log = getLogger('pymcrt.shapes')
    rows = [CensusRow(shape, shape.counts(k), shape_weight(k, shape))
            for shape in enumerate_shapes(k, m)]
    log.info('Census k=%d m=%d: %d shapes', k, m, len(rows))
    return rows


def check_sum_rule(k: int, m: int) -> Fraction:
    """Sum of the weights of all the labeled shapes with m leaves, which
       is exactly 1.

       >>> check_sum_rule(4, 4)
       Fraction(1, 1)
    """
    if m > MAX_CENSUS_LEAVES:
        raise HistoryError(f'Census limited to {MAX_CENSUS_LEAVES} leaves')
    return sum((factorial(m) * row.weight for row in census(k, m)),
               Fraction(0))


def shape_gf_coefficients(k: int, m_max: int) -> List[Fraction]:
    """Coefficients of ``μ_0^m`` in the shape generating function Y, for
       ``m ≤ m_max``, with Y solving ``Y = μ_0 + Σ_i μ_i Y^i``.

       Y is found both as a fixed point series and from its closed form
       ``Y = 1 - (1 - k μ_0)^(1/k)``.

       >>> shape_gf_coefficients(2, 3)
       [Fraction(0, 1), Fraction(1, 1), Fraction(1, 2), Fraction(1, 2)]

       :raise SeriesError: if both routes disagree
    """
    if m_max < 1:
        raise SeriesError(f'Invalid truncation order: {m_max}')
    mu = universal_weights(k).mu
    f_coeffs = [Fraction(0)] * (k + 1)
    for i, value in mu.items():
        f_coeffs[i] = value
    fixed = list(solve_fixed_point(f_coeffs, m_max).coeffs)
    binomial = [Fraction(0)]
    binomial.extend(-rational_binomial(Fraction(1, k), m) * (-k)**m
                    for m in range(1, m_max + 1))
    if fixed != binomial:
        mismatch = next(m for m, (a, b) in enumerate(zip(fixed, binomial))
                        if a != b)
        raise SeriesError(f'Shape series disagree at order {mismatch}: '
                          f'{fixed[mismatch]} != {binomial[mismatch]}')
    return fixed
