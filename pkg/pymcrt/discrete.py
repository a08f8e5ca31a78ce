# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Exact finite-size observables of planted plane tree ensembles.

   Every observable is a coefficient of a power series built from the
   generating function ``T(λ) = Σ_N Z_N λ^N`` of the ensemble, which solves
   ``T = λ + f(T)``. The enumeration helpers recompute the same quantities
   tree by tree and are only meant to cross-check the series on small sizes.
"""

#pylint: disable-msg=invalid-name
#pylint: disable-msg=too-many-locals

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from logging import getLogger
from math import comb
from typing import Any, Dict, List, Mapping, Optional, Tuple
from mpmath import MPContext
from .misc import rational_binomial
from .models import WeightKind, WeightSet, validate_multicritical
from .series import PowerSeries, apply_polynomial, mul, power, \
    solve_fixed_point
from .trees import (DiscreteHistory, HistoryTree, PlaneTree, induced_history,
                    leaf_depths, plane_trees, vertex_degrees)


ORACLE_MAX_LEAVES = 12
"""Largest tree size the brute-force enumeration accepts."""

DEFAULT_PRECISION = 30
"""Default decimal digits of the rescaled outputs."""


class ObservableError(ValueError):
    """Undefined or out of range observable"""


@dataclass
class ProfileTable:
    """Average profile of the trees with N leaves.

       ``rho[L]`` is the probability that a uniformly chosen non-root leaf
       lies at distance L from the root, for L in 1..N.
    """
    n: int
    z_n: Fraction
    rho: Dict[int, Fraction]

    @property
    def total(self) -> Fraction:
        """Sum of the profile, which is exactly one."""
        return sum(self.rho.values(), Fraction(0))

    def rows(self, skip_null: bool = False) -> List[Tuple[int, Fraction]]:
        """Profile entries, by increasing distance."""
        return [(length, value) for length, value in sorted(self.rho.items())
                if value or not skip_null]


def _context(ctx: Optional[MPContext], precision: int) -> MPContext:
    if ctx is not None:
        return ctx
    ctx = MPContext()
    ctx.dps = precision
    return ctx


class TreeEnsemble:
    """Planted plane trees weighted by a weight set.

       The generating function is solved once, to the largest order ever
       requested, and shared by every observable.

       :param w: the weight set
    """

    def __init__(self, w: WeightSet):
        self.log = getLogger('pymcrt.discrete')
        self._w = w
        self._t: Optional[PowerSeries] = None

    @property
    def weights(self) -> WeightSet:
        """The weight set of the ensemble."""
        return self._w

    def generating_function(self, order: int) -> PowerSeries:
        """The series T(λ), truncated at the given order."""
        if self._t is None or self._t.order < order:
            self.log.info('Solving generating function to order %d', order)
            self._t = solve_fixed_point(self._w.f_coeffs, order)
        if self._t.order == order:
            return self._t
        return self._t.truncate(order)

    def vertex_series(self, i: int, order: int) -> PowerSeries:
        """The series ``f^(i)(T)/i!``, i.e. the weight of a vertex with i
           distinguished children."""
        coeffs = [Fraction(0)] * max(self._w.degree - i + 1, 0)
        for d, g in self._w.g.items():
            if d >= i:
                coeffs[d-i] = g * comb(d, i)
        return apply_polynomial(coeffs, self.generating_function(order))

    def partition_function(self, n: int) -> Fraction:
        """Exact weighted count Z_N of the trees with N leaves."""
        if n < 1:
            raise ObservableError(f'Invalid tree size: {n}')
        return self.generating_function(n).coeff(n)

    def _normalization(self, n: int) -> Fraction:
        z_n = self.partition_function(n)
        if not z_n:
            raise ObservableError(f'Null partition function Z_{n}')
        return z_n

    def _check_depth(self):
        if self._w.g.get(1):
            raise ObservableError('Unbounded leaf depth: unary vertices '
                                  'carry a non-null weight')

    def profile(self, n: int) -> ProfileTable:
        """Average profile ``ρ_N(L) = [λ^(N-1)] f'(T)^(L-1) / (N Z_N)``."""
        z_n = self._normalization(n)
        self._check_depth()
        self.log.info('Computing profile of size %d', n)
        u = self.vertex_series(1, n - 1)
        scale = 1 / (n * z_n)
        rho = {}
        upow = PowerSeries.one(n - 1)
        for length in range(1, n + 1):
            rho[length] = upow.coeff(n - 1) * scale
            if length < n:
                upow = mul(upow, u)
        return ProfileTable(n, z_n, rho)

    def _history_series(self, p: Mapping[int, int], order: int) \
            -> PowerSeries:
        series = PowerSeries.one(order)
        for i, count in sorted(p.items()):
            if count:
                series = mul(series, power(self.vertex_series(i, order),
                                           count))
        return series

    def history_weight(self, n: int, history: HistoryTree) -> Fraction:
        """Probability that m marked leaves, chosen uniformly and
           independently among the N leaves, span the given history."""
        if not isinstance(history, DiscreteHistory):
            history = DiscreteHistory(history.shape, history.lengths)
        p0 = history.p0
        if n < p0:
            raise ObservableError(f'History with {p0} leaves cannot fit in '
                                  f'trees with {n} leaves')
        z_n = self._normalization(n)
        self._check_depth()
        order = n - p0
        exponent = history.total_length - history.n
        series = mul(self._history_series(history.p, order),
                     power(self.vertex_series(1, order), exponent))
        return series.coeff(order) / (n**history.m * z_n)

    def history_profile(self, n: int, p: Mapping[int, int]) \
            -> Dict[int, Fraction]:
        """Weight of any non-degenerate history with branching counts p,
           as a function of its total length.

           :return: a map from the total length to the weight of each single
                    history of that total length
        """
        p = {int(i): int(c) for i, c in p.items() if c}
        if any(i < 2 for i in p):
            raise ObservableError(f'Invalid branching counts: {p}')
        m = 1 + sum((i - 1) * c for i, c in p.items())
        branches = 1 + sum(i * c for i, c in p.items())
        if n < m:
            raise ObservableError(f'History with {m} leaves cannot fit in '
                                  f'trees with {n} leaves')
        z_n = self._normalization(n)
        self._check_depth()
        order = n - m
        base = self._history_series(p, order)
        u = self.vertex_series(1, order)
        scale = 1 / (n**m * z_n)
        weights = {}
        for exponent in range(order + 1):
            if base.valuation > order:
                break
            weights[branches + exponent] = base.coeff(order) * scale
            base = mul(base, u)
        return weights


def partition_function(w: WeightSet, n: int) -> Fraction:
    """Exact partition function Z_N, the coefficient of λ^N in T(λ).

       >>> from pymcrt.models import minimal_weights
       >>> partition_function(minimal_weights(3), 3)
       Fraction(5, 3)
    """
    return TreeEnsemble(w).partition_function(n)


def average_profile(w: WeightSet, n: int) -> ProfileTable:
    """Exact average profile of the trees with N leaves."""
    return TreeEnsemble(w).profile(n)


def history_weight(w: WeightSet, n: int, history: HistoryTree) -> Fraction:
    """Exact weight ρ_N(ℋ) of a marked history in the trees with N leaves.
    """
    return TreeEnsemble(w).history_weight(n, history)


def scaling_exponent(history: HistoryTree, k: int) -> Fraction:
    """Exponent α of the decay ``N^-α`` of a rescaled history weight.

       It vanishes exactly on the non-degenerate histories whose branching
       points have at most k children.

       >>> from pymcrt.trees import HistoryTree
       >>> scaling_exponent(HistoryTree.from_text('((1,2)L=[1])'), 2)
       Fraction(1, 1)
    """
    alpha = Fraction(history.m - history.p0)
    for i, count in history.p.items():
        if i > k:
            alpha += Fraction((i - k) * count, k)
    return alpha


def _scale(ctx: MPContext, k: int, n: int):
    return ctx.power(ctx.mpf(k * n), ctx.mpf(k - 1) / k)


def _check_scaling(w: WeightSet) -> None:
    if w.kind == WeightKind.MINIMAL:
        validate_multicritical(w)
    else:
        getLogger('pymcrt.discrete').info(
            'Assuming %s is normalized at T_c = 1', w)


def rescaled_profile(w: WeightSet, n: int, ctx: Optional[MPContext] = None,
                     precision: int = DEFAULT_PRECISION) \
        -> List[Tuple[Any, Any]]:
    """Average profile in continuum coordinates, i.e. the points
       ``(L/(kN)^ν, (kN)^ν ρ_N(L))`` for L in 1..N, with ``ν = (k-1)/k``.
    """
    _check_scaling(w)
    ctx = _context(ctx, precision)
    table = average_profile(w, n)
    scale = _scale(ctx, w.k, n)
    return [(length / scale,
             scale * ctx.mpf(value.numerator) / value.denominator)
            for length, value in table.rows()]


def rescaled_history_profile(w: WeightSet, n: int, p: Mapping[int, int],
                             ctx: Optional[MPContext] = None,
                             precision: int = DEFAULT_PRECISION,
                             ensemble: Optional[TreeEnsemble] = None) \
        -> List[Tuple[Any, Any]]:
    """Weight of a non-degenerate history in continuum coordinates.

       The points are ``(S/(kN)^ν, (kN)^(nν) ρ_N(ℋ))``, where S is the total
       length of the history and n its count of branches.
    """
    _check_scaling(w)
    ctx = _context(ctx, precision)
    ensemble = ensemble or TreeEnsemble(w)
    weights = ensemble.history_profile(n, p)
    branches = 1 + sum(i * c for i, c in p.items())
    scale = _scale(ctx, w.k, n)
    factor = scale ** branches
    return [(total / scale,
             factor * ctx.mpf(value.numerator) / value.denominator)
            for total, value in sorted(weights.items())]


def enumerate_trees(w: WeightSet, n: int) -> List[Tuple[PlaneTree, Fraction]]:
    """All planted plane trees with N leaves and their exact weights.

       Only the out-degrees with a non-null weight are generated.

       :raise ObservableError: if N exceeds ``ORACLE_MAX_LEAVES`` or unary
                               vertices have a non-null weight
    """
    if not 1 <= n <= ORACLE_MAX_LEAVES:
        raise ObservableError(f'Tree size {n} out of the enumeration range '
                              f'[1, {ORACLE_MAX_LEAVES}]')
    if w.g.get(1):
        raise ObservableError('Cannot enumerate trees with unary vertices')
    trees = []
    for tree in plane_trees(n, [d for d in w.g if d >= 2]):
        weight = Fraction(1)
        for degree, count in vertex_degrees(tree).items():
            weight *= w.g[degree] ** count
        trees.append((tree, weight))
    return trees


def profile_oracle(w: WeightSet, n: int) -> ProfileTable:
    """Average profile tallied leaf by leaf over the enumerated trees."""
    trees = enumerate_trees(w, n)
    z_n = sum((weight for _, weight in trees), Fraction(0))
    if not z_n:
        raise ObservableError(f'Null partition function Z_{n}')
    tally: Dict[int, Fraction] = defaultdict(Fraction)
    for tree, weight in trees:
        for depth, count in Counter(leaf_depths(tree)).items():
            tally[depth] += weight * count
    rho = {length: tally.get(length, Fraction(0)) / (n * z_n)
           for length in range(1, n + 1)}
    return ProfileTable(n, z_n, rho)


def marked_history_oracle(w: WeightSet, n: int, m: int) \
        -> Dict[DiscreteHistory, Fraction]:
    """History weights tallied over every ordered choice of m marked leaves
       in every enumerated tree."""
    if m < 1:
        raise ObservableError(f'Invalid mark count: {m}')
    trees = enumerate_trees(w, n)
    z_n = sum((weight for _, weight in trees), Fraction(0))
    if not z_n:
        raise ObservableError(f'Null partition function Z_{n}')
    scale = 1 / (n**m * z_n)
    tally: Dict[DiscreteHistory, Fraction] = defaultdict(Fraction)
    for tree, weight in trees:
        for marked in product(range(n), repeat=m):
            tally[induced_history(tree, marked)] += weight * scale
    return dict(tally)


def partition_function_asymptotic(k: int, n: int,
                                  ctx: Optional[MPContext] = None,
                                  precision: int = DEFAULT_PRECISION) -> Any:
    """Large-N equivalent of Z_N in a normalized k-multicritical ensemble,
       ``k^N sin(π/k) Γ(1+1/k) / (π N^(1+1/k))``."""
    ctx = _context(ctx, precision)
    inv = ctx.mpf(1) / k
    return (ctx.power(k, n) * ctx.sinpi(inv) * ctx.gamma(1 + inv) /
            (ctx.pi * ctx.power(n, 1 + inv)))


def minimal_partition_closed_form(k: int, n: int) -> Fraction:
    """Exact Z_N of the minimal weights, ``-C(1/k, N) (-k)^N``, from
       ``T = 1 - (1 - kλ)^(1/k)``.

       >>> minimal_partition_closed_form(4, 4)
       Fraction(77, 8)
    """
    if n < 1:
        raise ObservableError(f'Invalid tree size: {n}')
    return -rational_binomial(Fraction(1, k), n) * (-k)**n
