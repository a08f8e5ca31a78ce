# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Exact truncated formal power series over the rationals."""

from fractions import Fraction
from logging import getLogger
from typing import Iterable, List, Sequence, Tuple, Union

#pylint: disable-msg=invalid-name
#pylint: disable-msg=too-many-locals


Rational = Fraction
"""Exact arbitrary-precision rational scalar."""

RationalLike = Union[int, Fraction]


class SeriesError(ValueError):
    """Power series error"""


class PowerSeries:
    """Truncated formal power series in one variable (λ).

       A series is an immutable sequence of exact rational coefficients
       ``c_0 ... c_N``, where ``N`` is the truncation order: nothing is known
       about the coefficients beyond ``λ^N``, and no operation ever reports
       them. Mixing series of different orders truncates the result to the
       lowest order.

       >>> a = PowerSeries([1, 1], 2)
       >>> b = PowerSeries([1, -1], 2)
       >>> a * b
       PowerSeries([1, 0, -1], 2)
       >>> (a + b).coeff(0)
       Fraction(2, 1)

       :param coeffs: the first coefficients, missing ones are null
       :param order: the truncation order, defaults to ``len(coeffs)-1``
    """

    __slots__ = ('_coeffs',)

    def __init__(self, coeffs: Iterable[RationalLike] = (),
                 order: int = None):
        values = [Fraction(c) for c in coeffs]
        if order is None:
            order = max(len(values) - 1, 0)
        if order < 0:
            raise SeriesError('Invalid truncation order: %d' % order)
        if len(values) > order + 1:
            values = values[:order+1]
        else:
            values.extend([Fraction(0)] * (order + 1 - len(values)))
        self._coeffs = tuple(values)

    @classmethod
    def one(cls, order: int) -> 'PowerSeries':
        """Multiplicative identity at a given truncation order."""
        return cls([1], order)

    @classmethod
    def variable(cls, order: int) -> 'PowerSeries':
        """The series λ at a given truncation order."""
        return cls([0, 1], order)

    @property
    def order(self) -> int:
        """Truncation order."""
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        """All the retained coefficients, from λ^0 to λ^order."""
        return self._coeffs

    @property
    def valuation(self) -> int:
        """Index of the first non-null coefficient, ``order+1`` for the null
           series."""
        for pos, coeff in enumerate(self._coeffs):
            if coeff:
                return pos
        return len(self._coeffs)

    def coeff(self, n: int) -> Fraction:
        """Return the exact coefficient of λ^n.

           :param n: the coefficient index, within ``[0, order]``
           :raise SeriesError: if n lies beyond the truncation order
        """
        if not 0 <= n <= self.order:
            raise SeriesError('Coefficient index %d out of range [0, %d]' %
                              (n, self.order))
        return self._coeffs[n]

    def truncate(self, order: int) -> 'PowerSeries':
        """Return the same series truncated at a lower order."""
        if order > self.order:
            raise SeriesError('Cannot extend series from order %d to %d' %
                              (self.order, order))
        return PowerSeries(self._coeffs[:order+1], order)

    def derivative(self) -> 'PowerSeries':
        """Formal derivative d/dλ, which loses one order."""
        if not self.order:
            raise SeriesError('Cannot differentiate a series of order 0')
        return PowerSeries([n * c for n, c in enumerate(self._coeffs)][1:],
                           self.order - 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        last = len(self._coeffs)
        while last > 1 and not self._coeffs[last-1]:
            last -= 1
        values = ', '.join(_coeff_repr(c) for c in self._coeffs[:last])
        return 'PowerSeries([%s], %d)' % (values, self.order)

    def __str__(self) -> str:
        terms = []
        for pos, coeff in enumerate(self._coeffs):
            if not coeff:
                continue
            if pos == 0:
                terms.append(str(coeff))
            elif pos == 1:
                terms.append('%s*λ' % coeff)
            else:
                terms.append('%s*λ^%d' % (coeff, pos))
        return '%s + O(λ^%d)' % (' + '.join(terms) or '0', self.order + 1)

    def __neg__(self) -> 'PowerSeries':
        return PowerSeries([-c for c in self._coeffs], self.order)

    def __add__(self, other: Union['PowerSeries', RationalLike]) \
            -> 'PowerSeries':
        if not isinstance(other, PowerSeries):
            other = PowerSeries([other], self.order)
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other: Union['PowerSeries', RationalLike]) \
            -> 'PowerSeries':
        if not isinstance(other, PowerSeries):
            other = PowerSeries([other], self.order)
        return add(self, -other)

    def __rsub__(self, other: RationalLike) -> 'PowerSeries':
        return PowerSeries([other], self.order) - self

    def __mul__(self, other: Union['PowerSeries', RationalLike]) \
            -> 'PowerSeries':
        if not isinstance(other, PowerSeries):
            scale = Fraction(other)
            return PowerSeries([scale * c for c in self._coeffs], self.order)
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> 'PowerSeries':
        return power(self, exponent)


def _coeff_repr(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return 'Fraction(%d, %d)' % (value.numerator, value.denominator)


def add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Coefficientwise exact sum, truncated to the lowest order."""
    order = min(a.order, b.order)
    return PowerSeries([x + y for x, y in zip(a.coeffs[:order+1],
                                              b.coeffs[:order+1])], order)


def mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product, truncated to the lowest order.

       Leading null coefficients are skipped, which keeps powers of series
       without constant term cheap.
    """
    order = min(a.order, b.order)
    ac = a.coeffs
    bc = b.coeffs
    va = a.valuation
    vb = b.valuation
    out = [Fraction(0)] * (order + 1)
    for n in range(va + vb, order + 1):
        acc = Fraction(0)
        for i in range(va, n - vb + 1):
            ai = ac[i]
            if ai:
                bj = bc[n-i]
                if bj:
                    acc += ai * bj
        out[n] = acc
    return PowerSeries(out, order)


def power(a: PowerSeries, exponent: int) -> PowerSeries:
    """Exact integral power, by binary exponentiation.

       :param a: the series
       :param exponent: a non-negative integer
       :raise SeriesError: on negative exponent
    """
    if exponent < 0:
        raise SeriesError('Negative exponent: %d' % exponent)
    result = PowerSeries.one(a.order)
    base = a
    while exponent:
        if exponent & 1:
            result = mul(result, base)
        exponent >>= 1
        if exponent:
            base = mul(base, base)
    return result


def apply_polynomial(f_coeffs: Sequence[RationalLike],
                     a: PowerSeries) -> PowerSeries:
    """Evaluate the polynomial ``Σ f_i X^i`` at the series ``a``, exactly.

       Horner scheme, so ``a`` may carry a constant term: f is a polynomial.

       :param f_coeffs: polynomial coefficients, index i holds f_i
       :param a: the series to substitute
    """
    result = PowerSeries([], a.order)
    for coeff in reversed(list(f_coeffs)):
        result = mul(result, a) + Fraction(coeff)
    return result


def solve_fixed_point(f_coeffs: Sequence[RationalLike],
                      n_max: int) -> PowerSeries:
    """Solve ``T = λ + f(T)`` for the series T with ``T(0) = 0``.

       The coefficients are found order by order. The coefficient of λ^n in
       ``T^i`` (i ≥ 2) only involves the coefficients of T below n, so the
       powers of T are maintained incrementally, for a cost of
       ``O(deg f · n_max²)`` exact operations.

       >>> solve_fixed_point([0, 0, Fraction(1, 2)], 4)
       PowerSeries([0, 1, Fraction(1, 2), Fraction(1, 2), Fraction(5, 8)], 4)

       :param f_coeffs: coefficients of f, which must satisfy f(0) = 0
       :param n_max: the truncation order of the solution
       :raise SeriesError: if f(0) ≠ 0 or if g_1 = 1
    """
    log = getLogger('pymcrt.series')
    coeffs = [Fraction(c) for c in f_coeffs]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    if n_max < 0:
        raise SeriesError('Invalid truncation order: %d' % n_max)
    if coeffs and coeffs[0]:
        raise SeriesError('Fixed point requires f(0) = 0, not %s' %
                          coeffs[0])
    g1 = coeffs[1] if len(coeffs) > 1 else Fraction(0)
    if g1 == 1:
        raise SeriesError('Degenerate fixed point: linear weight g_1 = 1')
    scale = 1 / (1 - g1)
    degree = len(coeffs) - 1
    log.debug('Solving fixed point, degree %d, order %d', degree, n_max)
    # powers[i][n] = [λ^n] T^i, for 1 <= i <= degree
    tcoeffs: List[Fraction] = [Fraction(0)] * (n_max + 1)
    powers = [None, tcoeffs] + [[Fraction(0)] * (n_max + 1)
                                for _ in range(2, degree + 1)]
    for n in range(1, n_max + 1):
        for i in range(2, degree + 1):
            prev = powers[i-1]
            acc = Fraction(0)
            # T has no constant term, and T^(i-1) starts at λ^(i-1)
            for j in range(1, n - i + 2):
                tj = tcoeffs[j]
                if tj:
                    pj = prev[n-j]
                    if pj:
                        acc += tj * pj
            powers[i][n] = acc
        value = Fraction(1 if n == 1 else 0)
        for i in range(2, degree + 1):
            if coeffs[i]:
                value += coeffs[i] * powers[i][n]
        tcoeffs[n] = value * scale
    return PowerSeries(tcoeffs, n_max)
