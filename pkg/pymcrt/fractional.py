# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Weyl fractional operators on functions decaying at +∞.

   ``(-d)^-β f(x) = 1/Γ(β) ∫_x^∞ (u-x)^(β-1) f(u) du``

   The weak endpoint singularity is removed with ``u = x + t^(1/β)``, which
   turns the integral into ``1/Γ(β+1) ∫_0^∞ f(x + t^(1/β)) dt``. Positive
   orders α are split as ``(-d)^α = (-d)^n (-d)^-(n-α)`` and the integer
   derivatives are moved inside the integral, which is valid for the
   exponentially decaying functions handled here.
"""

#pylint: disable-msg=invalid-name
#pylint: disable-msg=too-many-arguments

from dataclasses import dataclass
from fractions import Fraction
from logging import getLogger
from math import floor
from typing import Any, Callable, Optional, Union
from mpmath import MPContext
from .hypergeom import to_mpf


RealFunction = Callable[[Any], Any]
"""Real function of a real variable, evaluated in a mpmath context."""

DerivativeFunction = Callable[[int, Any], Any]
"""``(n, u) -> f^(n)(u)``, with ``n = 0`` the function itself."""

DEFAULT_TOLERANCE_DIGITS = 12
"""Default absolute accuracy, relative to max(1, |result|), in digits."""


class FractionalError(ArithmeticError):
    """Invalid order or failed fractional operator evaluation"""


@dataclass(frozen=True)
class WeylOperator:
    """The operator ``(-d)^order``.

       A negative order is a fractional integral, a positive one a fractional
       derivative and a null one the identity.
    """
    order: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'order', Fraction(self.order))

    @property
    def n(self) -> int:
        """Count of integer derivatives."""
        if self.order <= 0:
            return 0
        if self.order.denominator == 1:
            return int(self.order)
        return floor(self.order) + 1

    @property
    def beta(self) -> Fraction:
        """Order of the fractional integral applied after the derivatives,
           zero for integer orders."""
        return self.n - self.order

    def apply(self, derivative: DerivativeFunction, x: Any,
              ctx: MPContext, upper: Any = None,
              tolerance: Any = None) -> Any:
        """Evaluate ``(-d)^order f`` at x.

           :param derivative: the function and its integer derivatives
           :param x: evaluation point
           :param ctx: mpmath context
           :param upper: point beyond which f is negligible, +∞ if None
           :param tolerance: accepted absolute quadrature error
        """
        sign = -1 if self.n % 2 else 1
        if not self.beta:
            return sign * derivative(self.n, ctx.convert(x))
        value = weyl_fractional_integral(lambda u: derivative(self.n, u),
                                         self.beta, x, ctx, upper, tolerance)
        return sign * value


def weyl_fractional_integral(f: RealFunction, beta: Union[Fraction, int],
                             x: Any, ctx: Optional[MPContext] = None,
                             upper: Any = None, tolerance: Any = None) -> Any:
    """Weyl fractional integral ``(-d)^-β f(x)``.

       >>> ctx = MPContext()
       >>> ctx.dps = 20
       >>> value = weyl_fractional_integral(lambda u: ctx.exp(-u), 1, 1, ctx)
       >>> bool(abs(value - ctx.exp(-1)) < 1e-15)
       True
       >>> bool(abs(weyl_fractional_integral(lambda u: ctx.exp(-u),
       ...      Fraction(1, 2), 0, ctx) - 1) < 1e-15)
       True

       :param f: the integrand, decaying at +∞
       :param beta: positive order
       :param x: lower bound of the integral
       :param ctx: mpmath context, a new one at 30 digits if None
       :param upper: point beyond which f is negligible, +∞ if None
       :param tolerance: accepted absolute error, scaled by max(1, |result|)
       :return: the integral
       :raise FractionalError: on invalid order or quadrature failure
    """
    log = getLogger('pymcrt.fractional')
    beta = Fraction(beta)
    if beta <= 0:
        raise FractionalError(f'Invalid fractional integral order: {beta}')
    if ctx is None:
        ctx = MPContext()
        ctx.dps = 30
    if tolerance is None:
        tolerance = ctx.mpf(10) ** -DEFAULT_TOLERANCE_DIGITS
    x = ctx.convert(x)
    b = to_mpf(ctx, beta)
    inv = 1 / b
    if upper is None:
        span = [0, ctx.inf]
    else:
        upper = ctx.convert(upper)
        if upper <= x:
            return ctx.zero
        end = ctx.power(upper - x, b)
        span = ctx.linspace(0, end, 5)
    value, error = ctx.quad(lambda t: f(x + ctx.power(t, inv)), span,
                            error=True)
    value /= ctx.gamma(b + 1)
    error /= ctx.gamma(b + 1)
    log.debug('(-d)^-%s at x=%s: error %s', beta, ctx.nstr(x, 8),
              ctx.nstr(error, 3))
    if error > tolerance * max(1, abs(value)):
        raise FractionalError(f'Weyl integral of order {beta} at '
                              f'x={ctx.nstr(x, 8)} did not converge, '
                              f'error {ctx.nstr(error, 3)}')
    return value


def weyl_fractional_derivative(derivative: DerivativeFunction,
                               alpha: Union[Fraction, int], x: Any,
                               ctx: Optional[MPContext] = None,
                               upper: Any = None,
                               tolerance: Any = None) -> Any:
    """Weyl fractional derivative ``(-d)^α f(x)`` of positive order.

       :param derivative: ``(n, u) -> f^(n)(u)``
       :param alpha: non-negative order
       :raise FractionalError: on negative order or quadrature failure
    """
    alpha = Fraction(alpha)
    if alpha < 0:
        raise FractionalError(f'Invalid fractional derivative order: {alpha}')
    if ctx is None:
        ctx = MPContext()
        ctx.dps = 30
    return WeylOperator(alpha).apply(derivative, x, ctx, upper, tolerance)
