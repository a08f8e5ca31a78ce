# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Generalized hypergeometric series by direct summation.

   ``pFq(a; b; z) = Σ_m (Π (a_i)_m / Π (b_j)_m) z^m / m!``

   The entire case (p ≤ q) is summed in a private working precision. A
   negative argument makes the series alternate: its terms grow up to about
   ``e^|z|`` before they decay, while the sum may be as small as ``e^-|z|``.
   The working precision therefore starts with ``0.434 |z|`` extra digits and
   the summation checks, from its largest term, how many digits were actually
   lost, doubling the working precision until the result can be trusted.
"""

#pylint: disable-msg=invalid-name
#pylint: disable-msg=too-many-arguments
#pylint: disable-msg=too-many-locals

from fractions import Fraction
from logging import getLogger
from math import ceil
from typing import Any, Optional, Sequence, Tuple, Union
from mpmath import MPContext


Parameter = Union[int, Fraction, Any]

GUARD_DIGITS = 20
"""Extra working digits on top of the requested ones."""

MAX_PRECISION = 20000
"""Working precision cap, in decimal digits."""

MAX_TERMS = 1000000
"""Hard bound on the summed term count."""

# decimal digits lost per unit of |z| on alternating series
CANCELLATION_RATE = 0.4343


class HypergeometricError(ArithmeticError):
    """Generic hypergeometric evaluation error"""


class PoleError(HypergeometricError):
    """A lower parameter is a pole of the series (b_j ∈ {0, -1, -2, ...})"""


class PrecisionError(HypergeometricError):
    """Requested accuracy not reachable within the precision cap"""


def to_mpf(ctx: MPContext, value: Parameter) -> Any:
    """Convert an int, a Fraction or a mpmath number into the context,
       rounding rationals only once."""
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    return ctx.convert(value)


def _pole(value: Parameter) -> bool:
    if isinstance(value, (int, Fraction)):
        return value <= 0 and Fraction(value).denominator == 1
    return value <= 0 and int(value) == value


def _negative_integer(ctx: MPContext, value: Any) -> Optional[int]:
    if ctx.isint(value) and value <= 0:
        return int(value)
    return None


def _sum_series(ctx: MPContext, a: Sequence[Any], b: Sequence[Any], z: Any,
                digits: int) -> Tuple[Any, Any, int]:
    """Sum the series in the current precision of ctx.

       :return: the sum, the largest term magnitude and the term count
    """
    eps = ctx.mpf(10) ** (-digits - 5)
    total = ctx.one
    term = ctx.one
    largest = ctx.one
    count = 1
    while count < MAX_TERMS:
        m = count - 1
        num = ctx.one
        for a_i in a:
            num *= a_i + m
        if not num:
            # terminating series
            break
        den = ctx.mpf(count)
        for b_j in b:
            den *= b_j + m
        new = term * num * z / den
        total += new
        magnitude = abs(new)
        if magnitude > largest:
            largest = magnitude
        shrinking = magnitude < abs(term)
        term = new
        count += 1
        if shrinking and magnitude <= eps * abs(total):
            break
    else:
        raise HypergeometricError(f'Series did not converge in {MAX_TERMS} '
                                  f'terms at z={ctx.nstr(z, 10)}')
    return total, largest, count


def hypergeometric_pFq(a: Sequence[Parameter], b: Sequence[Parameter],
                       z: Parameter, ctx: Optional[MPContext] = None,
                       precision: Optional[int] = None,
                       max_precision: int = MAX_PRECISION) -> Any:
    """Evaluate ``pFq(a; b; z)`` to a relative accuracy of ``precision``
       decimal digits.

       >>> ctx = MPContext()
       >>> ctx.dps = 20
       >>> print(hypergeometric_pFq([1], [1], 1, ctx))
       2.7182818284590452354
       >>> hypergeometric_pFq([Fraction(1, 3)], [Fraction(5, 6)], 0, ctx)
       mpf('1.0')

       :param a: upper parameters, exact rationals or mpmath numbers
       :param b: lower parameters
       :param z: real argument
       :param ctx: the context of the result, a new one at 30 digits if None
       :param precision: requested digits, defaults to the context ones
       :param max_precision: working precision cap
       :return: the series value, as a number of ctx
       :raise PoleError: if a lower parameter is a non-positive integer
       :raise PrecisionError: if the cap is reached
       :raise HypergeometricError: if the series does not converge
    """
    log = getLogger('pymcrt.hypergeom')
    if ctx is None:
        ctx = MPContext()
        ctx.dps = 30
    digits = precision or ctx.dps
    for b_j in b:
        if _pole(b_j):
            raise PoleError(f'Lower parameter {b_j} is a pole')
    z_value = to_mpf(ctx, z)
    if not z_value:
        return ctx.one
    work = MPContext()
    work.dps = digits + GUARD_DIGITS + \
        ceil(CANCELLATION_RATE * float(abs(z_value)))
    terminating = any(_negative_integer(work, to_mpf(work, a_i)) is not None
                      for a_i in a)
    if len(a) > len(b) + 1 and not terminating:
        raise HypergeometricError(f'{len(a)}F{len(b)} series diverges')
    if len(a) == len(b) + 1 and not terminating and abs(z_value) >= 1:
        raise HypergeometricError(f'{len(a)}F{len(b)} series diverges at '
                                  f'|z| = {ctx.nstr(abs(z_value), 10)}')
    while True:
        if work.dps > max_precision:
            raise PrecisionError(f'Precision cap {max_precision} reached for '
                                 f'{len(a)}F{len(b)} at '
                                 f'z={ctx.nstr(z_value, 10)}')
        aw = [to_mpf(work, a_i) for a_i in a]
        bw = [to_mpf(work, b_j) for b_j in b]
        total, largest, count = _sum_series(work, aw, bw, to_mpf(work, z),
                                            digits)
        if total:
            lost = max(0, ceil(float(work.log10(largest / abs(total)))))
        else:
            lost = work.dps
        log.debug('%dF%d: %d terms at %d digits, %d digits lost',
                  len(a), len(b), count, work.dps, lost)
        if work.dps - lost >= digits + 5:
            return +ctx.convert(total)
        log.debug('%dF%d: raising working precision to %d digits',
                  len(a), len(b), 2 * work.dps)
        work.dps = 2 * work.dps
