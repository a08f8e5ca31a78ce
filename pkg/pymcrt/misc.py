# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Miscellaneous helpers"""

#pylint: disable-msg=invalid-name

from decimal import Decimal, InvalidOperation, localcontext
from fractions import Fraction
from re import match
from typing import Any, List, Union


# String values evaluated as true boolean values
TRUE_BOOLEANS = ['on', 'true', 'enable', 'enabled', 'yes', 'high', '1']
# String values evaluated as false boolean values
FALSE_BOOLEANS = ['off', 'false', 'disable', 'disabled', 'no', 'low', '0']
# Significant digits of the decimal columns of reports
DECIMAL_DIGITS = 15


def to_int(value: Union[int, str]) -> int:
    """Parse a decimal integer, e.g. a tree size.

       >>> to_int(' 200 ')
       200

       :raise ValueError: if the value is not a decimal integer
    """
    if isinstance(value, bool):
        raise ValueError('Invalid integer value: %r' % value)
    if isinstance(value, int):
        return value
    text = str(value).strip()
    if not match(r'^[-+]?\d+$', text):
        raise ValueError('Invalid integer value: "%s"' % text)
    return int(text, 10)


def to_bool(value: Union[int, bool, str], permissive: bool = True,
            allow_int: bool = False) -> bool:
    """Parse a string and convert it into a boolean value if possible.

       Input value may be:
       - a string with an integer value, if `allow_int` is enabled
       - a boolean value
       - a string with a common boolean definition

       :param value: the value to parse and convert
       :param permissive: default to the False value if parsing fails
       :param allow_int: allow an integral type as the input value
       :raise ValueError: if the input value cannot be converted into an bool
    """
    if value is None:
        return False
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        if allow_int:
            return bool(value)
        if permissive:
            return False
        raise ValueError("Invalid boolean value: '%d'" % value)
    if value.lower() in TRUE_BOOLEANS:
        return True
    if permissive or (value.lower() in FALSE_BOOLEANS):
        return False
    raise ValueError('Invalid boolean value: "%s"' % value)


def to_fraction(value: Union[int, str, Fraction]) -> Fraction:
    """Parse an exact rational value.

       Accepted forms are ``p/q``, signed integers and finite decimal
       strings such as ``0.25`` or ``1e-3``, which are converted exactly.

       >>> to_fraction('-1/3')
       Fraction(-1, 3)
       >>> to_fraction('0.25')
       Fraction(1, 4)

       :param value: the value to parse
       :return: the exact rational value
       :raise ValueError: if the value is not a finite rational
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError('Invalid rational value: %r' % value)
    if isinstance(value, int):
        return Fraction(value)
    text = str(value).strip()
    mo = match(r'^([-+]?\d+)\s*/\s*(\d+)$', text)
    if mo:
        den = int(mo.group(2))
        if not den:
            raise ValueError('Null denominator: "%s"' % text)
        return Fraction(int(mo.group(1)), den)
    try:
        dec = Decimal(text)
    except InvalidOperation as exc:
        raise ValueError('Invalid rational value: "%s"' % text) from exc
    if not dec.is_finite():
        raise ValueError('Invalid rational value: "%s"' % text)
    return Fraction(dec)


def fraction_str(value: Union[int, Fraction]) -> str:
    """Format an exact rational as ``p/q``, or ``p`` for integers.

       >>> fraction_str(Fraction(-1, 3))
       '-1/3'
       >>> fraction_str(Fraction(4, 2))
       '2'
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return '%d/%d' % (value.numerator, value.denominator)


def to_decimal_str(value: Any, digits: int = DECIMAL_DIGITS) -> str:
    """Format an int, a Fraction, a float or a mpmath real with a fixed count
       of significant digits, in scientific notation.

       Binary floating point values are first converted into their exact
       rational value, so the output only depends on the value, not on its
       type or on the mpmath context it comes from.

       >>> to_decimal_str(Fraction(2, 3), 5)
       '6.6667e-1'

       :param value: the value to format
       :param digits: significant digits
       :return: the decimal representation
    """
    man_exp = getattr(value, 'man_exp', None)
    if man_exp is not None:
        man, exp = man_exp
        value = Fraction(man) * Fraction(2) ** exp
    value = Fraction(value)
    if not value:
        return '0'
    with localcontext() as ctx:
        ctx.prec = digits
        dec = Decimal(value.numerator) / Decimal(value.denominator)
    return format(dec, '.%de' % (digits - 1))


def to_int_list(value: str) -> List[int]:
    """Parse a comma separated list of integers, e.g. ``50,100,200``.

       :param value: the string to parse
       :return: the list of integers, in input order
       :raise ValueError: if an item is not an integer
    """
    items = [item for item in (v.strip() for v in value.split(','))
             if item]
    if not items:
        raise ValueError('Empty integer list: "%s"' % value)
    return [to_int(item) for item in items]


def rational_binomial(upper: Union[int, Fraction], lower: int) -> Fraction:
    """Generalized binomial coefficient C(upper, lower) for a rational
       upper argument.

       >>> rational_binomial(Fraction(1, 2), 2)
       Fraction(-1, 8)

       :param upper: any rational
       :param lower: non-negative integer
       :return: upper (upper-1) ... (upper-lower+1) / lower!
    """
    if lower < 0:
        raise ValueError('Invalid binomial index: %d' % lower)
    upper = Fraction(upper)
    result = Fraction(1)
    for pos in range(lower):
        result *= (upper - pos) / (pos + 1)
    return result

