# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Vertex weight sets and multicritical points of planted tree ensembles.

   A weight set ``{g_i}`` defines the generating polynomial
   ``f(T) = Σ_i g_i T^i``, where ``g_i`` weighs the inner vertices with ``i``
   children, i.e. of valence ``i+1``.
"""

#pylint: disable-msg=invalid-name
#pylint: disable-msg=too-many-arguments

from dataclasses import dataclass, field
from enum import Enum, unique
from fractions import Fraction
from json import dumps, loads
from logging import getLogger
from math import comb, factorial
from typing import Any, Dict, List, Mapping, Optional, Union
from .misc import fraction_str, to_fraction


class ModelError(ValueError):
    """Invalid weight set or critical point request"""


class MulticriticalityError(ModelError):
    """A claimed critical point fails the multicriticality conditions.

       :param order: the first violated derivative order: 1 if
                     ``f'(T_c) ≠ 1``, j in ``[2, k-1]`` if ``f^(j)(T_c) ≠ 0``,
                     k if ``f^(k)(T_c) = 0``
    """

    def __init__(self, msg: str, order: int):
        super().__init__(msg)
        self.order = order


@unique
class WeightKind(Enum):
    """Origin of a weight set."""
    MINIMAL = 'minimal'
    CUSTOM = 'custom'


@dataclass(frozen=True)
class WeightSet:
    """Vertex weights of a tree ensemble.

       :param k: the multicriticality order the set is claimed for
       :param g: map from the child count i ≥ 1 to the weight g_i
       :param kind: minimal or custom weights
    """
    k: int
    g: Mapping[int, Fraction]
    kind: WeightKind = WeightKind.CUSTOM

    def __post_init__(self):
        if self.k < 2:
            raise ModelError(f'Invalid multicriticality order: {self.k}')
        weights = {}
        for pos, value in self.g.items():
            pos = int(pos)
            if pos < 1:
                raise ModelError(f'Invalid weight index: {pos}')
            value = Fraction(value)
            if value:
                weights[pos] = value
        object.__setattr__(self, 'g', dict(sorted(weights.items())))

    @property
    def degree(self) -> int:
        """Degree of the polynomial f, 0 for the null function."""
        return max(self.g, default=0)

    @property
    def f_coeffs(self) -> List[Fraction]:
        """Coefficients of f, index i holds g_i, index 0 is f(0) = 0."""
        coeffs = [Fraction(0)] * (self.degree + 1)
        for pos, value in self.g.items():
            coeffs[pos] = value
        return coeffs

    def derivative_coeffs(self, j: int) -> List[Fraction]:
        """Coefficients of the polynomial ``f^(j)``."""
        coeffs = self.f_coeffs
        return [coeffs[i] * factorial(i) / factorial(i - j)
                for i in range(j, len(coeffs))]

    def __str__(self) -> str:
        weights = ', '.join(f'g_{i}={fraction_str(v)}'
                            for i, v in self.g.items())
        return f'{self.kind.value} k={self.k} {{{weights}}}'


@dataclass(frozen=True)
class CriticalPoint:
    """Validated critical point of a weight set.

       ``normalized`` tells whether ``T_c = A = 1`` and ``λ_c = 1/k``.
       ``radius_verified`` is only set for minimal weights, whose generating
       function is known in closed form: for custom weights the radius of
       convergence of T(λ) is assumed, not checked, to be λ_c.
    """
    t_c: Union[Fraction, Any]
    lambda_c: Union[Fraction, Any]
    a: Union[Fraction, Any]
    order: int
    normalized: bool = False
    radius_verified: bool = False
    derivatives: List[Any] = field(default_factory=list, compare=False)


def minimal_weights(k: int) -> WeightSet:
    """Minimal k-th order multicritical weights,
       ``g_i = (-1)^i C(k, i) / k`` for ``2 ≤ i ≤ k``.

       >>> minimal_weights(3).g
       {2: Fraction(1, 1), 3: Fraction(-1, 3)}
    """
    if k < 2:
        raise ModelError(f'Invalid multicriticality order: {k}')
    weights = {i: Fraction((-1)**i * comb(k, i), k) for i in range(2, k+1)}
    return WeightSet(k, weights, WeightKind.MINIMAL)


def derivative_at(w: WeightSet, j: int, t0: Any, ctx: Any = None) -> Any:
    """Exact j-th derivative of the polynomial f at t0.

       A non-rational t0 requires the mpmath context to evaluate with, the
       weights are then converted into the precision of that context.

       >>> derivative_at(minimal_weights(3), 3, Fraction(1))
       Fraction(-2, 1)
    """
    if j < 0:
        raise ModelError(f'Invalid derivative order: {j}')
    if isinstance(t0, (int, str)):
        t0 = to_fraction(t0)
    coeffs = w.derivative_coeffs(j)
    if ctx is not None:
        coeffs = [ctx.mpf(c.numerator) / c.denominator for c in coeffs]
    elif not isinstance(t0, Fraction):
        raise ModelError(f'Non-rational point {t0} requires a context')
    value = Fraction(0) if ctx is None else ctx.zero
    for coeff in reversed(coeffs):
        value = value * t0 + coeff
    return value


def _is_null(value: Any, tolerance: Optional[Any]) -> bool:
    if isinstance(value, Fraction) or tolerance is None:
        return not value
    return abs(value) <= tolerance


def validate_multicritical(w: WeightSet, at_t_c: Any = None,
                           tolerance: Optional[Any] = None,
                           ctx: Any = None) -> CriticalPoint:
    """Check that a claimed point T_c is a k-th order multicritical point.

       Conditions are ``f'(T_c) = 1``, ``f^(j)(T_c) = 0`` for
       ``2 ≤ j ≤ k-1`` and ``f^(k)(T_c) ≠ 0``; they are evaluated exactly for
       rational T_c. A non-rational T_c (e.g. a mpmath real) is tested with
       the given tolerance.

       :param w: the weight set
       :param at_t_c: the candidate T_c, defaults to 1 for minimal weights
       :param tolerance: absolute tolerance for non-rational inputs
       :param ctx: the mpmath context of a non-rational T_c
       :return: the critical point, with λ_c and A
       :raise MulticriticalityError: on the first failed condition
       :raise ModelError: if no T_c is known for a custom weight set
    """
    log = getLogger('pymcrt.models')
    k = w.k
    if at_t_c is None:
        if w.kind != WeightKind.MINIMAL:
            raise ModelError('A critical point T_c is required for custom '
                             'weight sets')
        at_t_c = Fraction(1)
    t_c = to_fraction(at_t_c) if isinstance(at_t_c, (int, str)) else at_t_c
    derivatives = [derivative_at(w, j, t_c, ctx) for j in range(k + 1)]
    if not _is_null(derivatives[1] - 1, tolerance):
        raise MulticriticalityError(f"f'(T_c) = {derivatives[1]}, not 1", 1)
    for j in range(2, k):
        if not _is_null(derivatives[j], tolerance):
            raise MulticriticalityError(
                f'f^({j})(T_c) = {derivatives[j]}, not 0', j)
    if _is_null(derivatives[k], tolerance):
        raise MulticriticalityError(f'f^({k})(T_c) vanishes', k)
    lambda_c = t_c - derivatives[0]
    if _is_null(lambda_c, tolerance):
        raise ModelError('Critical point with null λ_c')
    a = (-1)**k * derivatives[k] * t_c**k / (factorial(k) * lambda_c)
    normalized = bool(t_c == 1 and a == 1 and lambda_c == Fraction(1, k))
    verified = w.kind == WeightKind.MINIMAL and t_c == 1
    if not verified:
        log.info('Radius of convergence of T(λ) assumed to be λ_c = %s',
                 lambda_c)
    return CriticalPoint(t_c, lambda_c, a, k, normalized, verified,
                         derivatives)


def weights_to_dict(w: WeightSet) -> Dict[str, Any]:
    """Serializable form of a weight set, rationals as "p/q" strings."""
    return {'k': w.k, 'g': {str(i): fraction_str(v) for i, v in w.g.items()}}


def dump_weights(w: WeightSet) -> str:
    """JSON document of a weight set, with sorted keys.

       >>> dump_weights(minimal_weights(3))
       '{"g": {"2": "1", "3": "-1/3"}, "k": 3}'
    """
    return dumps(weights_to_dict(w), sort_keys=True)


def load_weights(text: str) -> WeightSet:
    """Parse a JSON weight set document ``{"k": int, "g": {"2": "1/2"}}``.

       The weight set is tagged as minimal if it matches the minimal weights
       of its order.

       :raise ModelError: on malformed document
    """
    try:
        doc = loads(text)
        k = int(doc['k'])
        weights = {int(i): to_fraction(v) for i, v in doc['g'].items()}
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise ModelError(f'Invalid weight set document: {exc}') from exc
    w = WeightSet(k, weights)
    if w.g == minimal_weights(k).g:
        w = WeightSet(k, weights, WeightKind.MINIMAL)
    return w
