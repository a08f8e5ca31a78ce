# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Residuals of the equations satisfied by the continuum profile.

   Each residual is computed from evaluators that do not assume the equation
   it tests: the differential equation is checked on the term-wise
   differentiated series, the fractional equation with Weyl integrals of the
   hypergeometric profile, and the Laplace and leaf-addition identities with
   the integral form of the history densities.
"""

#pylint: disable-msg=invalid-name
#pylint: disable-msg=too-many-arguments

from fractions import Fraction
from logging import getLogger
from typing import Any, Dict, Iterable, List, Mapping, NamedTuple, Optional
from mpmath import MPContext
from .continuum import (ContinuumError, McrtContinuum, QuadratureError,
                        coefficient_ratio, log_grid)
from .discrete import (minimal_partition_closed_form,
                       partition_function_asymptotic)
from .fractional import weyl_fractional_integral
from .hypergeom import to_mpf


CHECK_PRECISION = 20
"""Decimal digits of the evaluators of the check suite."""

CHECK_POINTS = (Fraction(1, 2), Fraction(1), Fraction(2))
"""Lengths the pointwise residuals are evaluated at."""


class GateError(RuntimeError):
    """Some residuals exceed their tolerance.

       :param failures: the failed checks
    """

    def __init__(self, msg: str, failures: List['CheckResult']):
        super().__init__(msg)
        self.failures = failures


class CheckResult(NamedTuple):
    """Outcome of a single check."""
    name: str
    value: Any
    tolerance: Any

    @property
    def passed(self) -> bool:
        """Tell whether the residual is within its tolerance."""
        return abs(self.value) <= self.tolerance


def ode_coefficients(k: int) -> List[Fraction]:
    """Coefficients ``c_i`` of the profile equation
       ``Σ_(i<k) c_i x^i ρ^(i) + ρ^(k) = 0``, expanded from the operator
       product ``Π_(j=0)^(k-2) (P + kj)`` with ``P = (k-1) x d + k``.

       >>> ode_coefficients(3)
       [Fraction(18, 1), Fraction(22, 1), Fraction(4, 1), Fraction(1, 1)]
    """
    if k < 2:
        raise ContinuumError(f'Invalid multicriticality order: {k}')
    # operator as the coefficients of x^i d^i
    operator = [Fraction(1)]
    for j in range(k - 1):
        product = [Fraction(0)] * (len(operator) + 1)
        for i, coeff in enumerate(operator):
            # (P + kj) x^i d^i = ((k-1) i + k + kj) x^i d^i
            #                    + (k-1) x^(i+1) d^(i+1)
            product[i] += ((k - 1) * i + k + k * j) * coeff
            product[i + 1] += (k - 1) * coeff
        operator = product
    return operator[:k] + [Fraction(1)]


def ode_recurrence_mismatches(k: int, count: int = 40) -> int:
    """Count the Taylor orders n < count where the recurrence implied by the
       expanded equation differs from :py:func:`coefficient_ratio`."""
    coeffs = ode_coefficients(k)
    mismatches = 0
    for n in range(count):
        total = Fraction(0)
        for i in range(k):
            falling = 1
            for pos in range(i):
                falling *= n - pos
            total += coeffs[i] * falling
        rising = 1
        for pos in range(1, k + 1):
            rising *= n + pos
        if -total / rising != coefficient_ratio(k, n):
            mismatches += 1
    return mismatches


def _evaluator(k: int, evaluator: Optional[McrtContinuum]) -> McrtContinuum:
    if evaluator is not None:
        if evaluator.k != k:
            raise ContinuumError(f'Evaluator of order {evaluator.k} used for '
                                 f'k={k}')
        return evaluator
    return McrtContinuum(k, CHECK_PRECISION)


def ode_residual(k: int, x: Any,
                 evaluator: Optional[McrtContinuum] = None) -> Any:
    """Residual of the profile equation at x, with the derivatives of ρ
       taken from its series."""
    ev = _evaluator(k, evaluator)
    ctx = ev.ctx
    x = ev.convert(x)
    residual = ctx.zero
    for i, coeff in enumerate(ode_coefficients(k)):
        scale = to_mpf(ctx, coeff) * (ctx.power(x, i) if i < k else 1)
        residual += scale * ev.rho_derivative(x, i)
    return abs(residual)


def fracdif_residual(k: int, x_grid: Iterable[Any],
                     evaluator: Optional[McrtContinuum] = None) -> Any:
    """Largest residual of ``ρ(x) = (k-1) x (-d)^(-1/(k-1)) ρ(x)`` over a
       grid."""
    ev = _evaluator(k, evaluator)
    ctx = ev.ctx
    beta = Fraction(1, k - 1)
    upper = ev.x_max()
    worst = ctx.zero
    for x in x_grid:
        x = ev.convert(x)
        if x <= 0:
            raise ContinuumError('Fractional equation checked at x ≤ 0')
        integral = weyl_fractional_integral(ev.rho, beta, x, ctx, upper)
        residual = abs(ev.rho(x) - (k - 1) * x * integral)
        worst = max(worst, residual)
    return worst


def leibniz_residual(k: int, x: Any,
                     evaluator: Optional[McrtContinuum] = None) -> Any:
    """Residual of ``(-d)^-β (u ρ) = x (-d)^-β ρ + β (-d)^-(β+1) ρ`` with
       ``β = 1/(k-1)``."""
    ev = _evaluator(k, evaluator)
    ctx = ev.ctx
    beta = Fraction(1, k - 1)
    upper = ev.x_max()
    x = ev.convert(x)
    rho = ev.rho
    lhs = weyl_fractional_integral(lambda u: u * rho(u), beta, x, ctx, upper)
    rhs = (x * weyl_fractional_integral(rho, beta, x, ctx, upper) +
           to_mpf(ctx, beta) *
           weyl_fractional_integral(rho, beta + 1, x, ctx, upper))
    return abs(lhs - rhs)


def additivity_residual(beta1: Fraction, beta2: Fraction, x: Any,
                        ctx: Optional[MPContext] = None) -> Any:
    """Residual of ``(-d)^-β1 (-d)^-β2 f = (-d)^-(β1+β2) f`` on
       ``f(u) = u e^-u``, with the inner integral evaluated numerically."""
    if ctx is None:
        ctx = MPContext()
        ctx.dps = CHECK_PRECISION
    tolerance = ctx.mpf(10) ** -10

    def f(u):
        return u * ctx.exp(-u)

    def inner(u):
        return weyl_fractional_integral(f, beta2, u, ctx,
                                        tolerance=tolerance)

    lhs = weyl_fractional_integral(inner, beta1, x, ctx, tolerance=tolerance)
    rhs = weyl_fractional_integral(f, Fraction(beta1) + Fraction(beta2), x,
                                   ctx)
    return abs(lhs - rhs)


def laplace_consistency(k: int, x: Any, p: Optional[Mapping[int, int]] = None,
                        evaluator: Optional[McrtContinuum] = None) -> Any:
    """Residual of the mixture over the tree mass M of the fixed-size
       densities, which must give ``e^-x Π μ_i^(p_i)``.

       The mixture is ``c ∫ dM M^(m-1-1/k-nν) e^(-M/k) ρ(H)(x/M^ν)`` with
       ``c = k^(1/k) sin(π/k) Γ(1+1/k) / π``.
    """
    log = getLogger('pymcrt.checks')
    ev = _evaluator(k, evaluator)
    ctx = ev.ctx
    p = dict(p or {})
    weight = ev.branching_weight(p)
    x = ev.convert(x)
    if x <= 0:
        raise ContinuumError('Laplace identity checked at x ≤ 0')
    m = 1 + sum((i - 1) * c for i, c in p.items())
    n = 1 + sum(i * c for i, c in p.items())
    inv = ctx.mpf(1) / k
    nu = ctx.mpf(k - 1) / k
    exponent = m - 1 - inv - n * nu
    upper = ev.x_max()

    def density(u):
        if not p:
            return ev.rho(u)
        return ev.branching_density(p, u)

    def integrand(mass):
        u = x / ctx.power(mass, nu)
        if u >= upper:
            return ctx.zero
        return (ctx.power(mass, exponent) * ctx.exp(-mass / k) *
                density(u))

    low = ctx.power(x / upper, 1 / nu)
    high = k * (ctx.dps + 10) * ctx.ln10
    points = [ctx.convert(v) for v in log_grid(float(low), float(high), 9)]
    value, error = ctx.quad(integrand, points, error=True)
    if error > ctx.mpf(10) ** -10:
        raise QuadratureError(f'Mass integral did not converge, error '
                              f'{ctx.nstr(error, 3)}', error)
    scale = (ctx.power(k, inv) * ctx.sinpi(inv) * ctx.gamma(1 + inv) /
             ctx.pi)
    residual = abs(scale * value - ctx.exp(-x) * to_mpf(ctx, weight))
    log.debug('Laplace identity k=%d x=%s p=%s: %s', k, ctx.nstr(x, 5), p,
              ctx.nstr(residual, 3))
    return residual


def consistency_relation_residual(k: int, p: Mapping[int, int], x: Any,
                                  evaluator: Optional[McrtContinuum] = None) \
        -> Any:
    """Residual of the leaf-addition relation between the densities of
       histories with m and m+1 leaves.

       An extra leaf either grows on a new 3-valent point of any branch, which
       integrates to ``2x ∫ φ(x+y; p_2+1)``, or on an existing (j+1)-valent
       point, in j+1 plane positions.
    """
    ev = _evaluator(k, evaluator)
    ctx = ev.ctx
    p = {i: c for i, c in p.items() if c}
    x = ev.convert(x)
    if x <= 0:
        raise ContinuumError('Consistency relation checked at x ≤ 0')
    upper = ev.x_max()
    if x >= upper:
        raise ContinuumError(f'Length {ctx.nstr(x, 5)} beyond the profile '
                             f'support')

    def extended(counts: Dict[int, int]) -> Any:
        value, error = ctx.quad(
            lambda y: ev.branching_density(counts, x + y),
            ctx.linspace(0, upper - x, 5), error=True)
        if error > ctx.mpf(10) ** -10:
            raise QuadratureError(f'Leaf integral did not converge, error '
                                  f'{ctx.nstr(error, 3)}', error)
        return value

    grown = dict(p)
    grown[2] = grown.get(2, 0) + 1
    rhs = 2 * x * extended(grown)
    for j in range(2, k):
        if not p.get(j):
            continue
        moved = dict(p)
        moved[j] -= 1
        moved[j + 1] = moved.get(j + 1, 0) + 1
        rhs += (j + 1) * p[j] * extended(moved)
    return abs(ev.branching_density(p, x) - rhs)


def normalization_residual(k: int,
                           evaluator: Optional[McrtContinuum] = None) -> Any:
    """``|∫ ρ - 1|``, by quadrature of the hypergeometric profile."""
    ev = _evaluator(k, evaluator)
    return abs(ev.moment_quadrature(0) - 1)


def two_formula_residual(k: int, x_grid: Iterable[Any],
                         evaluator: Optional[McrtContinuum] = None) -> Any:
    """Largest difference between the integral and the hypergeometric
       profiles over a grid."""
    ev = _evaluator(k, evaluator)
    return max(abs(ev.rho_integral(x) - ev.rho_hypergeometric(x))
               for x in x_grid)


def prefactor_residual(k: int,
                       evaluator: Optional[McrtContinuum] = None) -> Any:
    """Largest relative difference between the series prefactors and their
       ``C sin(πp/k)`` closed form."""
    ev = _evaluator(k, evaluator)
    return max(abs(ev.prefactor(p) / ev.prefactor_closed_form(p) - 1)
               for p in range(1, k))


def partition_asymptotic_residual(k: int, n: int = 1000) -> Any:
    """``|Z_N / Z_N^asympt - 1|`` for the minimal weights."""
    ctx = MPContext()
    ctx.dps = CHECK_PRECISION
    z_n = minimal_partition_closed_form(k, n)
    return abs(to_mpf(ctx, z_n) /
               partition_function_asymptotic(k, n, ctx) - 1)


def history_case(k: int) -> Dict[int, int]:
    """Branching counts of the history the suites check: a single
       k-valent branching point, or a 3-valent one for k=2."""
    return {max(2, k - 1): 1}


def run_checks(k: int, precision: int = CHECK_PRECISION) \
        -> List[CheckResult]:
    """Evaluate the whole residual suite for an order.

       :return: the results, in a fixed order
    """
    log = getLogger('pymcrt.checks')
    ev = McrtContinuum(k, precision)
    grid = [Fraction(pos, 10) for pos in range(1, 41)]
    history = history_case(k)
    relation = {} if k == 2 else history
    results = [
        CheckResult('ode_expansion', ode_recurrence_mismatches(k), 0),
        CheckResult('prefactor', prefactor_residual(k, ev), 1e-15),
        CheckResult('two_formula', two_formula_residual(k, grid, ev), 1e-10),
        CheckResult('normalization', normalization_residual(k, ev), 1e-8),
        CheckResult('fracdif', fracdif_residual(k, CHECK_POINTS, ev), 1e-8),
        CheckResult('partition_asymptotic',
                    partition_asymptotic_residual(k), 1e-2),
        CheckResult('additivity',
                    additivity_residual(Fraction(1, 2), Fraction(1, k), 1),
                    1e-8),
    ]
    for x in CHECK_POINTS:
        results.append(CheckResult(f'ode@{x}', ode_residual(k, x, ev), 1e-8))
        results.append(CheckResult(f'leibniz@{x}',
                                   leibniz_residual(k, x, ev), 1e-8))
        results.append(CheckResult(
            f'consistency@{x}',
            consistency_relation_residual(k, relation, x, ev), 1e-7))
    for x in CHECK_POINTS[:2]:
        results.append(CheckResult(f'laplace@{x}',
                                   laplace_consistency(k, x, None, ev),
                                   1e-7))
        results.append(CheckResult(f'laplace_history@{x}',
                                   laplace_consistency(k, x, history, ev),
                                   1e-7))
    for result in results:
        log.info('%s: %s (tolerance %s)', result.name, result.value,
                 result.tolerance)
    return results


def gate(results: Iterable[CheckResult]) -> None:
    """Raise if any check failed.

       :raise GateError: listing the failed checks
    """
    failures = [r for r in results if not r.passed]
    if failures:
        names = ', '.join(r.name for r in failures)
        raise GateError(f'{len(failures)} check(s) failed: {names}', failures)
