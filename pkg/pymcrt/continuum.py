# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Continuum multicritical random tree observables.

   The average profile ρ(x) of the k-th order multicritical continuous random
   tree is evaluated two independent ways:

   * from its integral representation
     ``ρ(x) = N Im ∫_0^∞ ξ^(k-1) e^(-ξ^k/k + τ ξ^(k-1) x) dξ``,
     with ``τ = e^(iπ/k)``,
     integrated along a rotated ray ``ξ = t e^(iθ)`` where the integrand
     decays without growing first;
   * as a finite sum of generalized hypergeometric series at
     ``z = -(k-1)^(k-1) x^k / k``, summed in a precision that absorbs the
     cancellation of their alternating terms.

   History densities, σ_j distributions, moments, fixed-size profiles and the
   fit of the exponential tail are built on both.
"""

#pylint: disable-msg=invalid-name
#pylint: disable-msg=too-many-arguments
#pylint: disable-msg=too-many-locals
#pylint: disable-msg=too-many-public-methods

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from logging import getLogger
from math import ceil, comb, factorial, log10
from typing import (Any, Callable, Dict, List, Mapping, NamedTuple, Optional,
                    Sequence, Tuple)
from mpmath import MPContext
from numpy import array as nparray
from numpy.linalg import lstsq
from .hypergeom import (CANCELLATION_RATE, MAX_PRECISION, PrecisionError,
                        hypergeometric_pFq, to_mpf)
from .fractional import WeylOperator
from .trees import HistoryTree


DEFAULT_PRECISION = 30
"""Default decimal digits of the continuum evaluators."""

TRUNCATION = 40
"""Drop of the log-magnitude of a ray integrand at its cut-off point."""

QUADRATURE_DIGITS = 13
"""Accepted absolute quadrature error, in decimal digits."""

TAIL_WINDOW = (8, 30)
"""Decimal orders of magnitude of ρ spanned by the tail fit."""

TAIL_POINTS = 16
"""Grid size of the tail fit."""

RHO_CACHE_SIZE = 8192
"""Memoized profile values, reused across quadratures on the same nodes."""

# extra digits of the outer sum of the hypergeometric profile
GUARD_DIGITS = 10


class ContinuumError(ValueError):
    """Invalid continuum observable request"""


class QuadratureError(ArithmeticError):
    """Quadrature did not reach the requested accuracy.

       :param error: the achieved error estimate
    """

    def __init__(self, msg: str, error: Any):
        super().__init__(msg)
        self.error = error


@dataclass(frozen=True)
class UniversalWeights:
    """Universal constants of the MCRT_k.

       ``mu[i]`` weighs each (i+1)-valent branching point of a history,
       ``alpha[i]`` is the order of the fractional derivative it carries,
       ``nu`` is the length scaling exponent and ``d`` the fractal dimension.
    """
    k: int
    mu: Dict[int, Fraction]
    alpha: Dict[int, Fraction]
    nu: Fraction
    d: Fraction


def universal_weights(k: int) -> UniversalWeights:
    """Universal weights of the MCRT_k.

       >>> universal_weights(4).mu
       {2: Fraction(3, 2), 3: Fraction(-1, 1), 4: Fraction(1, 4)}
    """
    if k < 2:
        raise ContinuumError(f'Invalid multicriticality order: {k}')
    mu = {i: Fraction((-1)**i * comb(k, i), k) for i in range(2, k + 1)}
    alpha = {i: Fraction(k - i, k - 1) for i in range(2, k + 1)}
    return UniversalWeights(k, mu, alpha, Fraction(k - 1, k),
                            Fraction(k, k - 1))


@dataclass(frozen=True)
class ContinuousHistory:
    """History of the continuum tree: its branching counts and real branch
       lengths.

       :param p: map from the out-degree i ≥ 2 of a branching point to the
                 count of such points
       :param lengths: the n positive branch lengths, ``n = 1 + Σ i p_i``
    """
    p: Mapping[int, int]
    lengths: Tuple[Any, ...]

    def __post_init__(self):
        counts = {}
        for i, count in self.p.items():
            if i < 2 or count < 0:
                raise ContinuumError(f'Invalid branching count p_{i}={count}')
            if count:
                counts[int(i)] = int(count)
        object.__setattr__(self, 'p', dict(sorted(counts.items())))
        lengths = tuple(Fraction(x) if isinstance(x, (int, str)) else x
                        for x in self.lengths)
        if any(not x > 0 for x in lengths):
            raise ContinuumError(f'Non-positive branch length in {lengths}')
        branches = 1 + sum(i * c for i, c in self.p.items())
        if len(lengths) != branches:
            raise ContinuumError(f'Expected {branches} branch lengths, got '
                                 f'{len(lengths)}')
        object.__setattr__(self, 'lengths', lengths)

    @classmethod
    def from_history(cls, history: HistoryTree) -> 'ContinuousHistory':
        """Continuum history of a non-degenerate history tree."""
        if history.degenerate:
            raise ContinuumError(f'Degenerate history {history} has no '
                                 f'continuum density')
        return cls(history.p, history.lengths)

    @classmethod
    def from_total(cls, p: Mapping[int, int],
                   total: Any) -> 'ContinuousHistory':
        """History with counts p whose branches share a total length."""
        branches = 1 + sum(i * c for i, c in p.items())
        if isinstance(total, (int, str, Fraction)):
            total = Fraction(total)
        return cls(p, (total / branches,) * branches)

    @property
    def m(self) -> int:
        """Count of leaves."""
        return 1 + sum((i - 1) * c for i, c in self.p.items())

    @property
    def n(self) -> int:
        """Count of branches."""
        return len(self.lengths)

    @property
    def total_length(self) -> Any:
        """Sum of the branch lengths."""
        return sum(self.lengths)

    def excess(self, k: int) -> int:
        """``Σ_i (k-i) p_i``, the power of ``ξ/τ`` in the density integral."""
        return sum((k - i) * c for i, c in self.p.items())


class TailFit(NamedTuple):
    """Least-squares fit ``-log ρ(x) ≈ c x^k - power log x + const``."""
    coefficient: float
    target: Fraction
    power: float
    points: int


def coefficient_ratio(k: int, n: int) -> Fraction:
    """Exact ratio ``ρ_(n+k) / ρ_n`` of the Taylor coefficients of ρ.

       >>> coefficient_ratio(2, 1)
       Fraction(-1, 2)
    """
    value = Fraction(-factorial(n), factorial(n + k))
    for j in range(k - 1):
        value *= n * (k - 1) + k + k * j
    return value


class McrtContinuum:
    """Evaluator of the continuum observables of the MCRT_k.

       The evaluator owns its mpmath context: all results are numbers of
       this context, at its precision.

       :param k: multicriticality order
       :param precision: decimal digits of the results
       :param max_precision: working precision cap of the series
    """

    def __init__(self, k: int, precision: int = DEFAULT_PRECISION,
                 max_precision: int = MAX_PRECISION):
        if k < 2:
            raise ContinuumError(f'Invalid multicriticality order: {k}')
        if precision < 5:
            raise ContinuumError(f'Invalid precision: {precision}')
        self._log = getLogger('pymcrt.continuum')
        self._k = k
        self._ctx = MPContext()
        self._ctx.dps = precision
        self._max_precision = max_precision
        self._weights = universal_weights(k)
        self._z0 = Fraction(-(k - 1)**(k - 1), k)
        self._rho_cached = lru_cache(maxsize=RHO_CACHE_SIZE)(
            self.rho_hypergeometric)

    @property
    def k(self) -> int:
        """Multicriticality order."""
        return self._k

    @property
    def ctx(self) -> MPContext:
        """The mpmath context of the results."""
        return self._ctx

    @property
    def precision(self) -> int:
        """Decimal digits of the results."""
        return self._ctx.dps

    @property
    def weights(self) -> UniversalWeights:
        """Universal weights of this order."""
        return self._weights

    def convert(self, value: Any) -> Any:
        """Convert an int, a Fraction, a decimal string or a number into the
           context of the evaluator."""
        if isinstance(value, str):
            value = Fraction(value)
        return to_mpf(self._ctx, value)

    def _point(self, x: Any) -> Any:
        x = self.convert(x)
        if x < 0:
            raise ContinuumError(f'Negative length: {self._ctx.nstr(x, 8)}')
        return x

    def x_max(self) -> Any:
        """Length beyond which ρ is below the working accuracy."""
        ctx = self._ctx
        k = self._k
        z_cut = (ctx.dps + 10) * ctx.ln10
        return ctx.root(z_cut / abs(to_mpf(ctx, self._z0)), k)

    # Hypergeometric series

    def parameters(self, p: int) -> Tuple[List[Fraction], List[Fraction]]:
        """Upper and lower parameters of the series multiplying x^p, once
           the unit parameters ``a_(k-1) = b_(k-p) = 1`` are cancelled.

           >>> McrtContinuum(4).parameters(1)[0]
           [Fraction(7, 12), Fraction(11, 12)]
           >>> McrtContinuum(4).parameters(1)[1]
           [Fraction(1, 2), Fraction(3, 4)]
        """
        k = self._k
        if not 1 <= p < k:
            raise ContinuumError(f'Invalid series index: {p}')
        a = [Fraction(p, k) + Fraction(i, k - 1) for i in range(1, k - 1)]
        b = [Fraction(p + i, k) for i in range(1, k) if i != k - p]
        return a, b

    def full_parameters(self, p: int) -> Tuple[List[Fraction],
                                               List[Fraction]]:
        """The k-1 upper and lower parameters of the series, unit ones
           included."""
        k = self._k
        if not 1 <= p < k:
            raise ContinuumError(f'Invalid series index: {p}')
        a = [Fraction(p, k) + Fraction(i, k - 1) for i in range(1, k - 1)]
        a.append(Fraction(1))
        b = [Fraction(p + i, k) for i in range(1, k)]
        return a, b

    def prefactor(self, p: int, ctx: Optional[MPContext] = None) -> Any:
        """Coefficient of ``x^p F_p`` in the hypergeometric profile,
           including the 1/p! factor."""
        ctx = ctx or self._ctx
        k = self._k
        inv = ctx.mpf(1) / k
        nu = ctx.mpf(k - 1) / k
        return (ctx.sinpi(ctx.mpf(p) / k) / ctx.sinpi(inv) *
                ctx.power(k, nu * p) * ctx.gamma(nu * p + 1) /
                (ctx.power(k, inv) * ctx.gamma(inv + 1) * ctx.factorial(p)))

    def global_coefficient(self) -> Any:
        """Normalization ``C`` of the solution ``Σ_p C sin(πp/k) F_p``."""
        ctx = self._ctx
        k = self._k
        inv = ctx.mpf(1) / k
        return (ctx.sqrt(2 * ctx.pi * (k - 1) / k) /
                (ctx.power(k, inv) * ctx.gamma(inv + 1) * ctx.sinpi(inv)))

    def prefactor_closed_form(self, p: int) -> Any:
        """Same coefficient as :py:meth:`prefactor`, rebuilt from the
           normalized solutions ``F_p`` and their coefficients
           ``C_p = C sin(πp/k)``."""
        ctx = self._ctx
        k = self._k
        a, b = self.full_parameters(p)
        value = (self.global_coefficient() * ctx.sinpi(ctx.mpf(p) / k) *
                 ctx.power(abs(to_mpf(ctx, self._z0)), ctx.mpf(p) / k))
        for a_i, b_i in zip(a, b):
            value *= ctx.gamma(to_mpf(ctx, a_i)) / ctx.gamma(to_mpf(ctx, b_i))
        return value

    def _envelope(self, x: Any, rate: float) -> int:
        z = float(abs(self._z0)) * float(x)**self._k
        return ceil(rate * z)

    def rho_hypergeometric(self, x: Any) -> Any:
        """Average profile ρ(x) from its hypergeometric series, to the
           relative accuracy of the context.

           >>> evaluator = McrtContinuum(2, 20)
           >>> rho = evaluator.rho_hypergeometric(1)
           >>> print(evaluator.ctx.nstr(rho, 12))
           0.606530659713

           :raise PrecisionError: if the working precision cap is reached
        """
        ctx = self._ctx
        x = self._point(x)
        if not x:
            return ctx.zero
        target = ctx.dps
        work = MPContext()
        work.dps = target + GUARD_DIGITS + \
            self._envelope(x, CANCELLATION_RATE)
        while True:
            if work.dps > self._max_precision:
                raise PrecisionError(f'Precision cap {self._max_precision} '
                                     f'reached for rho at '
                                     f'x={ctx.nstr(x, 8)}')
            xw = work.convert(x)
            z = to_mpf(work, self._z0) * work.power(xw, self._k)
            terms = []
            for p in range(1, self._k):
                a, b = self.parameters(p)
                series = hypergeometric_pFq(a, b, z, work, work.dps,
                                            self._max_precision)
                terms.append(self.prefactor(p, work) *
                             work.power(xw, p) * series)
            total = work.fsum(terms)
            largest = max(abs(t) for t in terms)
            lost = work.dps if not total else \
                max(0, ceil(float(work.log10(largest / abs(total)))))
            if work.dps - lost >= target + 5:
                return +ctx.convert(total)
            self._log.debug('rho(%s): %d digits lost at %d digits',
                            ctx.nstr(x, 8), lost, work.dps)
            work.dps = 2 * work.dps

    def rho(self, x: Any) -> Any:
        """Memoized :py:meth:`rho_hypergeometric`, for quadratures that
           revisit the same nodes."""
        return self._rho_cached(self._point(x))

    def series_coefficients(self, count: int) -> List[Any]:
        """Taylor coefficients ``ρ_0 .. ρ_(count-1)`` of ρ at x = 0."""
        ctx = self._ctx
        k = self._k
        coeffs = [ctx.zero] * count
        z0 = to_mpf(ctx, self._z0)
        for p in range(1, k):
            a, b = self.parameters(p)
            coef = self.prefactor(p)
            m = 0
            while p + k * m < count:
                coeffs[p + k * m] = coef
                coef *= z0 * self._ratio(ctx, a, b, m)
                m += 1
        return coeffs

    @staticmethod
    def _ratio(ctx: MPContext, a: Sequence[Fraction], b: Sequence[Fraction],
               m: int) -> Any:
        num = Fraction(1)
        for a_i in a:
            num *= a_i + m
        for b_j in b:
            num /= b_j + m
        return to_mpf(ctx, num / (m + 1))

    def _series_derivative(self, ctx: MPContext, x: Any, order: int) \
            -> Tuple[Any, Any]:
        k = self._k
        eps = ctx.mpf(10) ** -(ctx.dps + 5)
        z0 = to_mpf(ctx, self._z0)
        total = ctx.zero
        largest = ctx.zero
        for p in range(1, k):
            a, b = self.parameters(p)
            coef = self.prefactor(p, ctx)
            previous = None
            m = 0
            while True:
                n = p + k * m
                if n >= order:
                    falling = 1
                    for pos in range(order):
                        falling *= n - pos
                    term = coef * falling * ctx.power(x, n - order)
                    total += term
                    magnitude = abs(term)
                    largest = max(largest, magnitude)
                    if not x:
                        break
                    if previous is not None and magnitude < previous and \
                            magnitude <= eps * abs(total):
                        break
                    previous = magnitude
                coef *= z0 * self._ratio(ctx, a, b, m)
                m += 1
        return total, largest

    def rho_derivative(self, x: Any, order: int) -> Any:
        """Derivative ``ρ^(order)(x)``, from the term-wise differentiated
           series, to the relative accuracy of the context, or to the same
           absolute accuracy near the zeros of the derivative.

           :raise PrecisionError: if the working precision cap is reached
        """
        if order < 0:
            raise ContinuumError(f'Invalid derivative order: {order}')
        if not order:
            return self.rho_hypergeometric(x)
        ctx = self._ctx
        x = self._point(x)
        target = ctx.dps
        work = MPContext()
        work.dps = target + 2 * GUARD_DIGITS + \
            self._envelope(x, 2 * CANCELLATION_RATE)
        while True:
            if work.dps > self._max_precision:
                raise PrecisionError(f'Precision cap {self._max_precision} '
                                     f'reached for rho^({order}) at '
                                     f'x={ctx.nstr(x, 8)}')
            total, largest = self._series_derivative(work, work.convert(x),
                                                     order)
            if not largest:
                return ctx.zero
            floor = work.mpf(10) ** -target
            lost = max(0, ceil(float(work.log10(largest /
                                                max(abs(total), floor)))))
            if work.dps - lost >= target + 5:
                return +ctx.convert(total)
            self._log.debug('rho^(%d)(%s): %d digits lost at %d digits',
                            order, ctx.nstr(x, 8), lost, work.dps)
            work.dps = 2 * work.dps

    # Integral representation

    def _slopes(self, x: Any, r: int) -> Tuple[Any, Any, Any, Any]:
        ctx = self._ctx
        k = self._k
        ray = ctx.expj(ctx.pi * (2 * k - 3) / (4 * k * (k - 1)))
        tau = ctx.expjpi(ctx.mpf(1) / k)
        quartic = -ctx.power(ray, k) / k
        linear = tau * ctx.power(ray, k - 1) * x
        scale = ctx.power(ray, k + r) / ctx.power(tau, r)
        return quartic, linear, scale, k - 1 + r

    def _window(self, x: Any, r: int) -> Tuple[Any, int]:
        """Cut-off and piece count of the ray integral.

           On the ray, the log-magnitude of the integrand is
           ``s log t - A t^k - B t^(k-1)`` with A > 0 and B ≥ 0.
        """
        ctx = self._ctx
        k = self._k
        quartic, linear, _, s = self._slopes(x, r)
        coef_a, coef_b = quartic.real, linear.real

        def magnitude(t):
            return (s * ctx.ln(t) + coef_a * ctx.power(t, k) +
                    coef_b * ctx.power(t, k - 1))

        def slope(t):
            return (s / t + k * coef_a * ctx.power(t, k - 1) +
                    (k - 1) * coef_b * ctx.power(t, k - 2))

        top = ctx.root(s / (k * abs(coef_a)), k)
        low, high = top, 2 * top
        while slope(low) <= 0:
            low /= 2
        peak = ctx.findroot(slope, (low, high), solver='anderson',
                            verify=False)
        level = magnitude(peak) - TRUNCATION
        high = 2 * peak
        while magnitude(high) > level:
            high *= 2
        cut = ctx.findroot(lambda t: magnitude(t) - level, (peak, high),
                           solver='anderson', verify=False)
        phase = (abs(quartic.imag) * ctx.power(cut, k) +
                 abs(linear.imag) * ctx.power(cut, k - 1))
        pieces = max(4, 2 * int(ctx.ceil(phase / (2 * ctx.pi))))
        self._log.debug('ray integral x=%s r=%d: peak %s, cut %s, %d pieces',
                        ctx.nstr(x, 8), r, ctx.nstr(peak, 5),
                        ctx.nstr(cut, 5), pieces)
        return cut, pieces

    def ray_integral(self, x: Any, r: int = 0,
                     window: Optional[Tuple[Any, int]] = None) -> Any:
        """Complex integral
           ``∫_0^∞ ξ^(k-1) (ξ/τ)^r e^(-ξ^k/k + τ ξ^(k-1) x) dξ``.

           The contour is rotated to ``ξ = t e^(iθ)`` with
           ``θ = π(2k-3)/(4k(k-1))``, where both exponential terms decay.

           :param x: non-negative length
           :param r: non-negative power of ``ξ/τ``
           :param window: cut-off and piece count, computed from x if None
           :raise QuadratureError: if the quadrature does not converge
        """
        ctx = self._ctx
        k = self._k
        if r < 0:
            raise ContinuumError(f'Invalid ray integral power: {r}')
        x = ctx.convert(x)
        cut, pieces = window or self._window(x, r)
        quartic, linear, scale, s = self._slopes(x, r)

        def integrand(t):
            return ctx.power(t, s) * ctx.exp(quartic * ctx.power(t, k) +
                                             linear * ctx.power(t, k - 1))

        value, error = ctx.quad(integrand, ctx.linspace(0, cut, pieces + 1),
                                error=True)
        value *= scale
        if error > ctx.mpf(10) ** -QUADRATURE_DIGITS * max(1, abs(value)):
            raise QuadratureError(f'Ray integral at x={ctx.nstr(x, 8)}, '
                                  f'r={r} did not converge, error '
                                  f'{ctx.nstr(error, 3)}', error)
        return value

    def normalization(self) -> Any:
        """Prefactor ``1/(k^(1/k) Γ(1+1/k) sin(π/k))`` of the integral form
           of ρ."""
        ctx = self._ctx
        inv = ctx.mpf(1) / self._k
        return 1 / (ctx.power(self._k, inv) * ctx.gamma(1 + inv) *
                    ctx.sinpi(inv))

    def sigma_prefactor(self, j: int) -> Any:
        """Prefactor of the integral form of σ_j."""
        ctx = self._ctx
        k = self._k
        self._check_sigma(j)
        shift = ctx.mpf(k - j + 1) / k
        return (ctx.power(k, ctx.mpf(j - 1) / k) /
                (ctx.gamma(shift) * ctx.sinpi(shift)))

    def _check_sigma(self, j: int) -> None:
        if not 2 <= j <= self._k:
            raise ContinuumError(f'Invalid σ index {j} for k={self._k}')

    def rho_integral(self, x: Any) -> Any:
        """Average profile ρ(x) from its integral representation, to an
           absolute accuracy of about 1e-13.

           >>> evaluator = McrtContinuum(2, 20)
           >>> print(evaluator.ctx.nstr(evaluator.rho_integral(1), 12))
           0.606530659713
        """
        x = self._point(x)
        return self.normalization() * self.ray_integral(x).imag

    def sigma_j(self, j: int, x: Any,
                window: Optional[Tuple[Any, int]] = None) -> Any:
        """Basic distribution σ_j(x), ``2 ≤ j ≤ k``, with σ_k = ρ."""
        self._check_sigma(j)
        x = self._point(x)
        return (self.sigma_prefactor(j) *
                self.ray_integral(x, self._k - j, window).imag)

    # Histories

    def _check_counts(self, p: Mapping[int, int]) -> Dict[int, int]:
        counts = {}
        for i, count in p.items():
            if not 2 <= i <= self._k:
                raise ContinuumError(f'Branching points of out-degree {i} '
                                     f'have no weight at k={self._k}')
            if count < 0:
                raise ContinuumError(f'Invalid branching count p_{i}={count}')
            if count:
                counts[i] = count
        return counts

    def branching_weight(self, p: Mapping[int, int]) -> Fraction:
        """``Π_i μ_i^(p_i)``."""
        value = Fraction(1)
        for i, count in self._check_counts(p).items():
            value *= self._weights.mu[i] ** count
        return value

    def branching_density(self, p: Mapping[int, int], x: Any) -> Any:
        """Density of any history with branching counts p and total length
           x, from the integral representation."""
        counts = self._check_counts(p)
        x = self._point(x)
        r = sum((self._k - i) * c for i, c in counts.items())
        return (to_mpf(self._ctx, self.branching_weight(counts)) *
                self.normalization() * self.ray_integral(x, r).imag)

    def history_density(self, history: ContinuousHistory) -> Any:
        """Density ρ(H) of a continuum history."""
        return self.branching_density(history.p, history.total_length)

    def history_density_via_sigma(self, history: ContinuousHistory) -> Any:
        """ρ(H) as a derivative of the σ_j distribution selected by the
           Euclidean division ``Σ (k-i) p_i = q (k-1) + (k-j)``."""
        ctx = self._ctx
        k = self._k
        counts = self._check_counts(history.p)
        x = self._point(history.total_length)
        q, rem = divmod(history.excess(k), k - 1)
        j = k - rem
        if j == k:
            derivative = self.rho_derivative(x, q)
            ratio = ctx.one
        else:
            window = self._window(x, rem)
            if q:
                derivative = ctx.diff(lambda u: self.sigma_j(j, u, window),
                                      x, q)
            else:
                derivative = self.sigma_j(j, x, window)
            ratio = self.normalization() / self.sigma_prefactor(j)
        sign = -1 if q % 2 else 1
        return (to_mpf(ctx, self.branching_weight(counts)) * ratio * sign *
                derivative)

    def history_density_fractional(self, history: ContinuousHistory) -> Any:
        """ρ(H) as ``Π_i (μ_i (-d)^α_i)^(p_i) ρ(x)``, with Weyl derivatives of
           the hypergeometric profile."""
        ctx = self._ctx
        k = self._k
        counts = self._check_counts(history.p)
        x = self._point(history.total_length)
        operator = WeylOperator(Fraction(history.excess(k), k - 1))
        value = operator.apply(lambda n, u: self.rho_derivative(u, n), x, ctx,
                               self.x_max())
        return to_mpf(ctx, self.branching_weight(counts)) * value

    # Integrated observables

    def moment(self, b: int) -> Any:
        """Closed form of ``<x^b> = ∫ x^b ρ(x) dx``.

           >>> evaluator = McrtContinuum(2, 20)
           >>> print(evaluator.ctx.nstr(evaluator.moment(1), 10))
           1.253314137
        """
        if b < 0:
            raise ContinuumError(f'Invalid moment order: {b}')
        ctx = self._ctx
        k = self._k
        nu = ctx.mpf(k - 1) / k
        return (ctx.factorial(b) / ctx.power(k, b * nu) * ctx.gamma(nu) /
                ctx.gamma((b + 1) * nu))

    def _profile_quadrature(self, weight: Callable[[Any], Any]) -> Any:
        ctx = self._ctx
        value, error = ctx.quad(lambda x: weight(x) * self.rho(x),
                                ctx.linspace(0, self.x_max(), 9), error=True)
        if error > ctx.mpf(10) ** -QUADRATURE_DIGITS * max(1, abs(value)):
            raise QuadratureError(f'Profile quadrature did not converge, '
                                  f'error {ctx.nstr(error, 3)}', error)
        return value

    def moment_quadrature(self, b: int) -> Any:
        """``∫ x^b ρ(x) dx`` by quadrature of the hypergeometric profile."""
        if b < 0:
            raise ContinuumError(f'Invalid moment order: {b}')
        return self._profile_quadrature(lambda x: self._ctx.power(x, b))

    def rho_fixed_size(self, mass: Any, x: Any) -> Any:
        """Profile of the tree of total mass M,
           ``ρ_M(x) = M^(1/k) ρ(x / M^ν)``."""
        ctx = self._ctx
        mass = self.convert(mass)
        if mass <= 0:
            raise ContinuumError(f'Invalid mass: {ctx.nstr(mass, 8)}')
        x = self._point(x)
        k = self._k
        scale = ctx.power(mass, ctx.mpf(k - 1) / k)
        return ctx.root(mass, k) * self.rho_hypergeometric(x / scale)

    def shape_weight_integral(self, p: Mapping[int, int]) -> Any:
        """Weight of a history shape with branching counts p, integrated
           over its branch lengths: ``∫ x^(n-1)/(n-1)! ρ(H) dx``."""
        ctx = self._ctx
        counts = self._check_counts(p)
        n = 1 + sum(i * c for i, c in counts.items())
        scale = ctx.factorial(n - 1)
        value, error = ctx.quad(
            lambda x: (ctx.power(x, n - 1) / scale *
                       self.branching_density(counts, x)),
            ctx.linspace(0, self.x_max(), 5), error=True)
        if error > ctx.mpf(10) ** -(QUADRATURE_DIGITS - 3):
            raise QuadratureError(f'Shape weight quadrature did not '
                                  f'converge, error {ctx.nstr(error, 3)}',
                                  error)
        return value

    def tail_exponent(self) -> TailFit:
        """Fit ``-log ρ(x)`` on ``[x^k, log x, 1]`` over the lengths where
           ρ spans the tail window.

           :raise PrecisionError: if the window lies beyond the precision
                                  of the evaluator
        """
        ctx = self._ctx
        k = self._k
        low, high = TAIL_WINDOW
        if ctx.dps < high:
            raise PrecisionError(f'Tail fit needs at least {high} digits')
        rate = abs(to_mpf(ctx, self._z0))
        z_low = (low + 1) * ctx.ln10
        z_high = (high - 1) * ctx.ln10
        rows = []
        values = []
        for pos in range(TAIL_POINTS):
            z = z_low + (z_high - z_low) * pos / (TAIL_POINTS - 1)
            x = ctx.root(z / rate, k)
            rho = self.rho(x)
            if not ctx.mpf(10) ** -high <= rho <= ctx.mpf(10) ** -low:
                continue
            rows.append((float(x) ** k, float(ctx.ln(x)), 1.0))
            values.append(-float(ctx.ln(rho)))
        if len(rows) < 4:
            raise PrecisionError(f'Only {len(rows)} points in the tail fit '
                                 f'window')
        solution = lstsq(nparray(rows), nparray(values), rcond=None)[0]
        self._log.info('Tail fit k=%d: %s', k, solution)
        return TailFit(float(solution[0]), -self._z0, -float(solution[1]),
                       len(rows))


@lru_cache(maxsize=32)
def continuum(k: int, precision: int = DEFAULT_PRECISION) -> McrtContinuum:
    """Shared evaluator for an order and a precision."""
    return McrtContinuum(k, precision)


def rho_integral(k: int, x: Any, precision: int = DEFAULT_PRECISION) -> Any:
    """Average profile ρ(x) from its integral representation."""
    return continuum(k, precision).rho_integral(x)


def rho_hypergeometric(k: int, x: Any,
                       precision: int = DEFAULT_PRECISION) -> Any:
    """Average profile ρ(x) from its hypergeometric series."""
    return continuum(k, precision).rho_hypergeometric(x)


def sigma_j(k: int, j: int, x: Any,
            precision: int = DEFAULT_PRECISION) -> Any:
    """Basic distribution σ_j(x)."""
    return continuum(k, precision).sigma_j(j, x)


def history_density(k: int, history: ContinuousHistory,
                    precision: int = DEFAULT_PRECISION) -> Any:
    """Density of a continuum history."""
    return continuum(k, precision).history_density(history)


def moment(k: int, b: int, precision: int = DEFAULT_PRECISION) -> Any:
    """Closed-form moment ``<x^b>`` of ρ."""
    return continuum(k, precision).moment(b)


def rho_fixed_size(k: int, mass: Any, x: Any,
                   precision: int = DEFAULT_PRECISION) -> Any:
    """Profile of the tree of total mass M."""
    return continuum(k, precision).rho_fixed_size(mass, x)


def tail_exponent(k: int, precision: int = DEFAULT_PRECISION) -> TailFit:
    """Fit of the exponential tail of ρ."""
    return continuum(k, precision).tail_exponent()


def tail_exponent_target(k: int) -> Fraction:
    """Exact tail coefficient ``(k-1)^(k-1)/k``."""
    return Fraction((k - 1)**(k - 1), k)


def log_grid(low: float, high: float, count: int) -> List[float]:
    """Geometric grid of count points from low to high."""
    if count < 2 or not 0 < low < high:
        raise ContinuumError(f'Invalid grid [{low}, {high}] x {count}')
    step = (log10(high) - log10(low)) / (count - 1)
    return [10 ** (log10(low) + pos * step) for pos in range(count)]
