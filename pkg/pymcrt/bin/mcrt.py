#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# Copyright (c) 2024 The pymcrt developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-3-Clause

"""Multicritical random tree laboratory."""

#pylint: disable-msg=broad-except
#pylint: disable-msg=invalid-name
#pylint: disable-msg=too-many-instance-attributes

from argparse import ArgumentParser, Namespace
from dataclasses import dataclass
from fractions import Fraction
from logging import Formatter, StreamHandler, getLogger, DEBUG, ERROR
from sys import modules, stderr, stdout
from traceback import format_exc
from typing import Any, Callable, Dict, List, Optional, TextIO
from pymcrt import McrtLogger
from pymcrt.checks import GateError, gate, run_checks
from pymcrt.continuum import (DEFAULT_PRECISION, ContinuousHistory,
                              McrtContinuum)
from pymcrt.discrete import (average_profile, history_weight,
                             rescaled_history_profile, rescaled_profile,
                             scaling_exponent)
from pymcrt.misc import to_fraction, to_int_list
from pymcrt.models import (WeightKind, WeightSet, load_weights,
                           minimal_weights, validate_multicritical,
                           weights_to_dict)
from pymcrt.report import Report, ReportFormat, write_json
from pymcrt.shapes import census, check_sum_rule
from pymcrt.trees import DiscreteHistory, HistoryTree


TWO_FORMULA_TOLERANCE = 1e-10
"""Largest accepted difference of the two continuum profiles."""

CONVERGENCE_TOLERANCE = 0.05
"""Largest accepted sup-distance at the last size of a converge run."""

MOMENT_TOLERANCE = 1e-6
"""Largest accepted relative error of the quadrature moments."""


@dataclass
class RunConfig:
    """Validated options of a subcommand.

       Defaults: 30 digits, x in [0, 4] with 200 steps, CSV to stdout.
    """
    command: str
    k: int
    n: List[int]
    m: int
    b_max: int
    x: List[Fraction]
    precision: int
    fmt: ReportFormat
    out: Optional[str]
    rescaled: bool
    history: Optional[str]
    weights: Optional[str] = None
    t_c: Optional[Fraction] = None

    @classmethod
    def from_args(cls, args: Namespace) -> 'RunConfig':
        """Build and validate a configuration from parsed arguments.

           :raise ValueError: on any invalid option
        """
        k = args.k
        if k < 2:
            raise ValueError(f'Invalid multicriticality order: {k}')
        sizes = to_int_list(args.n) if args.n else []
        if any(n < 1 for n in sizes):
            raise ValueError(f'Invalid tree sizes: {args.n}')
        if args.precision < 5:
            raise ValueError(f'Invalid precision: {args.precision}')
        if args.x is not None:
            points = [to_fraction(args.x)]
        else:
            low, high = to_fraction(args.x_min), to_fraction(args.x_max)
            if args.steps < 1 or not 0 <= low < high:
                raise ValueError(f'Invalid x-range [{low}, {high}] with '
                                 f'{args.steps} steps')
            points = [low + (high - low) * pos / args.steps
                      for pos in range(args.steps + 1)]
        if any(x < 0 for x in points):
            raise ValueError('Negative length in x-range')
        fmt = args.format or ('json' if args.command == 'weights' else 'csv')
        return cls(args.command, k, sizes, args.m, args.b_max, points,
                   args.precision, ReportFormat(fmt), args.out,
                   args.rescaled, args.history, args.weights,
                   to_fraction(args.tc) if args.tc is not None else None)

    def size(self) -> int:
        """The single tree size of the subcommand."""
        if len(self.n) != 1:
            raise ValueError(f'{self.command} expects a single --n value')
        return self.n[0]


class McrtTool:
    """Subcommand runner.

       Each command returns its report. Gate failures are raised only once
       the report is complete, so that the data are emitted even then.
    """

    def __init__(self, config: RunConfig):
        self._config = config
        self._log = getLogger('pymcrt.cli')
        self._evaluator = None
        self._gate_failure: Optional[str] = None

    @property
    def gate_failure(self) -> Optional[str]:
        """Description of the failed gate, if any."""
        return self._gate_failure

    @property
    def evaluator(self) -> McrtContinuum:
        """Continuum evaluator at the configured precision."""
        if not self._evaluator:
            self._evaluator = McrtContinuum(self._config.k,
                                            self._config.precision)
        return self._evaluator

    def run(self) -> Any:
        """Execute the configured subcommand."""
        command = getattr(self, f'cmd_{self._config.command}')
        self._log.info('Running %s, k=%d', self._config.command,
                       self._config.k)
        return command()

    def weight_set(self) -> WeightSet:
        """Minimal weights of the order, or the validated weights of the
           --weights file.

           :raise ValueError: if the file weights are not multicritical of
                              the configured order at --tc, or cannot be
                              rescaled when --rescaled is set
        """
        config = self._config
        if not config.weights:
            return minimal_weights(config.k)
        with open(config.weights, 'rt', encoding='utf-8') as wfp:
            w = load_weights(wfp.read())
        if w.k != config.k:
            raise ValueError(f'Weight file of order {w.k}, expected '
                             f'{config.k}')
        if w.kind == WeightKind.MINIMAL and config.t_c is None:
            point = validate_multicritical(w)
        else:
            point = validate_multicritical(w, config.t_c)
        self._log.info('Critical point T_c=%s, lambda_c=%s', point.t_c,
                       point.lambda_c)
        if config.rescaled and not point.normalized:
            raise ValueError(f'Weights {w} are not normalized at T_c = 1, '
                             f'cannot rescale')
        return w

    def _fail(self, msg: str) -> None:
        self._log.error('%s', msg)
        self._gate_failure = msg

    def cmd_weights(self) -> Any:
        weights = weights_to_dict(minimal_weights(self._config.k))['g']
        if self._config.fmt == ReportFormat.JSON:
            return weights
        report = Report(('i', 'g'))
        for i, value in sorted(weights.items(), key=lambda kv: int(kv[0])):
            report.add_row(int(i), value)
        return report

    def cmd_profile(self) -> Report:
        k = self._config.k
        n = self._config.size()
        w = self.weight_set()
        if self._config.rescaled:
            report = Report(('x', 'rho'))
            for x, y in rescaled_profile(w, n, self.evaluator.ctx):
                report.add_row(x, y)
            return report
        table = average_profile(w, n)
        report = Report(('L', 'rho', 'rho_decimal'))
        for length, value in table.rows(skip_null=True):
            report.add_row(length, value, float(value))
        report.footer['sum'] = table.total
        return report

    def cmd_continuum(self) -> Report:
        ev = self.evaluator
        report = Report(('x', 'rho_integral', 'rho_hypergeometric', 'diff'))
        worst = 0
        for x in self._config.x:
            integral = ev.rho_integral(x)
            series = ev.rho_hypergeometric(x)
            diff = abs(integral - series)
            worst = max(worst, diff)
            report.add_row(float(x), integral, series, diff)
        report.footer['max_diff'] = worst
        if worst >= TWO_FORMULA_TOLERANCE:
            self._fail(f'Profiles differ by {float(worst):.3e}')
        return report

    def cmd_converge(self) -> Report:
        if not self._config.n:
            raise ValueError('converge expects --n sizes')
        ev = self.evaluator
        w = minimal_weights(self._config.k)
        report = Report(('N', 'distance'))
        distances = []
        for n in self._config.n:
            points = rescaled_profile(w, n, ev.ctx)
            distance = max(abs(y - ev.rho(x)) for x, y in points)
            self._log.info('N=%d: sup-distance %s', n, float(distance))
            distances.append(distance)
            report.add_row(n, distance)
        if any(b >= a for a, b in zip(distances, distances[1:])):
            self._fail('Sup-distance does not decrease with N')
        elif len(distances) > 1 and distances[-1] >= CONVERGENCE_TOLERANCE:
            self._fail(f'Sup-distance {float(distances[-1]):.3e} above '
                       f'{CONVERGENCE_TOLERANCE}')
        return report

    def cmd_shapes(self) -> Report:
        k, m = self._config.k, self._config.m
        columns = ['shape'] + [f'p_{i}' for i in range(2, k + 1)] + \
            ['numerator', 'denominator']
        report = Report(columns)
        for row in census(k, m):
            report.add_row(str(row.shape), *row.counts,
                           row.weight.numerator, row.weight.denominator)
        total = check_sum_rule(k, m)
        report.footer['sum_rule'] = total
        if total != 1:
            self._fail(f'Shape weights sum to {total}')
        return report

    def cmd_moments(self) -> Report:
        ev = self.evaluator
        report = Report(('b', 'closed_form', 'quadrature', 'relative_error'))
        for b in range(self._config.b_max + 1):
            exact = ev.moment(b)
            numeric = ev.moment_quadrature(b)
            error = abs(numeric / exact - 1)
            if error >= MOMENT_TOLERANCE:
                self._fail(f'Moment {b} off by {float(error):.3e}')
            report.add_row(b, exact, numeric, error)
        return report

    def cmd_history(self) -> Report:
        config = self._config
        if not config.history:
            raise ValueError('history expects a --history text')
        if not config.n:
            history = ContinuousHistory.from_history(
                HistoryTree.from_text(config.history))
            ev = self.evaluator
            routes: Dict[str, Callable[[ContinuousHistory], Any]] = {
                'integral': ev.history_density,
                'sigma': ev.history_density_via_sigma,
                'fractional': ev.history_density_fractional,
            }
            report = Report(('route', 'density'))
            values = []
            for name, route in routes.items():
                values.append(route(history))
                report.add_row(name, values[-1])
            report.footer['spread'] = max(values) - min(values)
            return report
        history = DiscreteHistory.from_text(config.history)
        n = config.size()
        w = self.weight_set()
        if config.rescaled:
            ContinuousHistory.from_history(history)
            ev = self.evaluator
            report = Report(('x', 'discrete', 'continuum'))
            for x, y in rescaled_history_profile(w, n, history.p, ev.ctx):
                report.add_row(x, y, ev.branching_density(history.p, x))
            return report
        weight = history_weight(w, n, history)
        report = Report(('history', 'weight', 'weight_decimal', 'alpha'))
        report.add_row(str(history), weight, float(weight),
                       scaling_exponent(history, config.k))
        return report

    def cmd_checks(self) -> Report:
        results = run_checks(self._config.k, self._config.precision)
        report = Report(('check', 'residual', 'tolerance', 'passed'))
        for result in results:
            report.add_row(result.name, result.value, result.tolerance,
                           'yes' if result.passed else 'no')
        try:
            gate(results)
        except GateError as exc:
            self._fail(str(exc))
        return report


def build_parser() -> ArgumentParser:
    """Command line grammar."""
    argparser = ArgumentParser(description=modules[__name__].__doc__)
    argparser.add_argument('command',
                           choices=('weights', 'profile', 'continuum',
                                    'converge', 'shapes', 'moments',
                                    'history', 'checks'),
                           help='computation to run')
    argparser.add_argument('-k', '--k', type=int, default=2,
                           help='multicriticality order (default: 2)')
    argparser.add_argument('-n', '--n',
                           help='tree size, or comma separated sizes')
    argparser.add_argument('-m', '--m', type=int, default=4,
                           help='count of history leaves (default: 4)')
    argparser.add_argument('-b', '--b-max', type=int, default=6,
                           help='highest moment order (default: 6)')
    argparser.add_argument('-x', '--x', help='single evaluation length')
    argparser.add_argument('--x-min', default='0',
                           help='first length of the grid (default: 0)')
    argparser.add_argument('--x-max', default='4',
                           help='last length of the grid (default: 4)')
    argparser.add_argument('-s', '--steps', type=int, default=200,
                           help='grid steps (default: 200)')
    argparser.add_argument('-p', '--precision', type=int,
                           default=DEFAULT_PRECISION,
                           help=f'decimal digits (default: '
                                f'{DEFAULT_PRECISION})')
    argparser.add_argument('-f', '--format', choices=('csv', 'json'),
                           help='output format (default: csv, json for '
                                'weights)')
    argparser.add_argument('-o', '--out', help='output file (default: '
                                               'stdout)')
    argparser.add_argument('-r', '--rescaled', action='store_true',
                           help='emit continuum coordinates')
    argparser.add_argument('-H', '--history',
                           help='history text, e.g. "(((1)(2))L=[2,1,1])"')
    argparser.add_argument('-w', '--weights',
                           help='JSON weight file for profile and history '
                                '(default: minimal weights)')
    argparser.add_argument('-t', '--tc',
                           help='critical point of the file weights, '
                                'e.g. "1"')
    argparser.add_argument('-v', '--verbose', action='count', default=0,
                           help='increase verbosity')
    argparser.add_argument('-d', '--debug', action='store_true',
                           help='enable debug mode')
    return argparser


def emit(result: Any, config: RunConfig, out: TextIO) -> None:
    """Write a subcommand result."""
    if isinstance(result, Report):
        result.write(out, config.fmt)
    else:
        write_json(result, out)


def run(argv: Optional[List[str]] = None, out: TextIO = stdout) -> int:
    """Parse, run and emit.

       :return: the exit code, 0 on success, 2 on invalid options, 3 on a
                failed gate and 1 on numerical failures
    """
    argparser = build_parser()
    args = argparser.parse_args(argv)
    debug = args.debug
    loglevel = max(DEBUG, ERROR - (10 * args.verbose))
    loglevel = min(ERROR, loglevel)
    if debug:
        formatter = Formatter('%(asctime)s.%(msecs)03d %(name)-20s '
                              '%(message)s', '%H:%M:%S')
    else:
        formatter = Formatter('%(message)s')
    handler = StreamHandler(stderr)
    previous_level = McrtLogger.get_level()
    McrtLogger.log.addHandler(handler)
    McrtLogger.set_formatter(formatter)
    McrtLogger.set_level(loglevel)
    try:
        try:
            config = RunConfig.from_args(args)
        except ValueError as exc:
            argparser.error(str(exc))
        tool = McrtTool(config)
        result = tool.run()
        if config.out:
            with open(config.out, 'wt', encoding='utf-8',
                      newline='') as ofp:
                emit(result, config, ofp)
        else:
            emit(result, config, out)
        if tool.gate_failure:
            print(f'\nGate failure: {tool.gate_failure}', file=stderr)
            return 3
        return 0
    except GateError as exc:
        print(f'\nGate failure: {exc}', file=stderr)
        return 3
    except ValueError as exc:
        print(f'\nError: {exc}', file=stderr)
        if debug:
            print(format_exc(chain=False), file=stderr)
        return 2
    except (ArithmeticError, IOError) as exc:
        print(f'\nError: {exc}', file=stderr)
        if debug:
            print(format_exc(chain=False), file=stderr)
        return 1
    except KeyboardInterrupt:
        return 2
    finally:
        McrtLogger.log.removeHandler(handler)
        McrtLogger.set_level(previous_level)


def main():
    """Entry point."""
    exit(run())


if __name__ == '__main__':
    main()
